"""Command-line interface: catalog queries, verification, simulation, transport.

Exit codes: 0 success, 2 usage, 3 proven obstruction, 4 inconclusive or
tolerance exceeded, 5 integration abort, 6 relatedness failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_OBSTRUCTION = 3
EXIT_INCONCLUSIVE = 4
EXIT_ABORT = 5
EXIT_RELATEDNESS = 6

DEFAULT_PRECISION = 6
MAX_PRECISION = 17
DEFAULT_CAP = 10
SIMULATE_T1 = 10.0
# KS(c<0) solutions from moderate data blow up near t = 0.8, so the default window stays short
TRANSPORT_T1 = 0.5
TRANSPORT_TOL = 1e-4

# (source, target) system pairs with a shipped chart map
TRANSPORT_MAPS = {("kummer-schwarz", "milne-pinney"): "ksToMp", ("riccati", "milne-pinney"): "riccatiToMp"}

# flags that may repeat; the config file may list them several times too
REPEATABLE = {"param", "coeff", "slot", "fields", "guard"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    name: str = ""
    parameters: dict = field(default_factory=dict)
    coefficients: dict = field(default_factory=dict)
    x0: list | None = None
    t0: float = 0.0
    t1: float | None = None
    rtol: float = 1e-9
    atol: float = 1e-12
    out: str | None = None
    format: str | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return asdict(self)


# -- argument plumbing ----------------------------------------------------------------

def _pairs(items, flag):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--{flag} expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _floats(text, n, flag):
    try:
        vals = [float(v) for v in str(text).split(",")]
    except ValueError:
        raise UsageError(f"--{flag} expects {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"--{flag} expects {n} comma-separated numbers, got {text!r}")
    return vals


def split_top_level(text: str, sep=","):
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment; repeatable keys accumulate."""
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = line.split("=", 1)
        key = key.strip().lstrip("-").replace("-", "_")
        value = value.strip()
        if key in REPEATABLE:
            values.setdefault(key, []).append(value)
        else:
            values[key] = value
    return values


def apply_config(args, parser):
    """Fill options missing from the command line; flags always win."""
    if not getattr(args, "config", None):
        return args
    conf = read_config(args.config)
    actions = {a.dest: a for a in _all_actions(parser, args)}
    for key, value in conf.items():
        if key not in actions:
            raise UsageError(f"unknown config key {key!r}")
        current = getattr(args, key, None)
        if key in REPEATABLE:
            given = current or []
            if key in ("param", "coeff", "slot"):
                merged = {**_pairs(value, key), **_pairs(given, key)}
                setattr(args, key, [f"{k}={v}" for k, v in merged.items()])
            else:
                setattr(args, key, given or value)
            continue
        if current is not None and current is not False:
            continue
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            setattr(args, key, value.lower() in ("1", "true", "yes", "on"))
        else:
            try:
                setattr(args, key, action.type(value) if action.type else value)
            except (TypeError, ValueError):
                raise UsageError(f"config key {key!r}: bad value {value!r}") from None
    return args


def _all_actions(parser, args):
    yield from parser._actions
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for name, sub in action.choices.items():
                if name == getattr(args, "command", None):
                    yield from _all_actions(sub, args)


# -- output ---------------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if hasattr(v, "to_json"):
        return v.to_json()
    return str(v)


def emit(report: dict, args, config: RunConfig, anchors=()):
    doc = {"tool": "lieham", "version": __version__, "config": config.to_json(), "anchors": list(anchors)}
    if not args.no_timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc.update(report)
    text = json.dumps(doc, indent=2, ensure_ascii=False, default=_jsonable)
    report_path = getattr(args, "report", None)
    if report_path:
        Path(report_path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _precision(args):
    p = args.precision if args.precision is not None else DEFAULT_PRECISION
    if not 1 <= p <= MAX_PRECISION:
        raise UsageError(f"--precision must lie in 1..{MAX_PRECISION}")
    return p


def write_trajectory(path, traj, fmt, precision, h=None, residual=None):
    fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
    if fmt == "json":
        doc = traj.to_json()
        if h is not None:
            doc["h"] = list(map(float, h))
            doc["residual"] = list(map(float, residual))
        Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")
        return fmt
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "y"] + (["h", "residual"] if h is not None else []))

        def g(v):
            return f"{v:.{precision}g}"

        for k in range(len(traj.t)):
            row = [g(traj.t[k]), g(traj.x[k]), g(traj.y[k])]
            if h is not None:
                # residual k belongs to the interval ending at sample k
                row += [g(h[k]), g(residual[k - 1]) if k > 0 else "nan"]
            w.writerow(row)
    return fmt


# -- catalog --------------------------------------------------------------------------

def cmd_catalog(args):
    from .catalog import get_entry, list_entries, show, verify_entry

    config = RunConfig("catalog " + args.action, args.id or "", _pairs(args.param, "param"), seed=args.seed,
                       extra={"slots": _pairs(args.slot, "slot")})
    if args.action == "list":
        dims = None
        if args.dim_min is not None or args.dim_max is not None:
            dims = (args.dim_min or 0, args.dim_max or 10 ** 6)
        ids = list_entries(hamiltonian_only=args.hamiltonian_only, primitive_only=args.primitive_only,
                           dimension_range=dims, obstructed_only=args.obstructed_only)
        config.extra.update(hamiltonian_only=args.hamiltonian_only, primitive_only=args.primitive_only,
                            obstructed_only=args.obstructed_only, dimension_range=dims)
        if args.json:
            emit({"ids": ids, "count": len(ids)}, args, config, [f"catalog row {i}" for i in ids])
        else:
            print("\n".join(ids))
        return EXIT_OK
    if not args.id:
        raise UsageError(f"catalog {args.action} needs an entry id")
    entry = get_entry(args.id, config.parameters or None, config.extra["slots"] or None)
    if args.action == "show":
        if args.json:
            emit({"entry": entry.to_json()}, args, config, [entry.anchor])
        else:
            print(show(entry))
        return EXIT_OK
    rep = verify_entry(entry, seed=args.seed) if args.seed is not None else verify_entry(entry)
    emit({"verify": rep.to_json(), "passed": rep.passed}, args, config, [entry.anchor])
    return EXIT_OK if rep.passed else EXIT_INCONCLUSIVE


# -- verify ---------------------------------------------------------------------------

BASE_POINTS = ((0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (-1, 1), (1, -1))


def _base_point(omega, basis, seed):
    """A small integer point inside every guard, else a seeded rational one."""
    from .expr import evaluate, natural_guards, rational_points

    guards = list(omega.guards) + [g for X in basis for g in X.guards] + natural_guards(omega.f)
    for x, y in BASE_POINTS:
        env = {"x": float(x), "y": float(y)}
        try:
            values = [evaluate(g.expr, env) for g in guards]
        except (ArithmeticError, ValueError):
            continue
        if all(v > 0.1 if g.relation == ">" else abs(v) > 0.1 for g, v in zip(guards, values)):
            return (x, y)
    p = rational_points(["x", "y"], guards, n=1, seed=seed)[0]
    return (p["x"], p["y"])


def _independent_pair(basis):
    """First pair of generically independent fields; it fixes an integrating factor up to scale."""
    from .expr import is_zero, normalize

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            X, Y = basis[i], basis[j]
            if not is_zero(normalize(X.xc * Y.yc - X.yc * Y.xc)):
                return (i, j)
    return ()


def cmd_verify(args):
    from .expr import DEFAULT_SEED, parse_guard
    from .liealg import CapExceeded, algebra_fingerprint, lie_closure
    from .symplectic import (
        DEFAULT_ANSATZ,
        BracketNotClosed,
        Inconclusive,
        bracket_table,
        find_integrating_factor,
        hamiltonian_function,
        no_go_witness,
    )
    from .vfield import PlanarVectorField

    seed = DEFAULT_SEED if args.seed is None else args.seed
    if not args.fields:
        raise UsageError("verify needs at least one --fields 'X^x; X^y'")
    guards = [parse_guard(g) for g in args.guard or []]
    fields = [PlanarVectorField.parse(f, guards) for f in args.fields]
    ansatz = split_top_level(args.ansatz) if args.ansatz else list(DEFAULT_ANSATZ)
    config = RunConfig("verify", seed=seed, extra={"fields": list(args.fields), "ansatz": ansatz,
                                                   "generators": args.generators, "guards": args.guard or [],
                                                   "cap": args.cap})
    report = {"stages": {}}
    stages = report["stages"]

    def finish(code, verdict):
        report["verdict"] = verdict
        report["exit_code"] = code
        emit(report, args, config, anchors)
        return code

    anchors = []
    A = lie_closure(fields, args.cap, seed=seed)
    if isinstance(A, CapExceeded):
        stages["closure"] = {**A.to_json(), "diagnosis": f"not a finite-dimensional Lie algebra up to cap {args.cap}"}
        return finish(EXIT_INCONCLUSIVE, "inconclusive")
    if args.generators:
        try:
            gens = tuple(int(i) - 1 for i in args.generators.split(","))
        except ValueError:
            raise UsageError("--generators expects comma-separated 1-based indices") from None
        if any(not 0 <= i < A.dim for i in gens):
            raise UsageError(f"--generators indices must lie in 1..{A.dim}")
    else:
        gens = _independent_pair(A.basis)
    from .liealg import VFLieAlgebra

    A = VFLieAlgebra(A.basis, gens, "input", tuple(guards))
    fp = algebra_fingerprint(A)
    stages["closure"] = {"dimension": A.dim, "basis": [X.to_json() for X in A.basis], "generators": list(gens)}
    stages["fingerprint"] = fp.to_json() if hasattr(fp, "to_json") else {"name": fp.name}
    anchors.append(f"fingerprint {fp.name}")
    witness = no_go_witness(A, seed=seed) if gens else Inconclusive("rank one: no generator pair fixes the area form")
    stages["no_go"] = witness.to_json()
    if not isinstance(witness, Inconclusive):
        return finish(EXIT_OBSTRUCTION, "obstruction")
    ifr = find_integrating_factor(A.basis, ansatz, seed=seed)
    if ifr is None:
        stages["integrating_factor"] = {"found": False, "ansatz": ansatz}
        return finish(EXIT_INCONCLUSIVE, "inconclusive")
    omega = ifr.form
    stages["integrating_factor"] = {"found": True, "ansatz": ansatz, "exponents": [str(e) for e in ifr.exponents],
                                    "homogeneous_dimension": ifr.solution_space_dim, "omega": omega.to_json()}
    base = _base_point(omega, A.basis, seed)
    hs = [hamiltonian_function(X, omega, base_point=base, seed=seed) for X in A.basis]
    from .expr import to_text

    stages["hamiltonian_functions"] = {"base_point": [str(c) for c in base], "functions": [to_text(h) for h in hs]}
    try:
        table = bracket_table(hs, omega, vf_name=fp.name, seed=seed)
    except BracketNotClosed as exc:
        stages["bracket_table"] = {"closed": False, "reason": str(exc)}
        return finish(EXIT_INCONCLUSIVE, "inconclusive")
    stages["bracket_table"] = table.to_json()
    return finish(EXIT_OK, "hamiltonian")


# -- simulate -------------------------------------------------------------------------

def _system(name, params, coeffs):
    from .dynamics import make_system

    return make_system(name, params or None, coeffs or None)


def _anchors_for(S):
    from .catalog import entry_ids

    ids = set(entry_ids()) | {"I14A", "I14B"}
    return [f"catalog row {S.regime}"] if S.regime in ids else []


def cmd_simulate(args):
    from .dynamics import MissingStructureError, conservation_residual, integrate

    params, coeffs = _pairs(args.param, "param"), _pairs(args.coeff, "coeff")
    config = RunConfig("simulate", args.system, params, coeffs, seed=args.seed, rtol=args.rtol, atol=args.atol,
                       out=args.out, format=args.format,
                       extra={"max_step": args.max_step, "samples": args.samples, "fixed_step": args.fixed_step,
                              "structure": args.structure})
    S = _system(args.system, params, coeffs)
    if args.structure:
        if args.structure not in S.structures:
            raise UsageError(f"{S.name} has no structure {args.structure!r}; known: {', '.join(S.structures)}")
        S.structure = S.structures[args.structure]
    config.x0 = _floats(args.x0, 2, "x0") if args.x0 else [1.0, 0.0]
    config.t0 = args.t0 if args.t0 is not None else 0.0
    config.t1 = args.t1 if args.t1 is not None else SIMULATE_T1
    samples = np.linspace(config.t0, config.t1, args.samples) if args.samples else None
    precision = _precision(args)
    try:
        traj = integrate(S, config.x0, config.t0, config.t1, rtol=args.rtol, atol=args.atol, max_step=args.max_step,
                         samples=samples, fixed_step=args.fixed_step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"system": S.to_json(), "termination": traj.termination, "detail": traj.detail,
              "t_end": traj.t_end, "final_state": list(traj.final_state), "stats": traj.stats.to_json()}
    h = residual = None
    if S.structure is not None and len(traj.t) > 1:
        try:
            cons = conservation_residual(traj, S)
        except MissingStructureError:
            cons = None
        if cons is not None:
            report["conservation"] = {"structure": S.structure.label, **cons.to_json()}
            if len(cons.t) == len(traj.t):
                h, residual = cons.h, cons.residual
    if args.out:
        config.format = write_trajectory(args.out, traj, args.format, precision, h, residual)
    code = EXIT_OK if traj.completed else EXIT_ABORT
    report["exit_code"] = code
    emit(report, args, config, _anchors_for(S))
    return code


# -- transport ------------------------------------------------------------------------

def cmd_transport(args):
    from .dynamics import IntegrationAbort, RelatednessError, chart_map, identity_map, make_system, transport_compare
    from .dynamics.maps import MapConstraintError, target_parameters
    from .dynamics.systems import _ALIASES
    from .expr import to_text

    def canon(n):
        k = n.strip().lower().replace("_", "-")
        return _ALIASES.get(k, k)

    src_name, tgt_name = canon(args.source), canon(args.target)
    params, coeffs = _pairs(args.param, "param"), _pairs(args.coeff, "coeff")
    kind = args.map or ("identity" if src_name == tgt_name else TRANSPORT_MAPS.get((src_name, tgt_name)))
    if kind is None:
        raise UsageError(f"no chart map from {src_name} to {tgt_name}; pairs: "
                         + ", ".join(f"{a}->{b}" for a, b in TRANSPORT_MAPS))
    config = RunConfig("transport", f"{src_name}->{tgt_name}", params, coeffs, seed=args.seed, rtol=args.rtol,
                       atol=args.atol, extra={"map": kind, "tol": args.tol, "samples": args.samples})
    config.x0 = _floats(args.x0, 2, "x0") if args.x0 else [1.0, 0.3]
    config.t0 = args.t0 if args.t0 is not None else 0.0
    config.t1 = args.t1 if args.t1 is not None else TRANSPORT_T1
    try:
        if kind == "identity":
            phi = identity_map()
            src_params = tgt_params = params
        else:
            phi = chart_map(kind, params)
            tgt_params = target_parameters(kind, phi)
            src_params = {"c": phi.parameters["c_ks"]} if kind == "ksToMp" else {}
    except MapConstraintError as exc:
        raise UsageError(str(exc)) from None
    source = make_system(src_name, src_params or None, coeffs or None)
    target = make_system(tgt_name, tgt_params or None)
    # coefficients pair by basis index
    target = make_system(tgt_name, tgt_params or None,
                         {n: to_text(c) for n, c in zip(target.coefficient_names, source.coefficients)})
    anchors = [f"map {kind}"] + _anchors_for(source) + _anchors_for(target)
    kw = {"seed": args.seed} if args.seed is not None else {}
    try:
        rep = transport_compare(source, phi, target, config.x0, config.t0, config.t1, rtol=args.rtol,
                                atol=args.atol, samples=args.samples, **kw)
    except RelatednessError as exc:
        emit({"error": str(exc), "relatedness": [r.to_json() for r in exc.reports], "exit_code": EXIT_RELATEDNESS},
             args, config, anchors)
        return EXIT_RELATEDNESS
    except IntegrationAbort as exc:
        partial = exc.trajectory.to_json() if exc.trajectory is not None else None
        emit({"error": str(exc), "partial": partial, "exit_code": EXIT_ABORT}, args, config, anchors)
        return EXIT_ABORT
    code = EXIT_OK if rep.max_deviation < args.tol else EXIT_INCONCLUSIVE
    emit({"max_deviation": rep.max_deviation, "tol": args.tol, "within_tol": code == EXIT_OK,
          "source_stats": rep.source.stats.to_json(), "target_stats": rep.target.stats.to_json(),
          "map_parameters": {k: to_text(v) if hasattr(v, "symbols") else v for k, v in phi.parameters.items()}
          if getattr(phi, "parameters", None) else {},
          "exit_code": code}, args, config, anchors)
    return code


# -- parser ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; command-line flags win")
    common.add_argument("--seed", type=int, default=None, help="sampling seed")
    common.add_argument("--precision", type=int, default=None, help="significant digits in CSV (1..17)")
    common.add_argument("--no-timestamp", action="store_true", default=None, help="omit the timestamp field")
    common.add_argument("--report", default=None, help="write the JSON report here instead of stdout")

    p = argparse.ArgumentParser(prog="lieham", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list, show or verify classification rows")
    c.add_argument("action", choices=("list", "show", "verify"))
    c.add_argument("id", nargs="?")
    c.add_argument("--param", action="append", help="parameter binding name=value")
    c.add_argument("--slot", action="append", help="slot function name=expr (xi1, eta2, ...)")
    c.add_argument("--hamiltonian-only", action="store_true", default=None)
    c.add_argument("--primitive-only", action="store_true", default=None)
    c.add_argument("--obstructed-only", action="store_true", default=None)
    c.add_argument("--dim-min", type=int, default=None)
    c.add_argument("--dim-max", type=int, default=None)
    c.add_argument("--json", action="store_true", default=None, help="JSON instead of text")
    c.set_defaults(func=cmd_catalog)

    v = sub.add_parser("verify", parents=[common], help="closure, obstruction and Hamiltonian structure")
    v.add_argument("--fields", action="append", help="'X^x; X^y' (repeat for each field)")
    v.add_argument("--generators", default=None, help="1-based generator indices, e.g. 1,2")
    v.add_argument("--ansatz", default=None, help="comma-separated factors p_i of f = prod p_i^e_i")
    v.add_argument("--guard", action="append", help="domain guard such as 'y > 0'")
    v.add_argument("--cap", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", parents=[common], help="integrate a named t-dependent system")
    s.add_argument("system")
    s.add_argument("--param", action="append")
    s.add_argument("--coeff", action="append", help="coefficient name=expr in t")
    s.add_argument("--structure", default=None, help="which Lie-Hamiltonian structure to monitor")
    s.add_argument("--x0", default=None, help="x,y")
    s.add_argument("--t0", type=float, default=None)
    s.add_argument("--t1", type=float, default=None)
    s.add_argument("--rtol", type=float, default=None)
    s.add_argument("--atol", type=float, default=None)
    s.add_argument("--max-step", type=float, default=None)
    s.add_argument("--fixed-step", type=float, default=None)
    s.add_argument("--samples", type=int, default=None, help="uniform output grid size")
    s.add_argument("--out", default=None, help="trajectory file")
    s.add_argument("--format", choices=("csv", "json"), default=None)
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("transport", parents=[common], help="compare mapped and target trajectories")
    t.add_argument("--from", dest="source", default=None)
    t.add_argument("--to", dest="target", default=None)
    t.add_argument("--map", default=None, help="chart map kind; inferred from the pair when omitted")
    t.add_argument("--param", action="append", help="map parameter (c, c_ks, c_mp, lambda, branch)")
    t.add_argument("--coeff", action="append", help="source coefficient name=expr")
    t.add_argument("--x0", default=None)
    t.add_argument("--t0", type=float, default=None)
    t.add_argument("--t1", type=float, default=None)
    t.add_argument("--rtol", type=float, default=None)
    t.add_argument("--atol", type=float, default=None)
    t.add_argument("--tol", type=float, default=None)
    t.add_argument("--samples", type=int, default=None)
    t.set_defaults(func=cmd_transport)
    return p


_LATE_DEFAULTS = {"rtol": 1e-9, "atol": 1e-12, "tol": TRANSPORT_TOL, "cap": DEFAULT_CAP}
TRANSPORT_SAMPLES = 201


def _late_defaults(args):
    for key in ("rtol", "atol", "tol", "cap"):
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, _LATE_DEFAULTS[key])
    if args.command == "transport":
        if args.samples is None:
            args.samples = TRANSPORT_SAMPLES
        if not args.source or not args.target:
            raise UsageError("transport needs --from and --to")
    for key in ("no_timestamp", "hamiltonian_only", "primitive_only", "obstructed_only", "json"):
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, False)


def main(argv=None) -> int:
    from .catalog import ParameterRangeError, UnknownEntryError
    from .dynamics import MissingStructureError, RegimeError, UnknownSystemError
    from .expr import ParseError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        apply_config(args, parser)
        _late_defaults(args)
        return args.func(args)
    except (UsageError, ParseError, UnknownEntryError, ParameterRangeError, UnknownSystemError, RegimeError,
            MissingStructureError) as exc:
        msg = f"unknown catalog entry {exc.args[0]!r}" if isinstance(exc, UnknownEntryError) else exc
        print(f"lieham: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
