"""The bundled classification tables, instantiated at concrete parameters."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from ..expr import (
    ONE,
    Const,
    DEFAULT_SEED,
    Expr,
    Sym,
    Verdict,
    constant_value,
    differentiate,
    is_zero,
    normalize,
    parse,
    parse_guard,
    substitute,
    to_text,
)
from ..liealg import (
    NotClosed,
    StructureConstants,
    VFLieAlgebra,
    check_invariant_distribution,
    fingerprint,
)
from ..symplectic import (
    BracketNotClosed,
    HamiltonianTable,
    SymplecticForm,
    bracket_table,
    hamiltonian_function,
    is_hamiltonian,
    no_go_witness,
)
from ..vfield import PlanarVectorField


class UnknownEntryError(KeyError):
    pass


class ParameterRangeError(ValueError):
    pass


@lru_cache(maxsize=1)
def _data():
    with resources.files("lieham.data").joinpath("gko.json").open(encoding="utf-8") as fh:
        return json.load(fh)


def catalog_version() -> int:
    return _data()["version"]


def _raw(entry_id: str):
    for e in _data()["entries"]:
        if e["id"] == entry_id:
            return e
    raise UnknownEntryError(entry_id)


def _order_key(entry_id: str):
    m = re.fullmatch(r"([PI])(\d+)([AB]?)", entry_id)
    if not m:
        return (2, 0, entry_id)
    return (0 if m.group(1) == "P" else 1, int(m.group(2)), m.group(3))


# -- templates -----------------------------------------------------------------

_BRACE = re.compile(r"\{([^{},]+)\}")


def _int_value(text: str, env) -> int:
    v = constant_value(substitute(parse(text), {k: Const(v) for k, v in env.items()}))
    if v is None or v.denominator != 1:
        raise ValueError(f"template index {text!r} is not an integer")
    return int(v)


def _fmt(text: str, env) -> str:
    """Replace ``{expr}`` by its integer value (``h{k+4}``, ``x^{j}``)."""
    return _BRACE.sub(lambda m: str(_int_value(m.group(1), env)), text)


def _fmt_label(text: str, env) -> str:
    return re.sub(r"R\^1(?!\d)", "R", _fmt(text, env))


def _expand(items, env, key):
    """Flatten ``repeat`` blocks into ``(text, local_env)`` pairs."""
    out = []
    for item in items:
        if isinstance(item, str):
            out.append((item, dict(env)))
            continue
        var = item["repeat"]
        lo, hi = _int_value(item["from"], env), _int_value(item["to"], env)
        for j in range(lo, hi + 1):
            out.append((item[key], {**env, var: Fraction(j)}))
    return out


_RANGES = {
    "alpha >= 0": lambda p: p["alpha"] >= 0,
    "0 < |alpha| <= 1": lambda p: 0 < abs(p["alpha"]) <= 1,
    "r >= 1": lambda p: p["r"] >= 1 and p["r"].denominator == 1,
    "any": lambda p: True,
}


def parse_relation(text: str, n: int):
    """``"{h1,h2} = -4*h1 - h0"`` -> ``((0, 1), {0: -4, n: -1})``; h0 maps to index n."""
    m = re.fullmatch(r"\s*\{\s*h(\d+)\s*,\s*h(\d+)\s*\}\s*=\s*(.+)", text)
    if not m:
        raise ValueError(f"cannot read relation {text!r}")
    i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
    rhs = parse(m.group(3))
    coeffs = {}
    for name in rhs.symbols:
        if not re.fullmatch(r"h\d+", name):
            raise ValueError(f"unexpected symbol {name!r} in {text!r}")
        k = int(name[1:])
        idx = n if k == 0 else k - 1
        c = constant_value(differentiate(rhs, name))
        if c is None:
            raise ValueError(f"relation {text!r} is not linear")
        if c:
            coeffs[idx] = c
    return (i, j), coeffs


def relations_to_constants(relations, n: int) -> StructureConstants:
    rel = {}
    for text in relations:
        (i, j), row = parse_relation(text, n)
        if i > j:
            i, j, row = j, i, {k: -v for k, v in row.items()}
        rel[(i, j)] = row
    return StructureConstants.from_brackets(n + 1, rel)


# -- entries ------------------------------------------------------------------------

@dataclass
class HamiltonianData:
    omega: SymplecticForm
    functions: list
    relations: list | None
    extension: bool
    algebra: str
    retrivialization: list | None = None
    display: str = ""
    note: str = ""

    def expected_constants(self) -> StructureConstants | None:
        if self.relations is None:
            return None
        return relations_to_constants(self.relations, len(self.functions))

    def to_json(self):
        return {
            "omega": to_text(self.omega.f),
            "functions": [to_text(h) for h in self.functions],
            "relations": self.relations,
            "extension": self.extension,
            "algebra": self.algebra,
            "retrivialization": None if self.retrivialization is None else [str(v) for v in self.retrivialization],
            "note": self.note,
        }


@dataclass
class CatalogEntry:
    id: str
    family: str
    primitive: bool
    display: str
    params: dict
    slots: dict
    algebra: VFLieAlgebra
    domain: list
    label: str
    hamiltonian: HamiltonianData | None = None
    distribution: PlanarVectorField | None = None
    expected_obstructed: bool = False
    defaults_used: bool = True

    @property
    def basis(self):
        return self.algebra.basis

    @property
    def generators(self):
        return self.algebra.generators

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def anchor(self):
        kind = "Hamiltonian row" if self.hamiltonian else "row"
        return f"catalog {kind} {self.id}"

    def to_json(self):
        return {
            "id": self.id,
            "family": self.family,
            "primitive": self.primitive,
            "display": self.display,
            "params": {k: str(v) for k, v in self.params.items()},
            "slots": {k: [to_text(e) for e in v] for k, v in self.slots.items()},
            "basis": [X.to_json() for X in self.basis],
            "generators": list(self.generators),
            "domain": [g.text for g in self.domain],
            "label": self.label,
            "hamiltonian": None if self.hamiltonian is None else self.hamiltonian.to_json(),
            "distribution": None if self.distribution is None else self.distribution.to_json(),
            "expected_obstructed": self.expected_obstructed,
            "anchor": self.anchor,
        }


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    return Fraction(v).limit_denominator(10**9)


def _resolve_id(entry_id: str, slots):
    entry_id = entry_id.strip().upper()
    if entry_id == "I14":
        etas = [normalize(parse(s) if isinstance(s, str) else s) for s in (slots or {}).get("eta", [])]
        if etas and any(constant_value(e) is not None for e in etas):
            return "I14B"
        return "I14A"
    return entry_id


def _params_match(when: dict, params: dict) -> bool:
    return all(params.get(k) == Fraction(v) for k, v in when.items())


def get_entry(entry_id: str, params: dict | None = None, slots: dict | None = None) -> CatalogEntry:
    """Instantiate a row; missing parameters and slot functions take the shipped defaults."""
    entry_id = _resolve_id(entry_id, slots)
    raw = _raw(entry_id)
    spec = raw.get("params", {})
    given = {k: _as_fraction(v) for k, v in (params or {}).items()}
    unknown = set(given) - set(spec)
    if unknown:
        raise ParameterRangeError(f"{entry_id} takes no parameter(s) {sorted(unknown)}")
    values = {k: Fraction(s["default"]) for k, s in spec.items()}
    values.update(given)
    for k, s in spec.items():
        if not _RANGES[s["range"]](values):
            raise ParameterRangeError(f"{entry_id}: {k} = {values[k]} violates {s['range']}")

    slot_values, defaults_used = {}, True
    r = int(values["r"]) if "r" in values else None
    for name, s in raw.get("slots", {}).items():
        user = (slots or {}).get(name)
        if user is not None:
            funcs = [normalize(parse(u) if isinstance(u, str) else u) for u in user]
            if r is not None and len(funcs) != r:
                raise ParameterRangeError(f"{entry_id}: slot {name} needs {r} functions, got {len(funcs)}")
            defaults_used = False
        else:
            funcs = []
            for j in range(1, (r or len(s["defaults"])) + 1):
                text = s["defaults"][j - 1] if j <= len(s["defaults"]) else _fmt(s["rule"], {"j": Fraction(j)})
                funcs.append(normalize(parse(text)))
        slot_values[name] = funcs
    if (slots or {}).keys() - raw.get("slots", {}).keys():
        raise ParameterRangeError(f"{entry_id} has no slot(s) {sorted(set(slots) - set(raw.get('slots', {})))}")

    bind = {k: Const(v) for k, v in values.items()}
    domain = [parse_guard(g) for g in raw.get("domain", [])]
    basis = []
    for text, env in _expand(raw["basis"], values, "field"):
        X = PlanarVectorField.parse(_fmt(text, env), domain)
        local = dict(bind)
        for name, funcs in slot_values.items():
            if "j" in env and name in X.symbols:
                local[name] = funcs[int(env["j"]) - 1]
        basis.append(X.substitute(local))
    label = _fmt_label(raw["label"], values)
    algebra = VFLieAlgebra(tuple(basis), tuple(raw["generators"]), label=entry_id, guards=tuple(domain))

    ham = None
    hraw = raw.get("hamiltonian")
    when = hraw.get("when", {}) if hraw is not None else {}
    # r only selects which instance carries stored functions; every r is Hamiltonian
    if hraw is not None and _params_match({k: v for k, v in when.items() if k != "r"}, values):
        omega = SymplecticForm(parse(hraw["omega"]), tuple(domain))
        if defaults_used and _params_match(when, values):
            funcs = [normalize(substitute(parse(_fmt(t, env)), bind)) for t, env in _expand(hraw["functions"], values, "function")]
            rels = [_fmt(t, env) for t, env in _expand(hraw["relations"], values, "relation")]
            retriv = [Fraction(v) for v in hraw["retrivialization"]] if "retrivialization" in hraw else None
        else:
            base = _base_point(omega, basis)
            funcs = [hamiltonian_function(X, omega, base) for X in basis]
            rels, retriv = None, None
        ham = HamiltonianData(omega, funcs, rels, bool(hraw["extension"]), _fmt_label(hraw["algebra"], values),
                              retriv, hraw.get("display", ""), hraw.get("note", ""))
    obstructed = "obstructed" in raw and _params_match(raw["obstructed"], values) and ham is None
    dist = PlanarVectorField.parse(raw["distribution"]) if "distribution" in raw else None
    return CatalogEntry(entry_id, raw["family"], raw["primitive"], _fmt_label(raw["display"], values),
                        values, slot_values, algebra, domain, label, ham, dist, obstructed, defaults_used)


def _base_point(omega, basis):
    from ..expr import rational_points

    guards = list(omega.guards) + [g for X in basis for g in X.guards]
    p = rational_points(["x", "y"], guards, n=1)[0]
    return (p["x"], p["y"])


def entry_ids():
    return sorted((e["id"] for e in _data()["entries"]), key=_order_key)


def hamiltonian_instances():
    """``(id, params)`` for every shipped Lie algebra of Hamiltonian fields."""
    out = []
    for e in sorted(_data()["entries"], key=lambda e: _order_key(e["id"])):
        if "hamiltonian" in e:
            out.append((e["id"], {k: Fraction(v) for k, v in e["hamiltonian"].get("when", {}).items()}))
    return out


def obstructed_instances():
    """``(id, params)`` for every instance that admits no compatible area form."""
    out = []
    for e in sorted(_data()["entries"], key=lambda e: _order_key(e["id"])):
        if "obstructed" in e:
            out.append((e["id"], {k: Fraction(v) for k, v in e["obstructed"].items()}))
    return out


def _instance_text(entry_id, params):
    if not params:
        return entry_id
    inner = ",".join(f"{k}={v}" for k, v in params.items())
    return f"{entry_id}({inner})"


def list_entries(hamiltonian_only=False, primitive_only=False, dimension_range=None, obstructed_only=False,
                 with_params=False):
    """Ids in the order P then I.

    Unfiltered, one id per family (I14 once).  The Hamiltonian filter lists
    I14A and I14B separately, and the α-split families at the parameter
    where they are Hamiltonian.
    """
    if hamiltonian_only or obstructed_only:
        pool = hamiltonian_instances() if hamiltonian_only else obstructed_instances()
        if hamiltonian_only and obstructed_only:
            pool = []
    else:
        seen, pool = set(), []
        for e in sorted(_data()["entries"], key=lambda e: _order_key(e["id"])):
            if e["family"] in seen:
                continue
            seen.add(e["family"])
            pool.append((e["family"], {}))
    out = []
    for entry_id, params in pool:
        raw = _raw("I14A" if entry_id == "I14" else entry_id)
        if primitive_only and not raw["primitive"]:
            continue
        if dimension_range is not None:
            lo, hi = dimension_range
            d = get_entry(entry_id, params).dim
            if d < lo or d > hi:
                continue
        out.append((entry_id, params) if with_params else entry_id)
    return out


def instance_labels(with_params=True):
    return [_instance_text(i, p) for i, p in list_entries(hamiltonian_only=True, with_params=True)]


def all_instances():
    """One instance per family at its default parameters, plus I14B."""
    ids = []
    for e in sorted(_data()["entries"], key=lambda e: _order_key(e["id"])):
        ids.append(e["id"])
    return ids


def inclusion_facts():
    d = _data()
    return {"facts": d["inclusions"], "disclaimer": d["disclaimer"]}


# -- verification -------------------------------------------------------------------------------

@dataclass
class VerifyReport:
    entry: CatalogEntry
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        return {"id": self.entry.id, "params": {k: str(v) for k, v in self.entry.params.items()},
                "anchor": self.entry.anchor, "passed": self.passed, "checks": dict(self.checks),
                "details": self.details}


def vf_constants_expected_for_functions(sc: StructureConstants) -> StructureConstants:
    """``{h_i, h_j}`` modulo constants carries ``-c_ij^k``."""
    return sc.negated()


def _name_matches(table: HamiltonianTable, stored: str) -> bool:
    """Stored names use the table's own notation, so compare up to aliases."""
    from ..symplectic import extension_name

    if table.name == stored:
        return True
    aliases = fingerprint(table.quotient()).names
    if not table.central_extension:
        return stored in aliases
    if table.retrivialization is not None:
        return any(f"{a}⊕R" == stored for a in aliases)
    return any(extension_name(a) == stored for a in aliases)


def verify_entry(entry: CatalogEntry, seed=DEFAULT_SEED, bracket_table_fn=bracket_table) -> VerifyReport:
    rep = VerifyReport(entry)
    A = entry.algebra
    sc = A.structure_constants()
    if isinstance(sc, NotClosed):
        rep.checks["closure"] = False
        rep.details["closure"] = sc.to_json()
        return rep
    rep.checks["closure"] = True
    rep.checks["jacobi"] = sc.jacobi_residual() == 0
    fp = fingerprint(sc)
    rep.details["fingerprint"] = fp.to_json()
    rep.details["relations"] = sc.relations_text()
    rep.checks["label"] = entry.label in fp.names
    if entry.distribution is not None:
        inv = check_invariant_distribution(A, entry.distribution)
        rep.checks["invariant_distribution"] = inv.holds
        rep.details["invariant_distribution"] = inv.to_json()

    ham = entry.hamiltonian
    if ham is not None:
        verdicts = [is_hamiltonian(X, ham.omega, seed=seed) for X in A.basis]
        rep.checks["hamiltonian_residuals"] = all(v.verdict == Verdict.PROVED_EQUAL for v in verdicts)
        rep.details["residuals"] = [v.to_json() for v in verdicts]
        from ..symplectic import verify_hamiltonian

        dh = [verify_hamiltonian(X, ham.omega, h, seed=seed) for X, h in zip(A.basis, ham.functions)]
        rep.checks["dh_equals_contraction"] = all(d.is_equal for d in dh)
        try:
            table = bracket_table_fn(ham.functions, ham.omega, vf_name=fp.name, seed=seed)
        except BracketNotClosed as exc:
            rep.checks["bracket_table"] = False
            rep.details["bracket_table"] = str(exc)
            return rep
        rep.details["bracket_table"] = table.to_json()
        expected = ham.expected_constants()
        if expected is not None:
            rep.checks["bracket_table"] = expected == table.constants
        if ham.relations is not None:
            rep.checks["extension_flag"] = table.central_extension == ham.extension
            rep.checks["algebra_name"] = _name_matches(table, ham.algebra)
        else:
            # computed functions carry arbitrary constants; judge them after retrivialization
            flat = table.retrivialized(seed=seed) if table.retrivialization is not None else table
            rep.checks["extension_flag"] = flat.central_extension == ham.extension
            rep.checks["algebra_name"] = _name_matches(flat, ham.algebra)
        coherent = vf_constants_expected_for_functions(sc) == table.quotient()
        rep.checks["sign_convention"] = coherent
        if ham.retrivialization is not None:
            rep.checks["retrivialization"] = table.retrivialization == ham.retrivialization
            flat = table.retrivialized(seed=seed)
            rep.checks["retrivialized_trivial"] = not flat.central_extension
            rep.details["retrivialized"] = flat.to_json()
    if entry.expected_obstructed or ham is None:
        w = no_go_witness(A, seed=seed)
        rep.details["no_go"] = w.to_json()
        if entry.expected_obstructed:
            rep.checks["no_go_witness"] = w.kind != "inconclusive"
    return rep


# -- rendering -------------------------------------------------------------------------------------

def _field_text(X: PlanarVectorField) -> str:
    parts = []
    for comp, d in ((X.xc, "∂x"), (X.yc, "∂y")):
        if is_zero(comp):
            continue
        c = to_text(comp)
        if c == "1":
            parts.append(d)
        elif c == "-1":
            parts.append("-" + d)
        else:
            parts.append(f"({c}){d}" if any(op in c.lstrip("-") for op in "+- ") else f"{c}{d}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def show(entry: CatalogEntry) -> str:
    """A row in the layout of the classification tables."""
    names = [_field_text(X) for X in entry.basis]
    gens = set(entry.generators)
    cells = []
    for i, n in enumerate(names):
        cells.append(f"[{n}]" if i in gens else n)
    params = ", ".join(f"{k}={v}" for k, v in entry.params.items())
    domain = ", ".join(g.text for g in entry.domain) or "R^2"
    lines = [
        f"{entry.id}{' (' + params + ')' if params else ''}  {entry.display}"
        f"  [{'primitive' if entry.primitive else 'imprimitive'}]",
        f"  basis:  {', '.join(cells)}",
        f"  domain: {domain}",
        f"  label:  {entry.label}",
    ]
    for name, funcs in entry.slots.items():
        lines.append(f"  {name}:  {', '.join(to_text(f) for f in funcs)}")
    ham = entry.hamiltonian
    if ham is not None:
        lines.append(f"  omega:  {to_text(ham.omega.f)} dx^dy")
        lines.append(f"  h_i:    {', '.join(to_text(h) for h in ham.functions)}" + (", 1" if ham.extension else ""))
        lines.append(f"  Lie-Hamilton algebra: {ham.algebra}  (central extension: {'yes' if ham.extension else 'no'})")
        if ham.relations:
            lines.append(f"  brackets: {'; '.join(ham.relations)}")
        if ham.note:
            lines.append(f"  note:   {ham.note}")
    elif entry.expected_obstructed:
        lines.append("  not Hamiltonian for any area form")
    return "\n".join(lines)
