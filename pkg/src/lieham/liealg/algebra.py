"""Finite-dimensional Lie algebras of planar vector fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import _exact
from ..expr import (
    Add,
    DEFAULT_SEED,
    Guard,
    GuardViolation,
    Verdict,
    as_guard,
    compare,
    evaluate,
    evaluate_exact,
    evaluate_many,
    is_zero,
    normalize,
    rational_points,
    simplify_guards,
    to_text,
)
from ..vfield import PlanarVectorField, combine, divergence, lie_bracket, wedge, worst
from .structure import StructureConstants, fingerprint

MAX_DRAWS = 50
RANK_THRESHOLD = 1e-10
RATIONALIZE_DENOMINATOR = 10**6


class DegenerateSamplingError(RuntimeError):
    pass


class ModularGeneratorError(ValueError):
    """The generators do not span the algebra over the function field."""


@dataclass
class VFLieAlgebra:
    basis: tuple
    generators: tuple = ()
    label: str = ""
    guards: tuple = ()
    _sc: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.basis = tuple(self.basis)
        self.generators = tuple(self.generators)
        own = [as_guard(g) for g in self.guards]
        for X in self.basis:
            own.extend(X.guards)
        self.guards = tuple(simplify_guards(own))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def structure_constants(self):
        if self._sc is None:
            self._sc = extract_structure_constants(self)
        return self._sc

    def non_generators(self):
        return [i for i in range(self.dim) if i not in self.generators]

    def to_json(self):
        out = {"label": self.label, "basis": [X.to_json() for X in self.basis],
               "generators": list(self.generators), "guards": [g.text for g in self.guards]}
        sc = self._sc
        if isinstance(sc, StructureConstants):
            out["structure_constants"] = sc.to_json()
        return out


@dataclass
class NotClosed:
    pair: tuple
    residual: PlanarVectorField
    reason: str = "bracket leaves the span"

    def __bool__(self):
        return False

    def to_json(self):
        return {"not_closed": list(self.pair), "residual": self.residual.to_json(), "reason": self.reason}


@dataclass
class CapExceeded:
    count: int
    basis: tuple

    def __bool__(self):
        return False

    def to_json(self):
        return {"cap_exceeded": True, "independent_count": self.count}


# -- evaluation matrices ------------------------------------------------------

def _sample_points(fields, guards, count, seed):
    names = set()
    for X in fields:
        names |= X.symbols
    extra = [c for X in fields for c in X.components]
    return rational_points(sorted(names | {"x", "y"}), guards, n=count, seed=seed, extra=extra)


def _rows(fields, points):
    """Rows of component values, exact when every entry is rational."""
    exact = []
    for X in fields:
        row = []
        for p in points:
            for comp in X.components:
                v = evaluate_exact(comp, p)
                if v is None:
                    return None
                row.append(v)
        exact.append(row)
    return exact


def _float_rows(fields, points):
    cols = {k: np.array([float(p[k]) for p in points]) for k in points[0]}
    out = []
    for X in fields:
        a = evaluate_many(X.xc, cols)
        b = evaluate_many(X.yc, cols)
        out.append(np.column_stack([a, b]).ravel())
    return np.array(out)


class _Evaluator:
    """Evaluates fields at one fixed point set, exactly when possible."""

    def __init__(self, points):
        self.points = points

    def row(self, X):
        r = _rows([X], self.points)
        if r is not None:
            return r[0]
        return _float_rows([X], self.points)[0]

    @staticmethod
    def rank(rows):
        if not rows:
            return 0
        if all(isinstance(v, Fraction) for r in rows for v in r):
            return _exact.rank(rows)
        return _exact.float_rank(np.array([[float(v) for v in r] for r in rows]), RANK_THRESHOLD)


def _full_rank_points(fields, guards, count, seed):
    ev = None
    for k in range(MAX_DRAWS):
        pts = _sample_points(fields, guards, count, seed + k)
        ev = _Evaluator(pts)
        rows = [ev.row(X) for X in fields]
        if _Evaluator.rank(rows) == len(fields):
            return ev, rows
    raise DegenerateSamplingError(f"sample points failed to reach full rank {len(fields)} after {MAX_DRAWS} draws")


def is_independent(fields, guards=(), seed=DEFAULT_SEED) -> bool:
    fields = list(fields)
    if not fields:
        return True
    try:
        _full_rank_points(fields, list(guards) + [g for X in fields for g in X.guards], max(len(fields), 4), seed)
        return True
    except DegenerateSamplingError:
        return False


# -- structure constants -------------------------------------------------------

def _solve(rows, target):
    """Coefficients c with sum c_k rows[k] = target, or None."""
    exact = all(isinstance(v, Fraction) for r in rows for v in r) and all(isinstance(v, Fraction) for v in target)
    if exact:
        cols = [list(col) for col in zip(*rows)]
        return _exact.solve(cols, list(target))
    A = np.array([[float(v) for v in r] for r in rows]).T
    b = np.array([float(v) for v in target])
    c, *_ = np.linalg.lstsq(A, b, rcond=None)
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    if float(np.max(np.abs(A @ c - b))) > 1e-8 * scale:
        return None
    return [Fraction(float(v)).limit_denominator(RATIONALIZE_DENOMINATOR) for v in c]


def _residual(target, coeffs, basis):
    return target - combine([Fraction(c) for c in coeffs], basis) if any(coeffs) else target


def _verify_zero_field(F: PlanarVectorField, guards, seed) -> Verdict:
    if F.is_zero():
        return Verdict.PROVED_EQUAL
    return worst(compare(c, 0, list(guards), seed=seed).verdict for c in F.components)


def extract_structure_constants(A: VFLieAlgebra, seed=DEFAULT_SEED):
    """StructureConstants, or NotClosed naming the first offending pair."""
    n = A.dim
    if n == 0:
        return StructureConstants.zeros(0)
    ev, rows = _full_rank_points(list(A.basis), list(A.guards), max(2 * n, 4), seed)
    rel = {}
    for i in range(n):
        for j in range(i + 1, n):
            B = lie_bracket(A.basis[i], A.basis[j])
            if B.is_zero():
                continue
            coeffs = _solve(rows, ev.row(B))
            if coeffs is None:
                return NotClosed((i, j), B)
            res = _residual(B, coeffs, A.basis)
            verdict = _verify_zero_field(res, A.guards, seed)
            if not verdict.is_equal:
                return NotClosed((i, j), res, f"re-expansion check failed ({verdict})")
            rel[(i, j)] = {k: c for k, c in enumerate(coeffs) if c}
    return StructureConstants.from_brackets(n, rel)


def expand_in_basis(A: VFLieAlgebra, X: PlanarVectorField, seed=DEFAULT_SEED):
    """Constant coefficients of ``X`` in the basis, or None."""
    ev, rows = _full_rank_points(list(A.basis), list(A.guards), max(2 * A.dim, 4), seed)
    coeffs = _solve(rows, ev.row(X))
    if coeffs is None:
        return None
    if not _verify_zero_field(_residual(X, coeffs, A.basis), A.guards, seed).is_equal:
        return None
    return coeffs


def algebra_fingerprint(A: VFLieAlgebra):
    sc = A.structure_constants()
    if isinstance(sc, NotClosed):
        raise ValueError(f"basis is not closed: pair {sc.pair}")
    return fingerprint(sc)


# -- closure -------------------------------------------------------------------

def lie_closure(seeds: Sequence[PlanarVectorField], cap: int, seed=DEFAULT_SEED, label=""):
    """Smallest bracket-closed span of ``seeds``; CapExceeded past ``cap``."""
    seeds = list(seeds)
    if cap < 1:
        raise ValueError("cap must be positive")
    guards = [g for X in seeds for g in X.guards]
    count = cap + 3
    pts = _sample_points(seeds, guards, count, seed)
    ev = _Evaluator(pts)
    basis, rows = [], []

    def try_add(X):
        if X.is_zero():
            return False
        r = ev.row(X)
        if _Evaluator.rank(rows + [r]) > len(rows):
            basis.append(X)
            rows.append(r)
            return True
        return False

    for X in seeds:
        if try_add(X) and len(basis) > cap:
            return CapExceeded(len(basis), tuple(basis))
    pending = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pending:
        i, j = pending.pop(0)
        B = lie_bracket(basis[i], basis[j])
        if try_add(B):
            if len(basis) > cap:
                return CapExceeded(len(basis), tuple(basis))
            k = len(basis) - 1
            pending.extend((m, k) for m in range(k))
    return VFLieAlgebra(tuple(basis), label=label)


# -- distributions and ranks ----------------------------------------------------

def rank_at(A: VFLieAlgebra, point, params=None) -> int:
    x, y = point
    if not A.basis:
        return 0
    env = {"x": float(x), "y": float(y), **(params or {})}
    for g in A.guards:
        v = evaluate(g.expr, env)
        if not (v > 0 if g.relation == ">" else v != 0):
            raise GuardViolation(f"point {point} violates {g.text}")
    m = np.array([[evaluate(X.xc, env), evaluate(X.yc, env)] for X in A.basis])
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > RANK_THRESHOLD))


@dataclass
class ScanResult:
    xs: np.ndarray
    ys: np.ndarray
    ranks: np.ndarray  # -1 marks inadmissible grid points
    generic: list
    singular: list

    def to_json(self):
        return {"xs": self.xs.tolist(), "ys": self.ys.tolist(), "ranks": self.ranks.tolist(),
                "generic_count": len(self.generic), "singular": [list(p) for p in self.singular]}


def generic_scan(A: VFLieAlgebra, region=((-2.0, 2.0), (-2.0, 2.0)), grid_size=41) -> ScanResult:
    """Rank on a grid; a point is generic when its admissible 8-neighbors share its rank."""
    (x0, x1), (y0, y1) = region
    xs = np.linspace(x0, x1, grid_size)
    ys = np.linspace(y0, y1, grid_size)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    cols = {"x": X.ravel(), "y": Y.ravel()}
    ok = np.ones(X.size, dtype=bool)
    for g in A.guards:
        ok &= g.satisfied(evaluate_many(g.expr, cols))
    comps = []
    for F in A.basis:
        a, b = evaluate_many(F.xc, cols), evaluate_many(F.yc, cols)
        ok &= np.isfinite(a) & np.isfinite(b)
        comps.append(np.stack([a, b], axis=-1))
    if not ok.any():
        raise ValueError("no admissible grid point in the region")
    ranks = np.full(X.size, -1, dtype=int)
    if comps:
        stack = np.stack(comps, axis=1)  # points x n x 2
        stack = np.where(ok[:, None, None], stack, 0.0)
        s = np.linalg.svd(stack, compute_uv=False)
        r = np.sum(s > RANK_THRESHOLD, axis=1)
        ranks[ok] = r[ok]
    else:
        ranks[ok] = 0
    ranks = ranks.reshape(X.shape)
    generic, singular = [], []
    for i in range(grid_size):
        for j in range(grid_size):
            rk = ranks[i, j]
            if rk < 0:
                continue
            nb = ranks[max(i - 1, 0):i + 2, max(j - 1, 0):j + 2]
            nb = nb[nb >= 0]
            (generic if np.all(nb == rk) else singular).append((float(xs[i]), float(ys[j])))
    return ScanResult(xs, ys, ranks, generic, singular)


@dataclass
class InvariantDistribution:
    holds: bool
    multipliers: list
    failing: int | None = None

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"invariant": self.holds, "multipliers": [to_text(m) for m in self.multipliers],
                "failing_index": self.failing}


def check_invariant_distribution(A: VFLieAlgebra, Y: PlanarVectorField) -> InvariantDistribution:
    """True when every ``[X_i, Y]`` is a function multiple of ``Y``."""
    if Y.is_zero():
        raise ValueError("the distribution field must not vanish identically")
    mults = []
    for i, X in enumerate(A.basis):
        B = lie_bracket(X, Y)
        if not is_zero(wedge(B, Y)):
            return InvariantDistribution(False, mults, i)
        if not is_zero(Y.xc):
            mults.append(normalize(B.xc / Y.xc))
        else:
            mults.append(normalize(B.yc / Y.yc))
    return InvariantDistribution(True, mults)


# -- modular divergence ---------------------------------------------------------

@dataclass
class CounterexampleWitness:
    index: int
    field: PlanarVectorField
    coefficients: list
    lhs: object
    rhs: object
    verdict: Verdict

    def to_json(self):
        return {"index": self.index, "field": self.field.to_json(),
                "coefficients": [to_text(c) for c in self.coefficients],
                "div": to_text(self.lhs), "combination": to_text(self.rhs), "verdict": str(self.verdict)}


@dataclass
class ModularPass:
    coefficients: dict

    def __bool__(self):
        return True

    def to_json(self):
        return {"pass": True, "coefficients": {str(k): [to_text(c) for c in v] for k, v in self.coefficients.items()}}


def modular_coefficients(A: VFLieAlgebra, X: PlanarVectorField):
    """Functions ``ff_i`` with ``X = sum ff_i X_{g_i}`` over the generators."""
    gens = [A.basis[i] for i in A.generators]
    if len(gens) == 2:
        det = wedge(gens[0], gens[1])
        if is_zero(det):
            raise ModularGeneratorError("the two generators are everywhere parallel")
        return [normalize(wedge(X, gens[1]) / det), normalize(wedge(gens[0], X) / det)], [Guard(det, "!=")]
    if len(gens) == 1:
        G = gens[0]
        if not is_zero(wedge(X, G)):
            raise ModularGeneratorError(f"{X} is not a function multiple of the generator {G}")
        if not is_zero(G.xc):
            return [normalize(X.xc / G.xc)], [Guard(G.xc, "!=")]
        return [normalize(X.yc / G.yc)], [Guard(G.yc, "!=")]
    raise ModularGeneratorError("modular generating systems have one or two elements")


def modular_divergence_check(A: VFLieAlgebra, seed=DEFAULT_SEED):
    """ModularPass, or a CounterexampleWitness where ``div X != sum ff_i div X_i``."""
    if not A.generators:
        raise ValueError("modular generator indices are not set")
    found = {}
    gen_divs = [divergence(A.basis[i]) for i in A.generators]
    for i in A.non_generators():
        X = A.basis[i]
        ffs, extra = modular_coefficients(A, X)
        lhs = divergence(X)
        rhs = normalize(Add(tuple(f * d for f, d in zip(ffs, gen_divs))))
        verdict = compare(lhs, rhs, list(A.guards) + extra, seed=seed).verdict
        if not verdict.is_equal:
            return CounterexampleWitness(i, X, ffs, lhs, rhs, verdict)
        found[i] = ffs
    return ModularPass(found)
