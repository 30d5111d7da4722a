"""Area forms on planar domains, Hamiltonian functions and Poisson brackets.

Conventions, fixed throughout:

* ``omega = f dx^dy`` and ``iota_X omega = dh`` give ``dh = f (X^x dy - X^y dx)``;
* ``{h, g} = (h_x g_y - h_y g_x) / f``;
* the field of ``h`` is ``X_h = (h_y / f, -h_x / f)``, so ``X_h g = {g, h}``;
* if ``[X_i, X_j] = sum c_ij^k X_k`` then ``{h_i, h_j} = -sum c_ij^k h_k + const``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy as sp
from sympy.integrals.rationaltools import ratint

from . import _exact
from .expr import (
    DEFAULT_SEED,
    ONE,
    Add,
    Expr,
    Func,
    Guard,
    Mul,
    Pow,
    Quad,
    Sym,
    Verdict,
    as_expr,
    as_guard,
    compare,
    differentiate,
    evaluate,
    evaluate_exact,
    evaluate_many,
    exp,
    is_zero,
    natural_guards,
    normalize,
    parse,
    rational_points,
    sample_region,
    simplify_guards,
    substitute,
    to_text,
    walk,
)
from .expr.bridge import UnsupportedForm, from_sympy, to_sympy
from .liealg import StructureConstants, VFLieAlgebra, fingerprint, modular_divergence_check
from .liealg.algebra import CounterexampleWitness, ModularGeneratorError
from .vfield import PlanarMap, PlanarVectorField, apply_to, divergence, resolve_abs, worst

FD_STEP = 1e-4
FD_TOL = 1e-6
FD_POINTS = 100


def _has_quad(e) -> bool:
    return any(isinstance(n, Quad) for n in walk(e))


@dataclass(frozen=True)
class SymplecticForm:
    """``f dx^dy`` with ``f != 0`` among its guards."""

    f: Expr
    guards: tuple = ()

    def __post_init__(self):
        f = normalize(as_expr(self.f))
        if is_zero(f):
            raise ValueError("the coefficient of a symplectic form cannot vanish identically")
        object.__setattr__(self, "f", f)
        given = [as_guard(g) for g in self.guards]
        object.__setattr__(self, "guards", tuple(simplify_guards(given + natural_guards(f) + [Guard(f, "!=")])))

    @classmethod
    def parse(cls, text: str, guards=()):
        return cls(parse(text), tuple(guards))

    @classmethod
    def standard(cls):
        return cls(ONE)

    def at(self, x, y, params=None):
        return evaluate(self.f, {"x": x, "y": y, **(params or {})})

    def to_json(self):
        return {"f": to_text(self.f), "guards": [g.text for g in self.guards]}

    @classmethod
    def from_json(cls, data):
        return cls(parse(data["f"]), tuple(data.get("guards", ())))

    def __str__(self):
        return f"({to_text(self.f)}) dx^dy"


# -- Hamiltonian fields ----------------------------------------------------------

@dataclass
class HamiltonianCheck:
    verdict: Verdict
    residual: Expr

    @property
    def is_equal(self):
        return self.verdict.is_equal

    def to_json(self):
        return {"verdict": str(self.verdict), "residual": to_text(self.residual)}


def hamiltonian_residual(X: PlanarVectorField, omega: SymplecticForm) -> Expr:
    """``X f + f div X``; zero exactly when ``L_X omega = 0``."""
    return normalize(apply_to(X, omega.f) + omega.f * divergence(X))


def is_hamiltonian(X: PlanarVectorField, omega: SymplecticForm, seed=DEFAULT_SEED) -> HamiltonianCheck:
    r = hamiltonian_residual(X, omega)
    if is_zero(r):
        return HamiltonianCheck(Verdict.PROVED_EQUAL, r)
    guards = list(omega.guards) + list(X.guards)
    return HamiltonianCheck(compare(r, 0, guards, seed=seed).verdict, r)


def hamiltonian_vector_field(h, omega: SymplecticForm) -> PlanarVectorField:
    h = as_expr(h)
    return PlanarVectorField(differentiate(h, "y") / omega.f, -differentiate(h, "x") / omega.f, omega.guards)


# -- integrating factors -----------------------------------------------------------

DEFAULT_ANSATZ = ("x", "y", "x - y", "x + y", "1 + x^2 + y^2", "exp(x)", "exp(y)")


class AnsatzError(ValueError):
    pass


@dataclass
class IntegratingFactorResult:
    factors: list
    solutions: list  # particular exponent vector first
    null_basis: list
    form: SymplecticForm

    @property
    def exponents(self):
        return self.solutions[0]

    @property
    def solution_space_dim(self) -> int:
        return len(self.null_basis)

    def to_json(self):
        return {
            "factors": [to_text(p) for p in self.factors],
            "exponents": [str(e) for e in self.exponents],
            "homogeneous_dimension": self.solution_space_dim,
            "homogeneous_basis": [[str(v) for v in b] for b in self.null_basis],
            "f": to_text(self.form.f),
        }


def _factor_power(p: Expr, e: Fraction) -> Expr:
    if e == 0:
        return ONE
    if isinstance(p, Func) and p.name == "exp":
        return exp(normalize(p.arg * e))
    return Pow(p, e)


def product_form(factors, exponents) -> Expr:
    terms = [_factor_power(p, Fraction(e)) for p, e in zip(factors, exponents) if e]
    return normalize(Mul(tuple(terms))) if terms else ONE


def _value(e, point):
    v = evaluate_exact(e, point)
    return v if v is not None else evaluate(e, {k: float(c) for k, c in point.items()})


def _linear_system_solve(rows, rhs):
    """Particular solution and null basis, exact when every entry is rational."""
    exact = all(isinstance(v, Fraction) for r in rows for v in r) and all(isinstance(v, Fraction) for v in rhs)
    m = len(rows[0])
    if exact:
        sol = _exact.solve(rows, rhs)
        if sol is None:
            return None, []
        return sol, _exact.nullspace(rows, m)
    A = np.array([[float(v) for v in r] for r in rows])
    b = np.array([float(v) for v in rhs])
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.max(np.abs(A @ sol - b)) > 1e-8 * max(1.0, float(np.max(np.abs(b)))):
        return None, []
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-10 * max(1.0, s[0])))
    null = [[Fraction(float(v)).limit_denominator(10**6) for v in vt[k]] for k in range(rank, m)]
    return [Fraction(float(v)).limit_denominator(10**6) for v in sol], null


def find_integrating_factor(generators: Sequence[PlanarVectorField], ansatz=DEFAULT_ANSATZ, extra=(),
                            seed=DEFAULT_SEED) -> IntegratingFactorResult | None:
    """Exponents ``e`` with ``f = prod p_i^e_i`` an integrating factor of every generator.

    Per generator the condition is ``sum e_i (X p_i) / p_i + div X = 0``.
    """
    factors = [normalize(as_expr(p)) for p in list(ansatz) + list(extra)]
    for p in factors:
        if is_zero(p):
            raise AnsatzError(f"ansatz factor {to_text(p)} vanishes identically")
    gens = list(generators)
    guards = [Guard(p, "!=") for p in factors] + [g for X in gens for g in X.guards]
    guards += [g for p in factors for g in natural_guards(p)]
    m = len(factors)
    coeff_exprs = [[normalize(apply_to(X, p) / p) for p in factors] for X in gens]
    divs = [divergence(X) for X in gens]
    pts = rational_points(["x", "y"], guards, n=2 * m + 6, seed=seed)
    rows, rhs = [], []
    for cs, d in zip(coeff_exprs, divs):
        for p in pts:
            rows.append([_value(c, p) for c in cs])
            rhs.append(-_value(d, p))
    sol, null = _linear_system_solve(rows, rhs)
    if sol is None:
        return None
    for cs, d in zip(coeff_exprs, divs):
        combo = normalize(Add(tuple(Fraction(e) * c for e, c in zip(sol, cs) if e)) + d) if any(sol) else d
        if not compare(combo, 0, guards, seed=seed).verdict.is_equal:
            return None
        for v in null:
            hom = normalize(Add(tuple(Fraction(e) * c for e, c in zip(v, cs) if e)))
            if not compare(hom, 0, guards, seed=seed).verdict.is_equal:
                raise AnsatzError("sampled homogeneous solution failed symbolic re-verification")
    form = SymplecticForm(product_form(factors, sol))
    return IntegratingFactorResult(factors, [sol], null, form)


# -- obstructions ---------------------------------------------------------------------

@dataclass
class DivergenceWitness:
    index: int
    field: PlanarVectorField
    divergence: Expr

    kind = "divergence"

    def to_json(self):
        return {"kind": self.kind, "index": self.index, "field": self.field.to_json(),
                "divergence": to_text(self.divergence)}


@dataclass
class ModularWitness:
    witness: CounterexampleWitness

    kind = "modular-divergence"

    @property
    def index(self):
        return self.witness.index

    def to_json(self):
        return {"kind": self.kind, **self.witness.to_json()}


@dataclass
class Inconclusive:
    reason: str

    kind = "inconclusive"

    def __bool__(self):
        return False

    def to_json(self):
        return {"kind": self.kind, "reason": self.reason}


def no_go_witness(A: VFLieAlgebra, seed=DEFAULT_SEED):
    """A proof that no area form makes every element of ``A`` Hamiltonian, or Inconclusive."""
    if not A.generators:
        raise ValueError("modular generator indices are not set")
    if all(is_zero(divergence(A.basis[i])) for i in A.generators):
        for i, X in enumerate(A.basis):
            d = divergence(X)
            if not is_zero(d):
                return DivergenceWitness(i, X, d)
    try:
        res = modular_divergence_check(A, seed=seed)
    except ModularGeneratorError as exc:
        return Inconclusive(f"modular generating property violated: {exc}")
    if isinstance(res, CounterexampleWitness):
        if res.verdict == Verdict.PROVED_UNEQUAL:
            return ModularWitness(res)
        return Inconclusive(f"modular divergence test was {res.verdict}")
    return Inconclusive("divergence conditions hold")


# -- Hamiltonian functions ---------------------------------------------------------------

class NotHamiltonianError(ValueError):
    pass


class PathError(ValueError):
    pass


def _antiderivative(integrand: Expr, var: str):
    """Closed-form antiderivative in the table class, or None."""
    try:
        syms = {}
        s_expr = to_sympy(integrand, syms)
    except UnsupportedForm:
        return None
    s = syms.get(var) or sp.Symbol(var, real=True)
    s_expr = sp.cancel(s_expr) if s_expr.is_rational_function(s) else s_expr
    try:
        if s_expr.is_rational_function(s):
            F = ratint(s_expr, s)
        else:
            F = _poly_exp_integral(s_expr, s)
            if F is None:
                return None
        if F.has(sp.RootSum, sp.atan, sp.Integral, sp.I):
            return None
        return from_sympy(F)
    except (UnsupportedForm, NotImplementedError, sp.PolynomialError):
        return None


def _poly_exp_integral(e, s):
    """``sum_k r_k(s) exp(a_k s + b_k)`` with polynomial ``r_k``, integrated by parts."""
    total = sp.Integer(0)
    for term in sp.Add.make_args(sp.expand(e)):
        exps = [f for f in sp.Mul.make_args(term) if isinstance(f, sp.exp)]
        rest = sp.Mul(*[f for f in sp.Mul.make_args(term) if not isinstance(f, sp.exp)])
        if not rest.is_polynomial(s):
            return None
        arg = sp.expand(sum((f.args[0] for f in exps), sp.Integer(0)))
        if not exps:
            total += sp.integrate(rest, s)
            continue
        if not arg.is_polynomial(s) or sp.degree(arg, s) != 1:
            return None
        a = arg.coeff(s, 1)
        # int p e^(a s) = e^(a s) sum_k (-1)^k p^(k) / a^(k+1)
        acc, deriv, k = sp.Integer(0), rest, 0
        while deriv != 0:
            acc += (-1) ** k * deriv / a ** (k + 1)
            deriv = sp.diff(deriv, s)
            k += 1
        total += acc * sp.exp(arg)
    return total


def _segment(integrand: Expr, var: str, lower, upper: Expr, label: str, branch) -> Expr:
    F = _antiderivative(integrand, var)
    if F is None:
        return Quad(normalize(integrand), var, as_expr(lower), upper, label)
    return normalize(resolve_abs(substitute(F, {var: upper}), branch) - substitute(F, {var: as_expr(lower)}))


def _fresh(e, base="s"):
    name, k = base, 0
    while name in e.symbols:
        k += 1
        name = f"{base}{k}"
    return name


def hamiltonian_function(X: PlanarVectorField, omega: SymplecticForm, base_point=(0, 1), check=True,
                         seed=DEFAULT_SEED, label="H") -> Expr:
    """``h`` with ``dh = iota_X omega`` and ``h(base_point) = 0``.

    Integrates ``f X^x dy - f X^y dx`` along the path from the base point
    first in ``x`` (at ``y = y0``) then in ``y``.
    """
    if check:
        hc = is_hamiltonian(X, omega, seed=seed)
        if not hc.is_equal:
            raise NotHamiltonianError(f"{X} is not Hamiltonian for {omega}: residual {to_text(hc.residual)}")
    x0, y0 = (Fraction(c) if not isinstance(c, float) else Fraction(c).limit_denominator(10**9) for c in base_point)
    guards = list(omega.guards) + list(X.guards)
    env = {"x": float(x0), "y": float(y0)}
    for g in guards:
        v = evaluate(g.expr, env) if not g.expr.symbols - {"x", "y"} else None
        if v is not None and not (v > 0 if g.relation == ">" else v != 0):
            raise PathError(f"base point {base_point} violates {g.text}")
    if X.is_zero():
        return normalize(ONE - ONE)
    s = _fresh(omega.f * X.xc * X.yc)
    fx = normalize(omega.f * X.xc)
    fy = normalize(omega.f * X.yc)
    branch = [g for g in guards if g.relation == ">"]
    seg1 = _segment(substitute(-fy, {"x": Sym(s), "y": as_expr(y0)}), s, x0, Sym("x"), label, branch)
    seg2 = _segment(substitute(fx, {"y": Sym(s)}), s, y0, Sym("y"), label, branch)
    h = normalize(seg1 + seg2)
    if check:
        ok = verify_hamiltonian(X, omega, h, seed=seed)
        if not ok.is_equal:
            raise NotHamiltonianError(f"re-verification of dh = iota_X omega failed ({ok.verdict})")
    return h


@dataclass
class DifferentialCheck:
    verdict: Verdict
    max_error: float

    @property
    def is_equal(self):
        return self.verdict.is_equal


def verify_hamiltonian(X: PlanarVectorField, omega: SymplecticForm, h, seed=DEFAULT_SEED,
                       points=FD_POINTS, tol=FD_TOL) -> DifferentialCheck:
    """``dh = iota_X omega``: symbolic when possible, else centered differences."""
    h = as_expr(h)
    guards = list(omega.guards) + list(X.guards) + natural_guards(h)
    if not _has_quad(h):
        hx, hy = differentiate(h, "x"), differentiate(h, "y")
        v = worst([compare(hy, omega.f * X.xc, guards, seed=seed).verdict,
                   compare(hx, -omega.f * X.yc, guards, seed=seed).verdict])
        return DifferentialCheck(v, 0.0)
    pts = sample_region(["x", "y"], guards, n=points, seed=seed, margin=20 * FD_STEP)
    worst_err = 0.0
    for x, y in zip(pts["x"], pts["y"]):
        gx, gy = numeric_gradient(h, x, y)
        w = evaluate(omega.f, {"x": x, "y": y})
        ax, ay = X.at(x, y)
        for num, ref in ((gy, w * ax), (gx, -w * ay)):
            worst_err = max(worst_err, abs(num - ref) / max(1.0, abs(ref)))
    return DifferentialCheck(Verdict.NUMERICALLY_EQUAL if worst_err <= tol else Verdict.PROVED_UNEQUAL, worst_err)


def numeric_gradient(h, x, y, step=FD_STEP):
    def H(a, b):
        return evaluate(h, {"x": a, "y": b})

    # fourth-order stencil; the step shrinks near the axes where h varies fastest
    hx = step * min(1.0, max(abs(x), 1e-2))
    hy = step * min(1.0, max(abs(y), 1e-2))
    gx = (8 * (H(x + hx, y) - H(x - hx, y)) - (H(x + 2 * hx, y) - H(x - 2 * hx, y))) / (12 * hx)
    gy = (8 * (H(x, y + hy) - H(x, y - hy)) - (H(x, y + 2 * hy) - H(x, y - 2 * hy))) / (12 * hy)
    return gx, gy


# -- Poisson brackets ------------------------------------------------------------------------

def poisson_bracket(h, g, omega: SymplecticForm) -> Expr:
    h, g = as_expr(h), as_expr(g)
    return normalize((differentiate(h, "x") * differentiate(g, "y")
                      - differentiate(h, "y") * differentiate(g, "x")) / omega.f)


def poisson_bracket_at(h, g, omega: SymplecticForm, x, y, step=FD_STEP) -> float:
    """Centered-difference bracket, for quadrature-defined functions."""
    hx, hy = numeric_gradient(as_expr(h), x, y, step)
    gx, gy = numeric_gradient(as_expr(g), x, y, step)
    return (hx * gy - hy * gx) / evaluate(omega.f, {"x": x, "y": y})


class BracketNotClosed(ValueError):
    def __init__(self, pair, bracket):
        super().__init__(f"{{h{pair[0] + 1}, h{pair[1] + 1}}} leaves span(h, 1)")
        self.pair = pair
        self.bracket = bracket


_BAR = {"iso(2)": "iso(2)-bar", "iso(1,1)": "h4", "sl(2)⋉R^2": "h6"}


def extension_name(base: str) -> str:
    return _BAR.get(base, f"({base})-bar")


@dataclass
class HamiltonianTable:
    """Brackets of ``h_1..h_n`` over the basis ``{h_i} + {1}`` (the constant is index n)."""

    functions: list
    form: SymplecticForm
    constants: StructureConstants
    vf_name: str = ""
    retrivialization: list | None = None
    name: str = field(default="")

    @property
    def n(self):
        return len(self.functions)

    @property
    def central_extension(self) -> bool:
        n = self.n
        return any(self.constants.c[i][j][n] for i in range(n) for j in range(n))

    def quotient(self) -> StructureConstants:
        """Brackets with the central component dropped."""
        n = self.n
        rel = {(i, j): {k: v for k, v in row.items() if k < n}
               for (i, j), row in self.constants.nonzero_brackets().items()}
        return StructureConstants.from_brackets(n, {p: r for p, r in rel.items() if r})

    def central_terms(self):
        n = self.n
        return {(i, j): v for (i, j), row in self.constants.nonzero_brackets().items()
                for k, v in row.items() if k == n}

    def relations(self):
        names = [f"h{i + 1}" for i in range(self.n)] + ["h0"]
        return self.constants.relations_text(names, "{}")

    def retrivialized(self, seed=DEFAULT_SEED):
        """Re-tabulate with ``h_k + lambda_k`` when the extension is trivial."""
        if self.retrivialization is None:
            raise ValueError("the central extension is not trivial")
        shifted = [normalize(h + Fraction(l)) if l else h for h, l in zip(self.functions, self.retrivialization)]
        return bracket_table(shifted, self.form, vf_name=self.vf_name, seed=seed)

    def to_json(self):
        return {
            "functions": [to_text(h) for h in self.functions],
            "omega": self.form.to_json(),
            "relations": self.relations(),
            "constants": self.constants.to_json(),
            "central_extension": self.central_extension,
            "retrivialization": None if self.retrivialization is None else [str(v) for v in self.retrivialization],
            "name": self.name,
        }


def _solve_retrivialization(quotient: StructureConstants, central: dict, n: int):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows = [[quotient.c[i][j][k] for k in range(n)] for i, j in pairs]
    rhs = [central.get((i, j), Fraction(0)) for i, j in pairs]
    return _exact.solve(rows, rhs)


def _function_points(hs, omega, seed, count):
    guards = list(omega.guards) + [g for h in hs for g in natural_guards(h)]
    return rational_points(["x", "y"], guards, n=count, seed=seed), guards


def bracket_table(hs: Sequence, omega: SymplecticForm, vf_name: str = "", seed=DEFAULT_SEED,
                  brackets: dict | None = None) -> HamiltonianTable:
    """All ``{h_i, h_j}`` expanded in ``span(h_1..h_n, 1)``.

    ``brackets`` may supply precomputed bracket expressions keyed by ``(i, j)``.
    """
    hs = [normalize(as_expr(h)) for h in hs]
    n = len(hs)
    if n == 0:
        raise ValueError("bracket table needs at least one function")
    basis = hs + [ONE]
    pts, guards = _function_points(hs, omega, seed, 2 * n + 6)
    rows = [[_value(b, p) for p in pts] for b in basis]
    cols = [list(c) for c in zip(*rows)]
    rel = {}
    for i in range(n):
        for j in range(i + 1, n):
            B = brackets[(i, j)] if brackets and (i, j) in brackets else poisson_bracket(hs[i], hs[j], omega)
            if is_zero(B):
                continue
            target = [_value(B, p) for p in pts]
            coeffs, _ = _linear_system_solve(cols, target)
            if coeffs is None:
                raise BracketNotClosed((i, j), B)
            combo = Add(tuple(Fraction(c) * b for c, b in zip(coeffs, basis) if c))
            if not compare(B, combo, guards, seed=seed).verdict.is_equal:
                raise BracketNotClosed((i, j), B)
            rel[(i, j)] = {k: c for k, c in enumerate(coeffs) if c}
    sc = StructureConstants.from_brackets(n + 1, rel)
    table = HamiltonianTable(hs, omega, sc, vf_name)
    _name_table(table)
    return table


def _name_table(table: HamiltonianTable):
    q = table.quotient()
    base = table.vf_name or fingerprint(q).name
    if not table.central_extension:
        table.name = base
        return
    lam = _solve_retrivialization(q, table.central_terms(), table.n)
    if lam is not None:
        table.retrivialization = list(lam)
        table.name = f"{base}⊕R"
        return
    table.name = extension_name(base)


# -- pullback --------------------------------------------------------------------------------

def pullback(omega: SymplecticForm, phi: PlanarMap) -> SymplecticForm:
    """``phi^* omega`` with coefficient ``(f o phi) det J phi``."""
    det = phi.jacobian_determinant()
    coeff = normalize(phi.compose(omega.f) * det)
    guards = list(phi.branch) + [Guard(phi.compose(g.expr), g.relation) for g in omega.guards]
    return SymplecticForm(coeff, tuple(guards))
