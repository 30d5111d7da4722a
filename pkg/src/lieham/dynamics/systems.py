"""Named t-dependent systems and their Lie-Hamiltonian structures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..expr import (
    ONE,
    Const,
    Expr,
    Func,
    Guard,
    Quad,
    Sym,
    as_guard,
    compile_scalar,
    constant_value,
    differentiate,
    evaluate,
    normalize,
    parse,
    substitute,
    to_text,
)
from ..liealg import VFLieAlgebra
from ..liealg.structure import _combo_text
from ..symplectic import SymplecticForm, _antiderivative, _has_quad, verify_hamiltonian
from ..vfield import PlanarVectorField, combine
from .integrator import Guard as StepGuard
from .integrator import Trajectory, integrate_rhs

CONSTANTS = {"pi": math.pi, "e": math.e}


class UnknownSystemError(KeyError):
    pass


class RegimeError(ValueError):
    pass


class MissingStructureError(ValueError):
    pass


def _e(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Const(Fraction(v))
    if isinstance(v, float):
        return Const(Fraction(v))
    return parse(str(v))


def _field(text: str, bindings=None, guards=()) -> PlanarVectorField:
    X = PlanarVectorField.parse(text, guards)
    return X.substitute(bindings) if bindings else X


@dataclass
class LieHamiltonianStructure:
    """``omega`` and Hamiltonian functions ``h_i`` for the basis, in basis order."""

    omega: SymplecticForm
    functions: list
    label: str = ""
    extension: bool = False
    relations: list = field(default_factory=list)
    note: str = ""

    def composite(self, coefficients) -> Expr:
        """``h(t, x, y) = sum b_i(t) h_i(x, y)``."""
        return normalize(sum((b * h for b, h in zip(coefficients, self.functions)), Const(Fraction(0))))

    def check(self, basis, seed=None):
        kw = {} if seed is None else {"seed": seed}
        return [verify_hamiltonian(X, self.omega, h, **kw) for X, h in zip(basis, self.functions)]

    def to_json(self):
        return {"label": self.label, "omega": to_text(self.omega.f), "functions": [to_text(h) for h in self.functions],
                "extension": self.extension, "relations": list(self.relations), "note": self.note}


@dataclass
class TDependentSystem:
    """``X_t = sum b_i(t) X_i`` on a fixed basis."""

    name: str
    basis: VFLieAlgebra
    coefficients: tuple
    coefficient_names: tuple
    parameters: dict = field(default_factory=dict)
    structure: LieHamiltonianStructure | None = None
    structures: dict = field(default_factory=dict)
    guards: tuple = ()
    regime: str = ""
    note: str = ""

    def __post_init__(self):
        self.coefficients = tuple(normalize(_e(c)) for c in self.coefficients)
        if len(self.coefficients) != self.basis.dim:
            raise ValueError(f"{self.name}: {len(self.coefficients)} coefficients for a basis of {self.basis.dim}")
        bad = [to_text(c) for c in self.coefficients if c.symbols - {"t"} - CONSTANTS.keys()]
        if bad:
            raise ValueError(f"{self.name}: coefficients may depend on t only: {bad}")
        self.guards = tuple(as_guard(g) for g in (self.guards or self.basis.guards))
        if self.structure is None and self.structures:
            self.structure = next(iter(self.structures.values()))

    @property
    def fields(self):
        return self.basis.basis

    def coefficient(self, name: str) -> Expr:
        return self.coefficients[self.coefficient_names.index(name)]

    def coefficient_values(self, t: float):
        return [evaluate(c, {"t": t, **CONSTANTS}) for c in self.coefficients]

    def is_autonomous(self) -> bool:
        return all("t" not in c.symbols for c in self.coefficients)

    def hamiltonian(self) -> Expr:
        if self.structure is None:
            raise MissingStructureError(f"{self.name} carries no Lie-Hamiltonian structure")
        return self.structure.composite(self.coefficients)

    def time_derivative_of_hamiltonian(self) -> Expr:
        if self.structure is None:
            raise MissingStructureError(f"{self.name} carries no Lie-Hamiltonian structure")
        return self.structure.composite([differentiate(c, "t") for c in self.coefficients])

    def rhs(self):
        """Compiled ``f(t, z) -> array`` for the integrator."""
        comps = compile_scalar([X.xc for X in self.fields] + [X.yc for X in self.fields], CONSTANTS)
        coeffs = compile_scalar(list(self.coefficients), CONSTANTS)
        n = self.basis.dim

        def f(t, z):
            b = np.asarray(coeffs(t, 0.0, 0.0), dtype=float)
            active = b != 0
            if not active.any():
                return np.zeros(2)
            v = np.asarray(comps(t, z[0], z[1]), dtype=float)
            return np.array([np.dot(b[active], v[:n][active]), np.dot(b[active], v[n:][active])])

        return f

    def step_guards(self):
        out = []
        for g in self.guards:
            fn = compile_scalar([g.expr], CONSTANTS)
            out.append(StepGuard(g.text, (lambda fn: lambda t, z: fn(t, z[0], z[1])[0])(fn), g.relation == ">"))
        return out

    def to_json(self):
        return {
            "name": self.name,
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "basis": [X.to_json() for X in self.fields],
            "coefficients": dict(zip(self.coefficient_names, (to_text(c) for c in self.coefficients))),
            "guards": [g.text for g in self.guards],
            "regime": self.regime,
            "structure": None if self.structure is None else self.structure.to_json(),
            "structures": {k: s.to_json() for k, s in self.structures.items()},
        }


def field_at(S: TDependentSystem, t: float) -> PlanarVectorField:
    """``X_t`` with the coefficient values folded in as exact binary fractions."""
    values = []
    for c in S.coefficients:
        v = constant_value(substitute(c, {"t": Const(Fraction(t))})) if "t" in c.symbols else constant_value(c)
        if v is None:
            v = Fraction(evaluate(c, {"t": t, **CONSTANTS}))
        values.append(v)
    return combine(values, list(S.fields))


def integrate(S: TDependentSystem, x0, t0: float, t1: float, rtol=1e-9, atol=1e-12, max_step=None, samples=None,
              fixed_step=None) -> Trajectory:
    return integrate_rhs(S.rhs(), x0, t0, t1, rtol=rtol, atol=atol, max_step=max_step, guards=S.step_guards(),
                         samples=samples, fixed_step=fixed_step)


# -- constructors ---------------------------------------------------------------------------

def _params(given, defaults):
    unknown = set(given or {}) - set(defaults)
    if unknown:
        raise RegimeError(f"unknown parameter(s) {sorted(unknown)}")
    out = dict(defaults)
    for k, v in (given or {}).items():
        out[k] = v
    return out


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    if isinstance(v, Expr):
        c = constant_value(normalize(v))
        if c is None:
            raise RegimeError(f"parameter {to_text(v)} must be a number")
        return c
    return Fraction(str(v))


def _coeffs(names, defaults, given):
    given = dict(given or {})
    unknown = set(given) - set(names)
    if unknown:
        raise RegimeError(f"unknown coefficient(s) {sorted(unknown)}; expected {list(names)}")
    return [normalize(_e(given.get(n, d))) for n, d in zip(names, defaults)]


def riccati(parameters=None, coefficients=None) -> TDependentSystem:
    _params(parameters, {})
    domain = [Guard(Sym("y"), "!=")]
    basis = VFLieAlgebra((_field("1; 0"), _field("x; y"), _field("x^2 - y^2; 2*x*y")), (0, 2), "P2", domain)
    omega = SymplecticForm(parse("1/y^2"), tuple(domain))
    hs = [normalize(parse(s)) for s in ("-1/y", "-x/y", "-(x^2 + y^2)/y")]
    st = LieHamiltonianStructure(omega, hs, "class-canonical", False,
                                 ["{h1,h2} = -h1", "{h1,h3} = -2*h2", "{h2,h3} = -h3"])
    names = ("a0", "a1", "a2")
    return TDependentSystem("riccati", basis, tuple(_coeffs(names, ("1", "0", "1"), coefficients)), names, {},
                            st, {"class-canonical": st})


def _mp_basis(c):
    dom = [Guard(Sym("x"), "!=")]
    b = {"c": Const(c)}
    return VFLieAlgebra((_field("0; -x"), _field("-x/2; y/2"), _field("y; c/x^3", b)), (0, 2), "milne-pinney", dom)


def _ks_basis(c):
    dom = [Guard(Sym("x"), "!=")]
    b = {"c": Const(c)}
    return VFLieAlgebra((_field("0; 2*x"), _field("x; 2*y"), _field("y; 3*y^2/(2*x) - 2*c*x^3", b)), (0, 2),
                        "kummer-schwarz", dom)


def milne_pinney(parameters=None, coefficients=None) -> TDependentSystem:
    p = _params(parameters, {"c": "1"})
    c = _frac(p["c"])
    basis = _mp_basis(c)
    omega = SymplecticForm(ONE, basis.guards)
    hs = [normalize(substitute(parse(s), {"c": Const(c)})) for s in ("(x^2)/2", "-x*y/2", "(y^2)/2 + c/(2*x^2)")]
    native = LieHamiltonianStructure(omega, hs, "chart-native", False,
                                     ["{h1,h2} = -h1", "{h1,h3} = -2*h2", "{h2,h3} = -h3"])
    structures = {"chart-native": native}
    canonical = _class_canonical("milne-pinney", c, basis)
    if canonical is not None:
        structures["class-canonical"] = canonical
    names = ("w2", "b2", "b3")
    cls = "P2" if c > 0 else "I4" if c < 0 else "I5"
    return TDependentSystem("milne-pinney", basis, tuple(_coeffs(names, ("1", "0", "1"), coefficients)), names,
                            {"c": c}, native, structures, regime=cls)


def kummer_schwarz(parameters=None, coefficients=None) -> TDependentSystem:
    p = _params(parameters, {"c": "1"})
    c = _frac(p["c"])
    basis = _ks_basis(c)
    omega = SymplecticForm(parse("1/x^3"), basis.guards)
    hs = [normalize(substitute(parse(s), {"c": Const(c)})) for s in ("2/x", "y/x^2", "(y^2)/(2*x^3) + 2*c*x")]
    native = LieHamiltonianStructure(omega, hs, "chart-native", False,
                                     ["{h1,h2} = -h1", "{h1,h3} = -2*h2", "{h2,h3} = -h3"])
    structures = {"chart-native": native}
    canonical = _class_canonical("kummer-schwarz", c, basis)
    if canonical is not None:
        structures["class-canonical"] = canonical
    names = ("b1", "b2", "b3")
    cls = "P2" if c > 0 else "I4" if c < 0 else "I5"
    return TDependentSystem("kummer-schwarz", basis, tuple(_coeffs(names, ("1", "0", "1"), coefficients)), names,
                            {"c": c}, native, structures, regime=cls)


def _class_canonical(target, c, basis):
    """Pull the class area form and functions back through the inverse chart map."""
    from . import maps

    kind = maps.canonical_map_kind(target, c)
    if kind is None:
        return None
    phi = maps.chart_map(kind, {"c": c})
    inv = phi.inverse_map()
    src = maps.source_structure(kind)
    from ..symplectic import pullback

    omega = pullback(src.omega, inv)
    omega = SymplecticForm(omega.f, tuple(basis.guards) + tuple(inv.branch))
    hs = [normalize(inv.compose(h)) for h in src.functions]
    return LieHamiltonianStructure(omega, hs, "class-canonical", src.extension, list(src.relations),
                                   f"pulled back from {maps.SOURCE_CLASS[kind]} through the inverse of {kind}")


def buchdahl(parameters=None, coefficients=None) -> TDependentSystem:
    p = _params(parameters, {"a": "1"})
    a = normalize(_e(p["a"]))
    if a.symbols - {"x"}:
        raise RegimeError("a must be a function of x")
    if constant_value(a) == 0:
        raise RegimeError("a(x) = 0 gives a trivial system")
    dom = [Guard(Sym("y"), "!=")]
    X1 = PlanarVectorField(Sym("y"), normalize(a * Sym("y") ** 2), tuple(dom))
    X2 = _field("0; y")
    basis = VFLieAlgebra((X1, X2), (0, 1), "buchdahl", dom)
    A = _antiderivative(substitute(a, {"x": Sym("s")}), "s")
    A = substitute(A, {"s": Sym("x")}) if A is not None else Quad(normalize(substitute(a, {"x": Sym("s")})), "s",
                                                                 Const(Fraction(0)), Sym("x"), "A")
    A = normalize(A)
    weight = normalize(_exp(-A))
    omega = SymplecticForm(normalize(weight / Sym("y")), tuple(dom))
    h1 = normalize(Sym("y") * weight)
    inner = normalize(substitute(weight, {"x": Sym("s")}))
    F = _antiderivative(inner, "s") if not _has_quad(inner) else None
    if F is not None:
        h2 = normalize(-(substitute(F, {"s": Sym("x")}) - substitute(F, {"s": Const(Fraction(0))})))
    else:
        h2 = normalize(-Quad(inner, "s", Const(Fraction(0)), Sym("x"), "H"))
    st = LieHamiltonianStructure(omega, [h1, h2], "table", False, ["{h1,h2} = h1"])
    names = ("k", "b")
    return TDependentSystem("buchdahl", basis, tuple(_coeffs(names, ("1", "sin(t)"), coefficients)), names,
                            {"a": a}, st, {"table": st}, regime="I14A")


def _exp(e):
    return Func("exp", e)


def lotka_volterra(parameters=None, coefficients=None) -> TDependentSystem:
    """Seasonal Lotka-Volterra; the structure depends on which of a, b equal 1."""
    p = _params(parameters, {"a": "2", "b": "3"})
    a, b = _frac(p["a"]), _frac(p["b"])
    if a == 0:
        raise RegimeError("Lotka-Volterra needs a != 0")
    bind = {"a": Const(a), "b": Const(b)}
    dom = [Guard(Sym("x"), ">"), Guard(Sym("y"), ">")]
    X1 = _field("a*x; a*y", bind, dom)
    X2 = _field("-(x - a*y)*x; -(b*x - y)*y", bind, dom)
    basis = VFLieAlgebra((X1, X2), (0, 1), "lotka-volterra", dom)
    names = ("k", "g")
    coeffs = tuple(_coeffs(names, ("1", "cos(t)"), coefficients))
    if a == 1 and b == 1:
        return TDependentSystem("lotka-volterra", basis, coeffs, names, {"a": a, "b": b}, None, {},
                                regime="I2", note="rank-one distribution: a Lie system without area form")
    s = Sym("s")
    if a != 1 and b != 1:
        regime = "a,b != 1"
        q = 1 / (a - 1) + 1 / (b - 1)
        F = normalize(s ** Fraction(a / (1 - a)) * _abs(1 - a + (1 - b) * s) ** q)
        # h2 = y G(x/y) with G = F(s) s ((b-1)s + a-1); valid on both sides of the singular line
        h2 = normalize(substitute(parse(f"y*(x/y)^({1 / (1 - a)})*((b-1)*x/y + a - 1)"
                                        f"*abs((1-a) + (1-b)*x/y)^({q})"), bind))
        dom = dom + [Guard(normalize((1 - a) * Sym("y") + (1 - b) * Sym("x")), "!=")]
    elif a == 1:
        regime = "a = 1, b != 1"
        F = normalize(_exp(normalize((1 / s - (b - 2) * _ln(s)) / (b - 1))))
        h2 = normalize(substitute(parse(f"(b-1)*x*(x/y)^({1 / (b - 1)})*exp(y/((b-1)*x))"), bind))
    else:
        regime = "b = 1, a != 1"
        F = normalize(s ** Fraction(a / (1 - a)) * _exp(s / (a - 1)))
        h2 = normalize(substitute(parse(f"(a-1)*y*exp(x/(y*(a-1)))*(x/y)^({1 / (1 - a)})"), bind))
    # f = F(x/y)/y^2; X1 = a(x dx + y dy) gives dh1 = -a F(x/y) d(x/y)
    f = normalize(substitute(F, {"s": Sym("x") / Sym("y")}) / Sym("y") ** 2)
    sides = [("table", [], ONE)]
    if regime == "a,b != 1" and (1 - a) / (b - 1) > 0:
        # the line x = s* y cuts the quadrant; each side integrates from its own base point
        s_star = (1 - a) / (b - 1)
        side = normalize(Sym("x") - Const(s_star) * Sym("y"))
        sides = [("table", [Guard(side, ">")], Const(s_star + 1)),
                 (f"table, x < {s_star}*y", [Guard(normalize(-side), ">")], Const(s_star / 2))]
    structures = {}
    for key, extra, s0 in sides:
        h1 = normalize(Const(-a) * Quad(F, "s", s0, Sym("x") / Sym("y"), "H"))
        omega = SymplecticForm(f, tuple(dom + extra))
        structures[key] = LieHamiltonianStructure(omega, [h1, h2], "table", False, [f"{{h1,h2}} = {_multiple(-a, 'h2')}"],
                                                  f"h1 is defined by quadrature in s = x/y from s = {to_text(s0)}")
    return TDependentSystem("lotka-volterra", VFLieAlgebra((X1, X2), (0, 1), "lotka-volterra", dom), coeffs, names,
                            {"a": a, "b": b}, structures["table"], structures, regime=regime)


def _multiple(c: Fraction, name: str) -> str:
    return _combo_text({0: Fraction(c)}, [name]) if c else "0"


def _abs(e):
    return Func("abs", e)


def _ln(e):
    return Func("ln", Func("abs", e))


def predator_prey(parameters=None, coefficients=None, variant="slv3") -> TDependentSystem:
    variant = variant.lower()
    dom = [Guard(Sym("y"), "!=")]
    if variant == "slv":
        _params(parameters, {})
        basis = VFLieAlgebra(tuple(_field(s) for s in ("x; 0", "y; 0", "x^2; 0", "x*y; 0", "y^2; 0", "0; y")), (),
                             "slv")
        names = ("b", "c", "d", "e", "f", "k")
        return TDependentSystem("slv", basis, tuple(_coeffs(names, ("0", "0", "t", "t^2", "0", "1"), coefficients)),
                                names, note="not a Lie system for non-proportional d, e")
    if variant == "slv2":
        _params(parameters, {})
        basis = VFLieAlgebra(tuple(_field(s, guards=dom) for s in ("0; y", "x; 0", "y; 0", "y^2; 0")), (0, 1, 2),
                             "I15", dom)
        names = ("k", "b", "c", "f")
        return TDependentSystem("slv2", basis, tuple(_coeffs(names, ("1", "1", "sin(t)", "cos(t)"), coefficients)),
                                names, regime="I15", note="I15: no compatible area form")
    if variant != "slv3":
        raise UnknownSystemError(variant)
    p = _params(parameters, {"b": "3"})
    b = _frac(p["b"])
    bind = {"b": Const(b)}
    if b.denominator != 1:
        dom = [Guard(Sym("y"), ">")]
    basis = VFLieAlgebra((_field("b*x; y", bind, dom), _field("y; 0", guards=dom), _field("y^2; 0", guards=dom)),
                         (0, 1), "slv3", dom)
    omega = SymplecticForm(normalize(Sym("y") ** (-(b + 1))), tuple(dom))
    x, y = Sym("x"), Sym("y")

    def y_power_integral(k):
        # antiderivative of y^k dy
        return _ln(y) if k == -1 else y ** (k + 1) / Const(k + 1)

    functions = [normalize(e) for e in (-x * y ** (-b), y_power_integral(-b), y_power_integral(1 - b))]
    if b == 1:
        rel, ext, regime = ["{h1,h2} = -h0", "{h1,h3} = -h3"], True, "I14B"
    elif b == 2:
        rel, ext, regime = ["{h1,h2} = h2", "{h1,h3} = -h0"], True, "I14B"
    else:
        rel, ext, regime = [f"{{h1,h2}} = {_multiple(b - 1, 'h2')}", f"{{h1,h3}} = {_multiple(b - 2, 'h3')}"], False, "I14A"
    st = LieHamiltonianStructure(omega, functions, "table", ext, rel)
    names = ("k", "c", "f")
    return TDependentSystem("slv3", basis, tuple(_coeffs(names, ("1", "sin(t)", "cos(t)"), coefficients)), names,
                            {"b": b}, st, {"table": st}, regime=regime)


def viral_infection(parameters=None, coefficients=None) -> TDependentSystem:
    p = _params(parameters, {"delta": "1"})
    delta = _frac(p["delta"])
    dom = [Guard(Sym("x"), "!="), Guard(Sym("y"), "!=")]
    basis = VFLieAlgebra((_field("x; 0", guards=dom), _field("0; -y", guards=dom), _field("0; x*y", guards=dom)),
                         (0, 1), "viral", dom)
    given = dict(coefficients or {})
    names = ("alpha", "gamma", "beta")
    raw = _coeffs(names, ("2", "1", "1"), given)
    coeffs = (normalize(raw[0] - Const(delta)), raw[1], raw[2])
    omega = SymplecticForm(parse("1/(x*y)"), tuple(dom))
    hs = [normalize(parse(s)) for s in ("ln(abs(y))", "ln(abs(x))", "-x")]
    st = LieHamiltonianStructure(omega, hs, "table", True, ["{h1,h2} = -h0", "{h1,h3} = -h3"])
    return TDependentSystem("viral", basis, coeffs, ("alpha-delta", "gamma", "beta"), {"delta": delta}, st,
                            {"table": st}, regime="I14B")


def custom(basis_fields, coefficients, name="custom", guards=()) -> TDependentSystem:
    fields = [f if isinstance(f, PlanarVectorField) else PlanarVectorField.parse(f, guards) for f in basis_fields]
    names = tuple(f"b{i + 1}" for i in range(len(fields)))
    return TDependentSystem(name, VFLieAlgebra(tuple(fields), (), name, tuple(guards)),
                            tuple(normalize(_e(c)) for c in coefficients), names)


_SYSTEMS = {
    "riccati": riccati,
    "milne-pinney": milne_pinney,
    "kummer-schwarz": kummer_schwarz,
    "buchdahl": buchdahl,
    "lotka-volterra": lotka_volterra,
    "slv": lambda p=None, c=None: predator_prey(p, c, "slv"),
    "slv2": lambda p=None, c=None: predator_prey(p, c, "slv2"),
    "slv3": lambda p=None, c=None: predator_prey(p, c, "slv3"),
    "viral": viral_infection,
}
_ALIASES = {"mp": "milne-pinney", "ks": "kummer-schwarz", "lv": "lotka-volterra", "predator-prey": "slv3",
            "viral-infection": "viral", "riccati-planar": "riccati", "milnepinney": "milne-pinney",
            "kummerschwarz": "kummer-schwarz", "lotkavolterra": "lotka-volterra"}


def system_names():
    return sorted(_SYSTEMS)


def make_system(name: str, parameters=None, coefficients=None) -> TDependentSystem:
    key = name.strip().lower().replace("_", "-")
    key = _ALIASES.get(key, key)
    if key not in _SYSTEMS:
        raise UnknownSystemError(f"unknown system {name!r}; known: {', '.join(system_names())}")
    return _SYSTEMS[key](parameters, coefficients)
