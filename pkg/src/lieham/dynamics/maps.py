"""Explicit local diffeomorphisms between the sl(2) classes and the Milne-Pinney / Kummer-Schwarz charts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..expr import Const, Expr, Guard, Sym, as_expr, constant_value, evaluate, normalize, parse, parse_guard, substitute
from ..symplectic import SymplecticForm, poisson_bracket
from ..vfield import PlanarMap, PlanarVectorField, identity_map, lie_bracket, verify_related

KINDS = ("mpFromI4", "mpFromI5", "ksFromI4", "ksFromI5", "riccatiToMp", "ksToMp")
SOURCE_CLASS = {"mpFromI4": "I4", "mpFromI5": "I5", "ksFromI4": "I4", "ksFromI5": "I5", "riccatiToMp": "P2",
                "ksToMp": "kummer-schwarz"}
TARGET_SYSTEM = {"mpFromI4": "milne-pinney", "mpFromI5": "milne-pinney", "ksFromI4": "kummer-schwarz",
                 "ksFromI5": "kummer-schwarz", "riccatiToMp": "milne-pinney", "ksToMp": "milne-pinney"}
LAMBDA_TOL = 1e-12
ROOT_KINDS = ("mpFromI4", "riccatiToMp", "ksToMp")

# documented choices; the other sign of lambda and the mirrored branch are not exercised by transport
DEFAULTS = {
    "mpFromI4": {"c": Fraction(-1, 4), "branch": "x>y"},
    "mpFromI5": {"c": Fraction(0), "lambda": Fraction(1), "branch": "y>0"},
    "ksFromI4": {"c": Fraction(-1, 4), "branch": "x>y"},
    "ksFromI5": {"c": Fraction(0), "lambda": Fraction(1), "branch": "y>0"},
    "riccatiToMp": {"c": Fraction(1), "branch": "y>0"},
    "ksToMp": {"c_ks": Fraction(-1), "c_mp": Fraction(-1, 4), "branch": "x>0"},
}
UNTESTED_BRANCHES = {
    "mpFromI4": ["x<y", "lambda<0"],
    "mpFromI5": ["y<0", "lambda<0"],
    "ksFromI4": ["x<y", "lambda<0"],
    "ksFromI5": ["y<0", "lambda<0"],
    "riccatiToMp": ["y<0", "lambda<0"],
    "ksToMp": ["x<0"],
}


class MapConstraintError(ValueError):
    pass


def _num(v, name) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, Expr):
        c = constant_value(normalize(v))
        if c is None:
            raise MapConstraintError(f"{name} must be a number")
        return c
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    return Fraction(str(v))


def _root(value: Fraction, k: int) -> Expr:
    """Positive real ``value^(1/k)``, exact when rational."""
    return normalize(Const(value) ** Fraction(1, k))


def _lam(p, name, default_value: Fraction, power: int, residual):
    """``lambda`` from the parameters or the positive root of its constraint."""
    given = p.get("lambda")
    if given is not None:
        lam = normalize(given if isinstance(given, Expr) else parse(str(given)))
    else:
        lam = _root(default_value, power)
    lv = evaluate(lam, {})
    if lv == 0:
        raise MapConstraintError("lambda must be nonzero")
    r = residual(lv)
    if abs(r) > LAMBDA_TOL * max(1.0, abs(float(default_value))):
        raise MapConstraintError(f"{name} violated: residual {r:.3g}")
    return lam


def _branch(text: str):
    return [parse_guard(text)]


def chart_map(kind: str, parameters=None) -> PlanarMap:
    """The chart map ``kind`` at the given parameters, with its inverse attached."""
    if kind not in KINDS:
        raise MapConstraintError(f"unknown map kind {kind!r}; known: {', '.join(KINDS)}")
    p = dict(DEFAULTS[kind])
    p.update({k: v for k, v in (parameters or {}).items() if v is not None})
    # inverses are written in the target chart, whose coordinates are again named x, y
    x, y, u, v = Sym("x"), Sym("y"), Sym("x"), Sym("y")
    branch = p["branch"]

    if kind != "ksToMp":
        c = _num(p["c"], "c")
    if kind in ("mpFromI5", "ksFromI5") and c != 0:
        raise MapConstraintError(f"{kind} relates the c = 0 systems")
    if kind == "mpFromI4":
        if c >= 0:
            raise MapConstraintError("mpFromI4 needs c < 0")
        lam = _lam(p, "lambda^4 = -4c", -4 * c, 4, lambda L: L ** 4 + 4 * float(c))
        if branch not in ("x>y", "x<y"):
            raise MapConstraintError("branch must be x>y or x<y")
        sgn = 1 if branch == "x>y" else -1
        d = parse("abs(x - y)")
        U = lam * d ** Fraction(-1, 2)
        V = -lam * (x + y) / (2 * d ** Fraction(1, 2))
        # |x - y| = lam^2/u^2, x + y = -2v/u
        w = lam ** 2 / u ** 2
        inv = (normalize((sgn * w - 2 * v / u) / 2), normalize((-sgn * w - 2 * v / u) / 2))
        return PlanarMap(U, V, tuple(_branch(branch)), inv, {"c": c, "lambda": lam}, kind)
    if kind == "ksFromI4":
        if c >= 0:
            raise MapConstraintError("ksFromI4 needs c < 0")
        lam = _lam(p, "4 lambda^2 = -1/c", Fraction(-1) / (4 * c), 2, lambda L: 4 * L ** 2 + 1 / float(c))
        U = lam * (x - y)
        V = lam * (x ** 2 - y ** 2)
        inv = (normalize((u / lam + v / u) / 2), normalize((v / u - u / lam) / 2))
        return PlanarMap(U, V, tuple(_branch(branch)), inv, {"c": c, "lambda": lam}, kind)
    if kind == "mpFromI5":
        lam = normalize(Const(_num(p["lambda"], "lambda")))
        U = lam / y
        V = -lam * x / y
        inv = (normalize(-v / u), normalize(lam / u))
        return PlanarMap(U, V, tuple(_branch(branch)), inv, {"c": Fraction(0), "lambda": lam}, kind)
    if kind == "ksFromI5":
        lam = normalize(Const(_num(p["lambda"], "lambda")))
        U = lam * y ** 2
        V = 2 * lam * x * y ** 2
        sgn = 1 if branch == "y>0" else -1
        inv = (normalize(v / (2 * u)), normalize(sgn * (u / lam) ** Fraction(1, 2)))
        return PlanarMap(U, V, tuple(_branch(branch)), inv, {"c": Fraction(0), "lambda": lam}, kind)
    if kind == "riccatiToMp":
        if c <= 0:
            raise MapConstraintError("riccatiToMp needs c > 0")
        lam = _lam(p, "lambda^4 = c", c, 4, lambda L: L ** 4 - float(c))
        d = parse("abs(y)")
        U = lam * d ** Fraction(-1, 2)
        V = -lam * x * d ** Fraction(-1, 2)
        sgn = 1 if branch == "y>0" else -1
        inv = (normalize(-v / u), normalize(sgn * lam ** 2 / u ** 2))
        return PlanarMap(U, V, tuple(_branch(branch)), inv, {"c": c, "lambda": lam}, kind)
    # ksToMp: phi_MP o phi_KS^-1 through the I4 chart with x - y = X/lam_K
    c_ks, c_mp = _num(p["c_ks"], "c_ks"), _num(p["c_mp"], "c_mp")
    if c_ks >= 0 or c_mp >= 0:
        raise MapConstraintError("ksToMp relates the c < 0 systems")
    lam_k = _lam({"lambda": p.get("lambda_ks")}, "4 lambda_K^2 = -1/c", Fraction(-1) / (4 * c_ks), 2,
                 lambda L: 4 * L ** 2 + 1 / float(c_ks))
    lam_m = _lam({"lambda": p.get("lambda_mp")}, "lambda_M^4 = -4c", -4 * c_mp, 4, lambda L: L ** 4 + 4 * float(c_mp))
    if branch not in ("x>0", "x<0"):
        raise MapConstraintError("branch must be x>0 or x<0")
    k = normalize(abs_const(lam_k) ** Fraction(1, 2))
    w = parse("abs(x)")
    U = lam_m * k * w ** Fraction(-1, 2)
    V = -lam_m * k * y / (2 * x * w ** Fraction(1, 2))
    sgn = 1 if branch == "x>0" else -1
    X = normalize(sgn * abs_const(lam_k) * lam_m ** 2 / u ** 2)
    inv = (X, normalize(X * (-2 * v / u)))
    return PlanarMap(U, V, tuple(_branch(branch)), inv, {"c_ks": c_ks, "c_mp": c_mp, "lambda_ks": lam_k,
                                                         "lambda_mp": lam_m}, kind)


def abs_const(e: Expr) -> Expr:
    return e if evaluate(e, {}) > 0 else normalize(-e)


def inverse_of(phi: PlanarMap) -> PlanarMap:
    """The attached inverse as a map of its own, on the image of the branch."""
    if phi.inverse is None:
        raise ValueError("map has no inverse attached")
    back = {"x": phi.inverse[0], "y": phi.inverse[1]}
    branch = [Guard(normalize(substitute(g.expr, back)), g.relation) for g in phi.branch]
    if phi.name in ROOT_KINDS:
        # u = lambda |.|^(-1/2) covers only the half-plane where u has the sign of lambda
        lam = phi.parameters.get("lambda", phi.parameters.get("lambda_mp"))
        sign = 1 if evaluate(as_expr(lam), {}) > 0 else -1
        branch.append(Guard(normalize(sign * Sym("x")), ">"))
    return PlanarMap(phi.inverse[0], phi.inverse[1], tuple(branch), (phi.u, phi.v), dict(phi.parameters),
                     f"{phi.name}^-1" if phi.name else "")


PlanarMap.inverse_map = inverse_of


# -- paired bases ---------------------------------------------------------------------------------

def _f(text, guards=()):
    return PlanarVectorField.parse(text, guards)


def class_basis(cls: str, parameters=None):
    """Basis of the source chart in the pairing used by the maps (X1, X3 generate, 2 X2 = [X1, X3])."""
    if cls == "I4":
        g = [parse_guard("x - y != 0")]
        X1, X3 = _f("1; 1", g), _f("x^2; y^2", g)
    elif cls == "I5":
        g = [parse_guard("y != 0")]
        X1, X3 = _f("1; 0", g), _f("x^2; x*y", g)
    elif cls == "P2":
        g = [parse_guard("y != 0")]
        X1, X3 = _f("1; 0", g), _f("x^2 - y^2; 2*x*y", g)
    else:
        from .systems import make_system

        return list(make_system(cls, parameters).fields)
    X2 = lie_bracket(X1, X3).scale(Const(Fraction(1, 2)))
    return [X1, X2, X3]


@dataclass
class SourceStructure:
    omega: SymplecticForm
    functions: list
    extension: bool
    relations: list


def source_structure(kind: str) -> SourceStructure:
    """Class area form and functions for the paired source basis (h2 fixed by the bracket of h1, h3)."""
    from ..catalog import get_entry

    cls = SOURCE_CLASS[kind]
    e = get_entry(cls)
    ham = e.hamiltonian
    h1, h3 = ham.functions[0], ham.functions[2]
    h2 = normalize(-poisson_bracket(h1, h3, ham.omega) / 2)
    return SourceStructure(ham.omega, [h1, h2, h3], False,
                           ["{h1,h2} = -h1", "{h1,h3} = -2*h2", "{h2,h3} = -h3"])


def canonical_map_kind(target: str, c: Fraction):
    if target == "milne-pinney":
        return "riccatiToMp" if c > 0 else "mpFromI4" if c < 0 else "mpFromI5"
    if target == "kummer-schwarz":
        return None if c > 0 else "ksFromI4" if c < 0 else "ksFromI5"
    return None


def target_parameters(kind: str, phi: PlanarMap):
    if kind == "ksToMp":
        return {"c": phi.parameters["c_mp"]}
    return {"c": phi.parameters["c"]}


def related_bases(kind: str, parameters=None):
    """``(phi, source_fields, target_fields)`` for ``kind``."""
    from .systems import make_system

    phi = chart_map(kind, parameters)
    if kind == "ksToMp":
        src = list(make_system("kummer-schwarz", {"c": phi.parameters["c_ks"]}).fields)
    else:
        src = class_basis(SOURCE_CLASS[kind])
    tgt = list(make_system(TARGET_SYSTEM[kind], target_parameters(kind, phi)).fields)
    return phi, src, tgt


def verify_map(kind: str, parameters=None, samples=200, seed=None):
    """Relatedness of each paired basis field under ``kind``."""
    phi, src, tgt = related_bases(kind, parameters)
    kw = {"samples": samples}
    if seed is not None:
        kw["seed"] = seed
    return phi, [verify_related(phi, X, Y, **kw) for X, Y in zip(src, tgt)]


__all__ = ["KINDS", "DEFAULTS", "UNTESTED_BRANCHES", "MapConstraintError", "chart_map", "inverse_of",
           "class_basis", "source_structure", "related_bases", "verify_map", "identity_map"]
