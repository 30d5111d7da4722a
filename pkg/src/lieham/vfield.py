"""Planar vector fields and planar maps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .expr import (
    ZERO,
    Expr,
    Func,
    Guard,
    Neg,
    Verdict,
    as_expr,
    as_guard,
    compare,
    differentiate,
    evaluate,
    is_zero,
    natural_guards,
    normalize,
    simplify_guards,
    substitute,
    to_text,
)
from .expr.nodes import Add, Const, Div, Mul, Pow, Quad, Sym

_RANK = {
    Verdict.PROVED_EQUAL: 0,
    Verdict.NUMERICALLY_EQUAL: 1,
    Verdict.INCONCLUSIVE: 2,
    Verdict.PROVED_UNEQUAL: 3,
}


def worst(verdicts) -> Verdict:
    verdicts = list(verdicts)
    if not verdicts:
        return Verdict.PROVED_EQUAL
    return max(verdicts, key=_RANK.__getitem__)


def _norm(e) -> Expr:
    return normalize(as_expr(e))


@dataclass(frozen=True)
class PlanarVectorField:
    """``X = xc d/dx + yc d/dy`` with the guards of its domain."""

    xc: Expr
    yc: Expr
    guards: tuple = ()

    def __post_init__(self):
        xc, yc = _norm(self.xc), _norm(self.yc)
        if "t" in (xc.symbols | yc.symbols):
            raise ValueError("vector field components may not depend on t")
        object.__setattr__(self, "xc", xc)
        object.__setattr__(self, "yc", yc)
        given = [as_guard(g) for g in self.guards]
        object.__setattr__(self, "guards", tuple(simplify_guards(given + natural_guards(xc) + natural_guards(yc))))

    @classmethod
    def parse(cls, text: str, guards=()):
        """``"X^x; X^y"``."""
        parts = text.split(";")
        if len(parts) != 2:
            raise ValueError(f"a field reads '<x component>; <y component>': {text!r}")
        return cls(as_expr(parts[0].strip()), as_expr(parts[1].strip()), tuple(guards))

    @property
    def components(self):
        return self.xc, self.yc

    @property
    def symbols(self):
        return self.xc.symbols | self.yc.symbols

    def is_zero(self) -> bool:
        return is_zero(self.xc) and is_zero(self.yc)

    def __add__(self, other):
        return PlanarVectorField(self.xc + other.xc, self.yc + other.yc, self.guards + other.guards)

    def __sub__(self, other):
        return PlanarVectorField(self.xc - other.xc, self.yc - other.yc, self.guards + other.guards)

    def __neg__(self):
        return PlanarVectorField(-self.xc, -self.yc, self.guards)

    def scale(self, g):
        g = as_expr(g)
        return PlanarVectorField(g * self.xc, g * self.yc, self.guards)

    def substitute(self, bindings: Mapping[str, object]):
        return PlanarVectorField(substitute(self.xc, bindings), substitute(self.yc, bindings),
                                 tuple(Guard(substitute(g.expr, bindings), g.relation) for g in self.guards))

    def at(self, x: float, y: float, params=None):
        env = {"x": x, "y": y, **(params or {})}
        return evaluate(self.xc, env), evaluate(self.yc, env)

    def to_json(self):
        return {"x": to_text(self.xc), "y": to_text(self.yc), "guards": [g.text for g in self.guards]}

    @classmethod
    def from_json(cls, data):
        return cls(as_expr(data["x"]), as_expr(data["y"]), tuple(data.get("guards", ())))

    def __str__(self):
        return f"({to_text(self.xc)})*dx + ({to_text(self.yc)})*dy"


Field = PlanarVectorField


def dx() -> PlanarVectorField:
    return PlanarVectorField(1, 0)


def dy() -> PlanarVectorField:
    return PlanarVectorField(0, 1)


def combine(coefficients: Sequence, fields: Sequence[PlanarVectorField]) -> PlanarVectorField:
    """``sum c_i X_i`` with expression coefficients."""
    xs, ys, guards = [], [], []
    for c, f in zip(coefficients, fields):
        c = as_expr(c)
        xs.append(c * f.xc)
        ys.append(c * f.yc)
        guards.extend(f.guards)
    if not xs:
        return PlanarVectorField(0, 0)
    return PlanarVectorField(Add(tuple(xs)), Add(tuple(ys)), tuple(guards))


def apply_to(X: PlanarVectorField, h) -> Expr:
    """Directional derivative ``X^x dh/dx + X^y dh/dy``."""
    h = as_expr(h)
    return normalize(X.xc * differentiate(h, "x") + X.yc * differentiate(h, "y"))


def lie_bracket(X: PlanarVectorField, Y: PlanarVectorField) -> PlanarVectorField:
    """``[X, Y] = (X.grad) Y - (Y.grad) X``."""
    xc = apply_to(X, Y.xc) - apply_to(Y, X.xc)
    yc = apply_to(X, Y.yc) - apply_to(Y, X.yc)
    return PlanarVectorField(xc, yc, X.guards + Y.guards)


def divergence(X: PlanarVectorField) -> Expr:
    return normalize(differentiate(X.xc, "x") + differentiate(X.yc, "y"))


def wedge(X: PlanarVectorField, Y: PlanarVectorField) -> Expr:
    """The 2D cross determinant ``X^x Y^y - X^y Y^x``."""
    return normalize(X.xc * Y.yc - X.yc * Y.xc)


def field_verdict(X: PlanarVectorField, Y: PlanarVectorField, guards=(), **kwargs) -> Verdict:
    g = list(guards) + list(X.guards) + list(Y.guards)
    return worst(compare(a, b, g, **kwargs).verdict for a, b in zip(X.components, Y.components))


# -- maps ---------------------------------------------------------------------

def resolve_abs(e: Expr, branch: Sequence[Guard]) -> Expr:
    """Drop ``abs`` where a branch guard fixes the sign of its argument."""
    positives = [normalize(g.expr) for g in branch if g.relation == ">"]
    if not positives:
        return e

    def go(node):
        if isinstance(node, (Const, Sym)):
            return node
        if isinstance(node, Func):
            arg = go(node.arg)
            if node.name == "abs":
                n = normalize(arg)
                for p in positives:
                    if is_zero(n - p):
                        return arg
                    if is_zero(n + p):
                        return Neg(arg)
            return Func(node.name, arg)
        if isinstance(node, Add):
            return Add(tuple(go(a) for a in node.args))
        if isinstance(node, Mul):
            return Mul(tuple(go(a) for a in node.args))
        if isinstance(node, Neg):
            return Neg(go(node.arg))
        if isinstance(node, Div):
            return Div(go(node.num), go(node.den))
        if isinstance(node, Pow):
            return Pow(go(node.base), node.exp)
        if isinstance(node, Quad):
            return node
        raise TypeError(type(node))

    return go(e)


class SingularMapError(ValueError):
    pass


@dataclass(frozen=True)
class PlanarMap:
    """``(x, y) -> (u(x, y), v(x, y))`` on an explicit branch region.

    ``inverse`` holds ``(x(u, v), y(u, v))`` written in the symbols ``x, y``
    of the target chart.  ``raw`` keeps the components as given, before
    ``abs`` is resolved on the branch.
    """

    u: Expr
    v: Expr
    branch: tuple = ()
    inverse: tuple | None = None
    parameters: dict = field(default_factory=dict)
    name: str = ""
    raw: tuple = ()

    def __post_init__(self):
        branch = tuple(as_guard(g) for g in self.branch)
        u0, v0 = as_expr(self.u), as_expr(self.v)
        object.__setattr__(self, "raw", (u0, v0))
        u = normalize(resolve_abs(u0, branch))
        v = normalize(resolve_abs(v0, branch))
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "branch", tuple(simplify_guards(list(branch) + natural_guards(u) + natural_guards(v))))
        if self.inverse is not None:
            object.__setattr__(self, "inverse", tuple(normalize(as_expr(c)) for c in self.inverse))
        if is_zero(self.jacobian_determinant()):
            raise SingularMapError(f"Jacobian determinant of ({to_text(u)}, {to_text(v)}) vanishes identically")

    def jacobian(self):
        return ((differentiate(self.u, "x"), differentiate(self.u, "y")),
                (differentiate(self.v, "x"), differentiate(self.v, "y")))

    def jacobian_determinant(self) -> Expr:
        (a, b), (c, d) = self.jacobian()
        return normalize(a * d - b * c)

    def compose(self, e) -> Expr:
        """``e o phi`` for an expression in the target chart."""
        return substitute(as_expr(e), {"x": self.u, "y": self.v})

    def push(self, X: PlanarVectorField):
        """Components of ``J phi . X``, as functions on the source chart."""
        (a, b), (c, d) = self.jacobian()
        return normalize(a * X.xc + b * X.yc), normalize(c * X.xc + d * X.yc)

    def check_inverse(self, **kwargs) -> Verdict:
        if self.inverse is None:
            raise ValueError("map has no inverse attached")
        back = [substitute(c, {"x": self.u, "y": self.v}) for c in self.inverse]
        g = list(self.branch)
        return worst(compare(b, s, g, **kwargs).verdict for b, s in zip(back, (Sym("x"), Sym("y"))))

    def at(self, x: float, y: float):
        env = {"x": x, "y": y}
        return evaluate(self.u, env), evaluate(self.v, env)

    def to_json(self):
        out = {"u": to_text(self.u), "v": to_text(self.v), "branch": [g.text for g in self.branch]}
        if self.inverse is not None:
            out["inverse"] = {"x": to_text(self.inverse[0]), "y": to_text(self.inverse[1])}
        if self.parameters:
            out["parameters"] = {k: str(v) for k, v in self.parameters.items()}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data):
        inv = data.get("inverse")
        params = {k: Fraction(v) for k, v in data.get("parameters", {}).items()}
        return cls(as_expr(data["u"]), as_expr(data["v"]), tuple(data.get("branch", ())),
                   None if inv is None else (as_expr(inv["x"]), as_expr(inv["y"])), params, data.get("name", ""))


def identity_map() -> PlanarMap:
    return PlanarMap(Sym("x"), Sym("y"), name="identity")


@dataclass
class RelatedReport:
    verdict: Verdict
    components: list
    pushed: tuple
    target: tuple

    @property
    def is_equal(self):
        return self.verdict.is_equal

    def to_json(self):
        return {"verdict": str(self.verdict), "components": [str(v) for v in self.components],
                "pushed": [to_text(e) for e in self.pushed], "target": [to_text(e) for e in self.target]}


def verify_related(phi: PlanarMap, X: PlanarVectorField, Y: PlanarVectorField, **kwargs) -> RelatedReport:
    """Check ``J phi . X = Y o phi`` on the branch of ``phi``."""
    pushed = phi.push(X)
    target = (normalize(phi.compose(Y.xc)), normalize(phi.compose(Y.yc)))
    guards = list(phi.branch) + list(X.guards)
    guards += [Guard(phi.compose(g.expr), g.relation) for g in Y.guards]
    comps = [compare(a, b, guards, **kwargs).verdict for a, b in zip(pushed, target)]
    return RelatedReport(worst(comps), comps, pushed, target)


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)
