"""Immutable expression tree.

Nodes are frozen dataclasses, so structural equality and hashing come for
free.  Arithmetic operators build raw trees; call ``normalize`` to bring a
tree to its canonical rational form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational

COORDINATES = ("x", "y")
TIME = "t"
RESERVED = COORDINATES + (TIME,)
BUILTINS = ("exp", "ln", "sqrt", "abs", "sin", "cos")
QUAD_NAME = "int"


class Expr:
    """Base class of all nodes."""

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, Neg(as_expr(other))))

    def __rsub__(self, other):
        return Add((as_expr(other), Neg(self)))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        return Pow(self, Fraction(exponent))

    def __str__(self):
        from .printer import to_text

        return to_text(self)

    @cached_property
    def symbols(self) -> frozenset:
        """Free symbol names."""
        out = set()
        for child in self.children():
            out |= child.symbols
        return frozenset(out)

    def children(self) -> tuple:
        return ()

    def depends_on(self, name: str) -> bool:
        return name in self.symbols


@dataclass(frozen=True, eq=True, repr=False)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, eq=True, repr=False)
class Sym(Expr):
    name: str

    @cached_property
    def symbols(self):
        return frozenset((self.name,))

    @property
    def kind(self):
        if self.name in COORDINATES:
            return "coordinate"
        if self.name == TIME:
            return "time"
        return "parameter"

    def __repr__(self):
        return f"Sym({self.name})"


@dataclass(frozen=True, eq=True, repr=False)
class Add(Expr):
    args: tuple

    def children(self):
        return self.args

    def __repr__(self):
        return f"Add{self.args!r}"


@dataclass(frozen=True, eq=True, repr=False)
class Mul(Expr):
    args: tuple

    def children(self):
        return self.args

    def __repr__(self):
        return f"Mul{self.args!r}"


@dataclass(frozen=True, eq=True, repr=False)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Neg({self.arg!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Div(Expr):
    num: Expr
    den: Expr

    def children(self):
        return (self.num, self.den)

    def __repr__(self):
        return f"Div({self.num!r}, {self.den!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Pow(Expr):
    base: Expr
    exp: Fraction

    def __post_init__(self):
        if not isinstance(self.exp, Fraction):
            object.__setattr__(self, "exp", Fraction(self.exp))

    def children(self):
        return (self.base,)

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exp})"


@dataclass(frozen=True, eq=True, repr=False)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in BUILTINS:
            raise ValueError(f"unknown builtin {self.name!r}")

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Func({self.name}, {self.arg!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Quad(Expr):
    """Opaque function ``int(integrand, var, lower, upper)``.

    The value is the integral of ``integrand`` over ``var`` running from
    ``lower`` to ``upper``.  Inside the integrand ``var`` is bound; every
    other symbol is free.
    """

    integrand: Expr
    var: str
    lower: Expr
    upper: Expr
    label: str = field(default="H", compare=False)

    def children(self):
        return (self.integrand, self.lower, self.upper)

    @cached_property
    def symbols(self):
        inner = set(self.integrand.symbols) - {self.var}
        return frozenset(inner | self.lower.symbols | self.upper.symbols)

    def __repr__(self):
        return f"Quad({self.integrand!r}, {self.var}, {self.lower!r}, {self.upper!r})"


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
X = Sym("x")
Y = Sym("y")
T = Sym("t")


def as_expr(value) -> Expr:
    """Coerce ints, Fractions, floats, and strings to an Expr."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not expressions")
    if isinstance(value, (int, Rational)):
        return Const(Fraction(value))
    if isinstance(value, float):
        return Const(Fraction(value))
    if isinstance(value, str):
        from .parser import parse

        return parse(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def const(value) -> Const:
    return Const(Fraction(value))


def exp(e) -> Expr:
    return Func("exp", as_expr(e))


def ln(e) -> Expr:
    return Func("ln", as_expr(e))


def sqrt(e) -> Expr:
    return Func("sqrt", as_expr(e))


def absolute(e) -> Expr:
    return Func("abs", as_expr(e))


def sin(e) -> Expr:
    return Func("sin", as_expr(e))


def cos(e) -> Expr:
    return Func("cos", as_expr(e))


def quad(integrand, var: str, lower, upper=None, label: str = "H") -> Quad:
    upper = Sym(var) if upper is None else as_expr(upper)
    return Quad(as_expr(integrand), var, as_expr(lower), upper, label)


def walk(e: Expr):
    """Pre-order traversal."""
    yield e
    for child in e.children():
        yield from walk(child)


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace free symbols by expressions (simultaneous substitution)."""
    mapping = {k: as_expr(v) for k, v in mapping.items()}
    if not mapping:
        return e
    return _subs(e, mapping)


def _subs(e, mapping):
    if isinstance(e, Sym):
        return mapping.get(e.name, e)
    if isinstance(e, Const):
        return e
    if not (e.symbols & mapping.keys()):
        return e
    if isinstance(e, Add):
        return Add(tuple(_subs(a, mapping) for a in e.args))
    if isinstance(e, Mul):
        return Mul(tuple(_subs(a, mapping) for a in e.args))
    if isinstance(e, Neg):
        return Neg(_subs(e.arg, mapping))
    if isinstance(e, Div):
        return Div(_subs(e.num, mapping), _subs(e.den, mapping))
    if isinstance(e, Pow):
        return Pow(_subs(e.base, mapping), e.exp)
    if isinstance(e, Func):
        return Func(e.name, _subs(e.arg, mapping))
    if isinstance(e, Quad):
        inner = {k: v for k, v in mapping.items() if k != e.var}
        if any(e.var in v.symbols for v in inner.values()):
            raise ValueError(f"substitution would capture the integration variable {e.var!r}")
        integrand = _subs(e.integrand, inner) if inner else e.integrand
        return Quad(integrand, e.var, _subs(e.lower, mapping), _subs(e.upper, mapping), e.label)
    raise TypeError(type(e))
