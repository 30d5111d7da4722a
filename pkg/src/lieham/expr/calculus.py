"""Exact partial derivatives."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .nodes import ONE, ZERO, Add, Const, Div, Func, Mul, Neg, Pow, Quad, Sym, substitute
from .normal import normalize
from .printer import to_text


class DifferentiationError(ValueError):
    pass


def differentiate(e, var: str):
    """Normalized partial derivative of ``e`` with respect to ``var``."""
    return normalize(_d(e, var))


@lru_cache(maxsize=65536)
def _d(e, v):
    if v not in e.symbols:
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.name == v else ZERO
    if isinstance(e, Add):
        return Add(tuple(_d(a, v) for a in e.args))
    if isinstance(e, Neg):
        return Neg(_d(e.arg, v))
    if isinstance(e, Mul):
        terms = []
        for i, a in enumerate(e.args):
            if v not in a.symbols:
                continue
            rest = e.args[:i] + (_d(a, v),) + e.args[i + 1:]
            terms.append(Mul(rest))
        return Add(tuple(terms)) if terms else ZERO
    if isinstance(e, Div):
        num, den = e.num, e.den
        return Div(Add((Mul((_d(num, v), den)), Neg(Mul((num, _d(den, v)))))), Pow(den, Fraction(2)))
    if isinstance(e, Pow):
        r = e.exp
        return Mul((Const(r), Pow(e.base, r - 1), _d(e.base, v)))
    if isinstance(e, Func):
        u = e.arg
        du = _d(u, v)
        if e.name == "exp":
            return Mul((e, du))
        if e.name == "ln":
            return Div(du, u)
        if e.name == "sqrt":
            return Div(du, Mul((Const(2), e)))
        if e.name == "abs":
            return Mul((Div(e, u), du))
        if e.name == "sin":
            return Mul((Func("cos", u), du))
        if e.name == "cos":
            return Neg(Mul((Func("sin", u), du)))
    if isinstance(e, Quad):
        inner = e.integrand.symbols - {e.var}
        if v in inner or v in e.lower.symbols:
            raise DifferentiationError(
                f"cannot differentiate {to_text(e)} with respect to {v!r}: "
                "only the integration limit may depend on it")
        value_at_upper = substitute(e.integrand, {e.var: e.upper})
        return Mul((value_at_upper, _d(e.upper, v)))
    raise TypeError(type(e))


def gradient(e):
    return differentiate(e, "x"), differentiate(e, "y")
