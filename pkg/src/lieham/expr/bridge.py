"""Conversion to and from sympy, used only for table integration."""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from .nodes import Add, Const, Div, Expr, Func, Mul, Neg, Pow, Quad, Sym


class UnsupportedForm(ValueError):
    pass


_TO = {"exp": sp.exp, "ln": sp.log, "sqrt": sp.sqrt, "abs": sp.Abs, "sin": sp.sin, "cos": sp.cos}


def to_sympy(e: Expr, symbols: dict | None = None):
    symbols = {} if symbols is None else symbols

    def sym(name):
        if name not in symbols:
            symbols[name] = sp.Symbol(name, real=True)
        return symbols[name]

    def go(n):
        if isinstance(n, Const):
            return sp.Rational(n.value.numerator, n.value.denominator)
        if isinstance(n, Sym):
            return sym(n.name)
        if isinstance(n, Add):
            return sp.Add(*(go(a) for a in n.args))
        if isinstance(n, Mul):
            return sp.Mul(*(go(a) for a in n.args))
        if isinstance(n, Neg):
            return -go(n.arg)
        if isinstance(n, Div):
            return go(n.num) / go(n.den)
        if isinstance(n, Pow):
            return go(n.base) ** sp.Rational(n.exp.numerator, n.exp.denominator)
        if isinstance(n, Func):
            return _TO[n.name](go(n.arg))
        if isinstance(n, Quad):
            raise UnsupportedForm("quadrature-defined functions have no sympy image")
        raise TypeError(type(n))

    return go(e)


def from_sympy(s) -> Expr:
    """Inverse of :func:`to_sympy`; logs become ``ln(abs(.))``."""
    if s.is_Integer or s.is_Rational:
        return Const(Fraction(int(s.p), int(s.q)))
    if s.is_Symbol:
        return Sym(s.name)
    if s.is_Add:
        return Add(tuple(from_sympy(a) for a in s.args))
    if s.is_Mul:
        return Mul(tuple(from_sympy(a) for a in s.args))
    if s.is_Pow:
        base, ex = s.args
        if ex.is_Rational:
            return Pow(from_sympy(base), Fraction(int(ex.p), int(ex.q)))
        if base == sp.E:
            return Func("exp", from_sympy(ex))
        raise UnsupportedForm(f"non-rational exponent in {s}")
    if isinstance(s, sp.exp):
        return Func("exp", from_sympy(s.args[0]))
    if isinstance(s, sp.log):
        arg = s.args[0]
        inner = arg.args[0] if isinstance(arg, sp.Abs) else arg
        return Func("ln", Func("abs", from_sympy(inner)))
    if isinstance(s, sp.Abs):
        return Func("abs", from_sympy(s.args[0]))
    if isinstance(s, sp.sin):
        return Func("sin", from_sympy(s.args[0]))
    if isinstance(s, sp.cos):
        return Func("cos", from_sympy(s.args[0]))
    raise UnsupportedForm(f"no expression node for {type(s).__name__}")
