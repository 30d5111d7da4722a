"""Text rendering that the parser reads back.

Fractional constants and exponents are always parenthesized, and a power
is wrapped when it sits left of ``/`` so that ``(x^2)/3`` never reads back
as ``x^(2/3)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .nodes import Add, Const, Div, Func, Mul, Neg, Pow, Quad, Sym, QUAD_NAME

_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5
_TRAILING_INT_EXPONENT = re.compile(r"\^-?\d+$")


def to_text(e) -> str:
    return _render(e)[0]


def _fraction_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _exponent_text(q: Fraction) -> str:
    if q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({_fraction_text(q)})"


def _wrap(item, level):
    text, prec = item
    return f"({text})" if prec < level else text


def _render(e):
    if isinstance(e, Const):
        v = e.value
        if v.denominator == 1:
            return (str(v.numerator), _ATOM) if v >= 0 else (str(v.numerator), _NEG)
        return _fraction_text(v), _MUL
    if isinstance(e, Sym):
        return e.name, _ATOM
    if isinstance(e, Add):
        if not e.args:
            return "0", _ATOM
        parts = []
        for i, arg in enumerate(e.args):
            if isinstance(arg, Neg):
                body = _wrap(_render(arg.arg), _MUL)
                parts.append(f"- {body}" if i else f"-{body}")
            elif isinstance(arg, Const) and arg.value < 0:
                body = _fraction_text(-arg.value)
                parts.append(f"- {body}" if i else f"-{body}")
            else:
                body = _wrap(_render(arg), _ADD + 1) if i else _wrap(_render(arg), _ADD)
                parts.append(f"+ {body}" if i else body)
        return " ".join(parts), _ADD
    if isinstance(e, Mul):
        if not e.args:
            return "1", _ATOM
        parts = []
        for arg in e.args:
            item = _render(arg)
            level = _MUL + 1 if isinstance(arg, (Const, Div, Neg)) else _MUL
            parts.append(_wrap(item, level))
        return "*".join(parts), _MUL
    if isinstance(e, Neg):
        return "-" + _wrap(_render(e.arg), _MUL), _NEG
    if isinstance(e, Div):
        left = _wrap(_render(e.num), _MUL)
        right = _wrap(_render(e.den), _NEG + 1)
        # x^2/3 would read back as x^(2/3)
        if (_TRAILING_INT_EXPONENT.search(left) and right[:1].isdigit()
                or isinstance(e.num, Const) and e.num.value.denominator != 1):
            left = f"({left})"
        return f"{left}/{right}", _MUL
    if isinstance(e, Pow):
        base = _wrap(_render(e.base), _ATOM)
        return f"{base}^{_exponent_text(e.exp)}", _POW
    if isinstance(e, Func):
        inner = _render(e.arg)[0]
        return f"{e.name}({inner})", _ATOM
    if isinstance(e, Quad):
        parts = [to_text(e.integrand), e.var, to_text(e.lower), to_text(e.upper)]
        return f"{QUAD_NAME}({', '.join(parts)})", _ATOM
    raise TypeError(type(e))
