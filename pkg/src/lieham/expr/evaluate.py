"""Numeric evaluation.

``evaluate`` is strict: unbound symbols and domain violations raise.
``evaluate_many`` is vectorized over numpy columns and marks invalid
points with NaN so that samplers can reject them.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import Mapping

import numpy as np
from scipy import integrate

from .nodes import Add, Const, Div, Func, Mul, Neg, Pow, Quad, Sym
from .printer import to_text

QUAD_RTOL = 1e-12
QUAD_MAX_SUBINTERVALS = 2**20


class EvaluationError(ValueError):
    pass


class UnboundSymbolError(EvaluationError):
    pass


class GuardViolation(EvaluationError):
    pass


class QuadratureError(EvaluationError):
    pass


class _Invalid(Exception):
    pass


def _check(ok, strict, message):
    if strict and not np.all(ok):
        raise GuardViolation(message)


def _ev(e, env, strict):
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Sym):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundSymbolError(f"unbound symbol {e.name!r}") from None
    if isinstance(e, Add):
        acc = 0.0
        for a in e.args:
            acc = acc + _ev(a, env, strict)
        return acc
    if isinstance(e, Mul):
        acc = 1.0
        for a in e.args:
            acc = acc * _ev(a, env, strict)
        return acc
    if isinstance(e, Neg):
        return -_ev(e.arg, env, strict)
    if isinstance(e, Div):
        num = _ev(e.num, env, strict)
        den = np.asarray(_ev(e.den, env, strict), dtype=float)
        bad = den == 0
        _check(~bad, strict, f"division by zero in {to_text(e)}")
        out = np.where(bad, np.nan, num / np.where(bad, 1.0, den))
        return float(out) if out.ndim == 0 else out
    if isinstance(e, Pow):
        return _power(_ev(e.base, env, strict), e.exp, strict, e)
    if isinstance(e, Func):
        return _func(e.name, _ev(e.arg, env, strict), strict, e)
    if isinstance(e, Quad):
        return _quadrature(e, env, strict)
    raise TypeError(type(e))


def _power(b, r: Fraction, strict, e):
    p, q = r.numerator, r.denominator
    b = np.asarray(b, dtype=float)
    bad = (b == 0) & (p < 0)
    if q % 2 == 0:
        bad = bad | (b < 0)
    _check(~bad, strict, f"invalid power in {to_text(e)}")
    safe = np.where(bad, 1.0, b)
    if q == 1:
        out = safe**p
    elif q % 2 == 1:
        out = np.sign(safe) ** (p % 2) * np.abs(safe) ** (p / q)
    else:
        out = safe ** (p / q)
    out = np.where(bad, np.nan, out)
    return float(out) if out.ndim == 0 else out


def _func(name, a, strict, e):
    a = np.asarray(a, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if name == "exp":
            out = np.exp(a)
        elif name == "ln":
            bad = a <= 0
            _check(~bad, strict, f"logarithm of a nonpositive value in {to_text(e)}")
            out = np.where(bad, np.nan, np.log(np.where(bad, 1.0, a)))
        elif name == "sqrt":
            bad = a < 0
            _check(~bad, strict, f"square root of a negative value in {to_text(e)}")
            out = np.where(bad, np.nan, np.sqrt(np.where(bad, 0.0, a)))
        elif name == "abs":
            out = np.abs(a)
        elif name == "sin":
            out = np.sin(a)
        elif name == "cos":
            out = np.cos(a)
        else:
            raise TypeError(name)
    if strict and not np.all(np.isfinite(out)):
        raise GuardViolation(f"non-finite value in {to_text(e)}")
    return float(out) if out.ndim == 0 else out


def _quad_scalar(e: Quad, env, strict):
    free = sorted(e.symbols)
    fn = _quad_function(e, tuple(free))
    try:
        return fn(*(float(env[k]) for k in free))
    except KeyError as exc:
        raise UnboundSymbolError(f"unbound symbol {exc.args[0]!r}") from None


_QUAD_CACHE = {}


def _quad_function(e, free):
    key = (e, free)
    fn = _QUAD_CACHE.get(key)
    if fn is None:
        fn = _QUAD_CACHE[key] = _compiled_quad(e, list(free))
    return fn


def _quadrature(e: Quad, env, strict):
    shape = np.broadcast_shapes(*(np.shape(v) for v in env.values())) if env else ()
    if shape == ():
        try:
            return _quad_scalar(e, env, strict)
        except EvaluationError:
            if strict:
                raise
            return np.nan
    out = np.empty(shape)
    cols = {k: np.broadcast_to(v, shape) for k, v in env.items()}
    for idx in np.ndindex(shape):
        point = {k: float(v[idx]) for k, v in cols.items()}
        try:
            out[idx] = _quad_scalar(e, point, strict)
        except EvaluationError:
            if strict:
                raise
            out[idx] = np.nan
    return out


def evaluate(e, bindings: Mapping[str, float]) -> float:
    """Evaluate at one point; raises on unbound symbols and guard violations."""
    env = {k: float(v) for k, v in bindings.items()}
    missing = e.symbols - env.keys()
    if missing:
        raise UnboundSymbolError(f"unbound symbol(s) {sorted(missing)}")
    value = float(_ev(e, env, True))
    if not math.isfinite(value):
        raise GuardViolation(f"non-finite value of {to_text(e)}")
    return value


def evaluate_many(e, columns: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorized evaluation; invalid points come back as NaN."""
    env = {k: np.asarray(v, dtype=float) for k, v in columns.items()}
    missing = e.symbols - env.keys()
    if missing:
        raise UnboundSymbolError(f"unbound symbol(s) {sorted(missing)}")
    shape = np.broadcast_shapes(*(np.shape(v) for v in env.values())) if env else ()
    with np.errstate(all="ignore"):
        out = np.asarray(_ev(e, env, False), dtype=float)
    out = np.broadcast_to(out, shape).copy() if out.shape != shape else out
    out[~np.isfinite(out)] = np.nan
    return out


def evaluate_exact(e, bindings: Mapping[str, Fraction]):
    """Exact rational value, or None when a non-rational operation is met."""
    try:
        return _exact(e, bindings)
    except _Invalid:
        return None


def _exact(e, b):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Sym):
        if e.name not in b:
            raise UnboundSymbolError(f"unbound symbol {e.name!r}")
        return b[e.name]
    if isinstance(e, Add):
        return sum((_exact(a, b) for a in e.args), Fraction(0))
    if isinstance(e, Mul):
        acc = Fraction(1)
        for a in e.args:
            acc *= _exact(a, b)
        return acc
    if isinstance(e, Neg):
        return -_exact(e.arg, b)
    if isinstance(e, Div):
        den = _exact(e.den, b)
        if den == 0:
            raise GuardViolation(f"division by zero in {to_text(e)}")
        return _exact(e.num, b) / den
    if isinstance(e, Pow):
        base = _exact(e.base, b)
        if e.exp.denominator != 1:
            raise _Invalid
        if base == 0 and e.exp < 0:
            raise GuardViolation(f"zero to a negative power in {to_text(e)}")
        return base ** e.exp.numerator
    if isinstance(e, Func) and e.name == "abs":
        return abs(_exact(e.arg, b))
    raise _Invalid


# -- compilation to plain Python for inner loops ----------------------------

def _rpow(b, p, q):
    if q == 1:
        return b**p
    if b < 0:
        if q % 2 == 0:
            raise ValueError("even root of a negative value")
        return (-1.0) ** (p % 2) * (-b) ** (p / q)
    return b ** (p / q)


def _log(a):
    if a <= 0:
        raise ValueError("logarithm of a nonpositive value")
    return math.log(a)


_FN = {"exp": "_m.exp", "ln": "_log", "sqrt": "_m.sqrt", "abs": "abs", "sin": "_m.sin", "cos": "_m.cos"}


def _code(e, names, quads):
    if isinstance(e, Const):
        return repr(float(e.value))
    if isinstance(e, Sym):
        if e.name in names:
            return names[e.name]
        raise UnboundSymbolError(f"unbound symbol {e.name!r}")
    if isinstance(e, Add):
        return "(" + " + ".join(_code(a, names, quads) for a in e.args) + ")"
    if isinstance(e, Mul):
        return "(" + " * ".join(_code(a, names, quads) for a in e.args) + ")"
    if isinstance(e, Neg):
        return f"(-{_code(e.arg, names, quads)})"
    if isinstance(e, Div):
        return f"({_code(e.num, names, quads)} / {_code(e.den, names, quads)})"
    if isinstance(e, Pow):
        return f"_rpow({_code(e.base, names, quads)}, {e.exp.numerator}, {e.exp.denominator})"
    if isinstance(e, Func):
        return f"{_FN[e.name]}({_code(e.arg, names, quads)})"
    if isinstance(e, Quad):
        free = sorted(e.symbols)
        missing = [k for k in free if k not in names]
        if missing:
            raise UnboundSymbolError(f"unbound symbol(s) {missing}")
        quads.append((e, free))
        args = ", ".join(names[k] for k in free)
        return f"_quad[{len(quads) - 1}]({args})"
    raise TypeError(type(e))


def lambdify(exprs, argnames, parameters: Mapping[str, float] | None = None, raw=False):
    """Compile expressions into ``f(*args) -> tuple`` of floats.

    ``argnames`` are positional symbol names; ``parameters`` are frozen in.
    Domain violations raise GuardViolation unless ``raw`` is set, in which
    case the underlying ValueError/ZeroDivisionError propagates.
    """
    params = {k: float(v) for k, v in (parameters or {}).items()}
    names = {k: f"_a{i}" for i, k in enumerate(argnames)}
    for i, k in enumerate(sorted(params)):
        if k not in names:
            names[k] = f"_k{i}"
    quads = []
    bodies = [_code(e, names, quads) for e in exprs]
    quad_fns = [_compiled_quad(q, free) for q, free in quads]
    head = ", ".join(f"_a{i}" for i in range(len(argnames)))
    consts = "".join(f"    {names[k]} = {params[k]!r}\n" for k in sorted(params) if names[k].startswith("_k"))
    tail = "," if len(bodies) == 1 else ""
    src = f"def _f({head}):\n{consts}    return ({', '.join(bodies)}{tail})\n"
    scope = {"_m": math, "_rpow": _rpow, "_log": _log, "_quad": quad_fns}
    exec(compile(src, "<compiled expression>", "exec"), scope)
    fn = scope["_f"]
    if raw:
        fn.source = src
        return fn

    def f(*args):
        try:
            return fn(*args)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            point = ", ".join(f"{k}={v}" for k, v in zip(argnames, args))
            raise GuardViolation(f"evaluation failed at {point}: {exc}") from None

    f.source = src
    return f


def _compiled_quad(e: Quad, free):
    """Scalar function of the free symbols (sorted) computing the integral."""
    integrand = lambdify([e.integrand], [e.var] + [k for k in free if k != e.var], raw=True)
    bounds = lambdify([e.lower, e.upper], free, raw=True)

    def value(*args):
        lo, hi = bounds(*args)
        others = tuple(a for k, a in zip(free, args) if k != e.var)
        return _adaptive(lambda s: integrand(s, *others)[0], lo, hi, e)

    return value


def _adaptive(fn, lo, hi, e):
    if lo == hi:
        return 0.0
    limit = 64
    while True:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", integrate.IntegrationWarning)
            try:
                value, _ = integrate.quad(fn, lo, hi, epsabs=0.0, epsrel=QUAD_RTOL, limit=limit)
            except (ValueError, ZeroDivisionError, OverflowError, EvaluationError) as exc:
                raise QuadratureError(f"integrand not evaluable on the path of {to_text(e)}: {exc}") from None
        messages = [str(w.message) for w in caught if issubclass(w.category, integrate.IntegrationWarning)]
        if not messages:
            return value
        text = " ".join(messages)
        if "subdivisions" in text and limit < QUAD_MAX_SUBINTERVALS:
            limit = min(limit * 32, QUAD_MAX_SUBINTERVALS)
            continue
        if "roundoff" in text or "round-off" in text:
            # the relative target sits below double precision for this integral
            return value
        raise QuadratureError(f"quadrature failed for {to_text(e)}: {text}")


def compile_scalar(exprs, parameters: Mapping[str, float] | None = None):
    """``f(t, x, y) -> tuple`` with parameters frozen in."""
    return lambdify(exprs, ["t", "x", "y"], parameters)
