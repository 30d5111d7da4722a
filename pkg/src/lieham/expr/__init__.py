"""Symbolic expression core."""

from .calculus import DifferentiationError, differentiate, gradient
from .equivalence import EquivalenceReport, Verdict, compare, equivalent, relative_difference
from .evaluate import (
    EvaluationError,
    GuardViolation,
    QuadratureError,
    UnboundSymbolError,
    compile_scalar,
    evaluate,
    evaluate_exact,
    evaluate_many,
)
from .guards import (
    DEFAULT_SEED,
    EmptyRegionError,
    Guard,
    as_guard,
    natural_guards,
    parse_guard,
    rational_points,
    sample_region,
    simplify_guards,
)
from .nodes import (
    ONE,
    ZERO,
    Add,
    Const,
    Div,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Quad,
    Sym,
    T,
    X,
    Y,
    absolute,
    as_expr,
    const,
    cos,
    exp,
    ln,
    quad,
    sin,
    sqrt,
    substitute,
    walk,
)
from .normal import NormalizationError, constant_value, is_zero, normalize, numer_denom, rational_form
from .parser import ParseError, UnknownFunctionError, parse
from .printer import to_text


def E(text_or_value) -> Expr:
    """Parse and normalize."""
    return normalize(as_expr(text_or_value))


__all__ = [name for name in dir() if not name.startswith("_")]
