import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from lieham.expr import (
    Add,
    Const,
    Div,
    E,
    EmptyRegionError,
    Neg,
    ParseError,
    Pow,
    Quad,
    Sym,
    Verdict,
    compare,
    differentiate,
    evaluate,
    is_zero,
    natural_guards,
    normalize,
    parse,
    parse_guard,
    rational_points,
    sample_region,
    simplify_guards,
    to_text,
)


# -- parsing -------------------------------------------------------------------------

def test_parse_difference_of_squares():
    assert parse("x^2 - y^2") == Add((Pow(Sym("x"), Fraction(2)), Neg(Pow(Sym("y"), Fraction(2)))))


def test_parse_area_factor_of_sl2_chart():
    assert parse("1/y^2") == Div(Const(Fraction(1)), Pow(Sym("y"), Fraction(2)))


def test_parse_negative_power():
    e = parse("(1+x^2+y^2)^(-2)")
    assert isinstance(e, Pow) and e.exp == -2


def test_exponent_binds_a_whole_fraction():
    # the exponent grammar reads x^2/3 as x^(2/3); numerators must be parenthesized
    assert parse("x^2/3") == parse("x^(2/3)")
    assert parse("(x^2)/3") != parse("x^(2/3)")


def test_parse_quadrature():
    e = parse("int(exp(-s^2), s, 0, x)")
    assert isinstance(e, Quad) and e.var == "s"


@pytest.mark.parametrize("bad", ["x +", "(x", "foo(x)", "x ^ y", "1/", ""])
def test_parse_errors(bad):
    with pytest.raises((ParseError, ValueError)):
        parse(bad)


# -- calculus ------------------------------------------------------------------------

def test_power_rule():
    assert compare(differentiate(parse("1/y^2"), "y"), parse("-2/y^3")).verdict is Verdict.PROVED_EQUAL


def test_derivative_of_compact_factor():
    d = differentiate(parse("(1+x^2+y^2)^(-2)"), "x")
    assert compare(d, parse("-4*x*(1+x^2+y^2)^(-3)")).verdict is Verdict.PROVED_EQUAL


def test_fundamental_theorem_on_quadrature():
    d = normalize(differentiate(parse("int(exp(-s^2), s, 0, x)"), "x"))
    assert d == normalize(parse("exp(-x^2)"))


# -- normal form ---------------------------------------------------------------------

def test_common_denominator():
    assert to_text(E("x/y + 1/y")) == "(x + 1)/y"


def test_cancellation():
    assert E("(x^2-y^2)/(x-y)") == E("x + y")


def test_atoms_are_not_merged():
    assert to_text(E("exp(x)*exp(x)")) == "exp(x)^2"


def test_zero_detection():
    assert is_zero(E("(x+1)^2 - x^2 - 2*x - 1"))
    assert not is_zero(E("x - y"))


# -- evaluation ----------------------------------------------------------------------

def test_evaluate_points():
    assert evaluate(parse("1/y^2"), {"x": 3, "y": 2}) == pytest.approx(0.25)
    assert evaluate(parse("-1/y"), {"x": 0, "y": 1}) == -1
    assert evaluate(parse("abs(x-y)^(1/2)"), {"x": 2, "y": 1}) == pytest.approx(1.0)


def test_quadrature_value():
    v = evaluate(parse("int(exp(-s^2), s, 0, x)"), {"x": 1.0})
    assert v == pytest.approx(math.sqrt(math.pi) / 2 * math.erf(1.0), rel=1e-10)


# -- equivalence ---------------------------------------------------------------------

def test_ring_identity_is_proved():
    assert compare(parse("x^2-y^2"), parse("(x-y)*(x+y)")).verdict is Verdict.PROVED_EQUAL


def test_constant_shift_is_unequal():
    assert compare(parse("-1/y"), parse("-1/y + 1")).verdict is Verdict.PROVED_UNEQUAL


def test_quadrature_against_closed_form():
    r = compare(parse("int(s^(-2), s, 1, y)"), parse("1 - 1/y"), [parse_guard("y > 0")])
    assert r.verdict is Verdict.NUMERICALLY_EQUAL


# -- guards and sampling -------------------------------------------------------------

def test_natural_guards_of_a_quotient():
    texts = {g.text for g in natural_guards(parse("ln(x)/(x - y)"))}
    assert "x > 0" in texts and "x - y != 0" in texts


def test_constant_guards_are_dropped():
    assert simplify_guards([parse_guard("2 > 0")]) == []
    with pytest.raises(EmptyRegionError):
        simplify_guards([parse_guard("0 != 0")])


def test_sampling_is_seeded_and_respects_guards():
    a = sample_region(["x", "y"], [parse_guard("y > 0"), parse_guard("x - y != 0")], n=50, seed=7)
    b = sample_region(["x", "y"], [parse_guard("y > 0"), parse_guard("x - y != 0")], n=50, seed=7)
    assert (a["y"] > 0).all()
    assert (a["x"] == b["x"]).all()


def test_rational_points_are_exact():
    pts = rational_points(["x", "y"], [parse_guard("y > 0")], n=5)
    assert all(isinstance(p["x"], Fraction) and p["y"] > 0 for p in pts)


# -- properties ----------------------------------------------------------------------

_leaves = st.one_of(
    st.sampled_from(["x", "y"]),
    st.integers(min_value=-5, max_value=5).map(str),
    st.fractions(min_value=-3, max_value=3, max_denominator=4).map(lambda q: f"({q})"),
)


def _compose(children):
    binary = st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda t: f"({t[0]} {t[1]} {t[2]})")
    power = st.tuples(children, st.integers(min_value=0, max_value=3)).map(lambda t: f"({t[0]})^{t[1]}")
    funcs = st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(lambda t: f"{t[0]}({t[1]})")
    return st.one_of(binary, power, funcs)


expressions = st.recursive(_leaves, _compose, max_leaves=8)


@given(expressions)
def test_printing_round_trip_is_idempotent(text):
    once = parse(to_text(parse(text)))
    assert parse(to_text(once)) == once
    assert to_text(once) == to_text(parse(text))


@given(expressions, st.floats(-2, 2), st.floats(-2, 2))
def test_printing_preserves_values(text, x, y):
    e = parse(text)
    try:
        a = evaluate(e, {"x": x, "y": y})
    except (OverflowError, ValueError, ArithmeticError):
        assume(False)
    assume(math.isfinite(a))
    assert evaluate(parse(to_text(e)), {"x": x, "y": y}) == pytest.approx(a, rel=1e-12, abs=1e-12)


@given(expressions, st.floats(-2, 2), st.floats(-2, 2))
def test_normal_form_preserves_values(text, x, y):
    e = parse(text)
    try:
        a = evaluate(e, {"x": x, "y": y})
    except (OverflowError, ValueError, ArithmeticError):
        assume(False)
    assume(math.isfinite(a) and abs(a) < 1e8)
    b = evaluate(normalize(e), {"x": x, "y": y})
    assert b == pytest.approx(a, rel=1e-8, abs=1e-8)


@given(expressions, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_derivative_matches_finite_difference(text, x, y):
    e = parse(text)
    d = differentiate(e, "x")
    h = 1e-6
    try:
        fd = (evaluate(e, {"x": x + h, "y": y}) - evaluate(e, {"x": x - h, "y": y})) / (2 * h)
        exact = evaluate(d, {"x": x, "y": y})
        scale = max(1.0, abs(evaluate(e, {"x": x, "y": y})))
    except (OverflowError, ValueError, ArithmeticError):
        assume(False)
    assume(math.isfinite(exact) and abs(exact) < 1e4 and scale < 1e4)
    assert exact == pytest.approx(fd, rel=1e-4, abs=1e-4 * scale)


@given(expressions, expressions)
def test_equivalence_is_symmetric(a, b):
    va = compare(parse(a), parse(b)).verdict
    vb = compare(parse(b), parse(a)).verdict
    assert va.is_equal == vb.is_equal
