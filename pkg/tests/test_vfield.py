from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lieham.expr import E, Verdict, compare, is_zero, parse
from lieham.vfield import (
    PlanarMap,
    PlanarVectorField,
    SingularMapError,
    apply_to,
    combine,
    divergence,
    dx,
    dy,
    identity_map,
    lie_bracket,
    verify_related,
)

F = PlanarVectorField.parse


def same_field(X, Y):
    return is_zero(X.xc - Y.xc) and is_zero(X.yc - Y.yc)


def test_bracket_of_translation_and_dilation():
    assert same_field(lie_bracket(F("1;0"), F("x;y")), F("1;0"))


def test_self_bracket_vanishes():
    X = F("x^2-y^2;2*x*y")
    assert lie_bracket(X, X).is_zero()


def test_buchdahl_bracket():
    X1, X2 = F("y;y^2"), F("0;y")
    assert same_field(lie_bracket(X1, X2), -X1)


def test_divergence():
    assert is_zero(divergence(F("2*x;y")) - E("3"))
    assert is_zero(divergence(F("y;-x")))


def test_apply_to():
    assert is_zero(apply_to(F("x;y"), parse("1/y^2")) - E("-2/y^2"))
    assert is_zero(apply_to(F("x^2;x*y"), parse("1")))
    # X f = -f div X for the I5 integrating factor
    X2 = F("2*x;y")
    assert is_zero(apply_to(X2, parse("y^(-3)")) + E("3*y^(-3)"))


def test_combine_with_coefficients():
    X = combine([Fraction(2), E("a")], [dx(), dy()])
    assert is_zero(X.xc - E("2")) and is_zero(X.yc - E("a"))


def test_identity_jacobian():
    (a, b), (c, d) = identity_map().jacobian()
    assert [str(v) for v in (a, b, c, d)] == ["1", "0", "0", "1"]


def test_jacobian_of_quadratic_map():
    phi = PlanarMap(E("2*(x-y)"), E("2*(x^2-y^2)"))
    (a, b), (c, d) = phi.jacobian()
    assert is_zero(a - E("2")) and is_zero(b + E("2"))
    assert is_zero(c - E("4*x")) and is_zero(d + E("4*y"))


def test_abs_root_map_has_no_x_dependence_in_u():
    phi = PlanarMap(parse("1/abs(y)^(1/2)"), parse("-x/abs(y)^(1/2)"), branch=("y > 0",))
    (a, _), _ = phi.jacobian()
    assert is_zero(a)


def test_singular_map_rejected():
    with pytest.raises(SingularMapError):
        PlanarMap(E("x+y"), E("2*x+2*y"))


def test_quadratic_map_relates_i5_type_fields():
    # u = (x-y)/2, v = (x^2-y^2)/2 with c = -1
    phi = PlanarMap(E("(x-y)/2"), E("(x^2-y^2)/2"), branch=("x - y != 0",))
    r1 = verify_related(phi, F("1;1"), F("0;2*x"))
    r2 = verify_related(phi, F("x^2;y^2"), F("y;3*y^2/(2*x) + 2*x^3"))
    assert r1.is_equal and r2.is_equal


def test_identity_relates_field_to_itself():
    X = F("x*y;1-x^2")
    assert verify_related(identity_map(), X, X).verdict is Verdict.PROVED_EQUAL


def test_root_map_relates_translation():
    phi = PlanarMap(parse("1/(x-y)^(1/2)"), parse("-(x+y)/(2*(x-y)^(1/2))"), branch=("x - y > 0",))
    assert verify_related(phi, F("1;1"), F("0;-x")).is_equal


def test_unrelated_fields_are_reported():
    assert not verify_related(identity_map(), F("1;0"), F("0;1")).is_equal


def test_field_json_round_trip():
    X = F("x^2-y^2;2*x*y", ["y != 0"])
    assert PlanarVectorField.from_json(X.to_json()) == X


# -- properties -------------------------------------------------------------------

_monomial = st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2)).map(
    lambda t: f"({t[0]})*x^{t[1]}*y^{t[2]}")
_poly = st.lists(_monomial, min_size=1, max_size=3).map(" + ".join)
fields = st.tuples(_poly, _poly).map(lambda p: F(f"{p[0]};{p[1]}"))


@given(fields, fields)
def test_bracket_is_antisymmetric(X, Y):
    assert same_field(lie_bracket(X, Y), -lie_bracket(Y, X))


@given(fields, fields, fields)
def test_bracket_satisfies_jacobi(X, Y, Z):
    total = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    assert total.is_zero()


@given(fields, fields, _poly)
def test_bracket_acts_as_commutator(X, Y, h):
    g = parse(h)
    lhs = apply_to(lie_bracket(X, Y), g)
    rhs = apply_to(X, apply_to(Y, g)) - apply_to(Y, apply_to(X, g))
    assert is_zero(lhs - rhs)


def test_relatedness_is_functorial_on_brackets():
    phi = PlanarMap(parse("1/(x-y)^(1/2)"), parse("-(x+y)/(2*(x-y)^(1/2))"), branch=("x - y > 0",))
    X, Y = F("1;1"), F("x;y")
    Xp, Yp = F("0;-x"), F("-x/2;y/2")
    assert verify_related(phi, X, Xp).is_equal
    assert verify_related(phi, Y, Yp).is_equal
    assert verify_related(phi, lie_bracket(X, Y), lie_bracket(Xp, Yp)).is_equal


def test_compare_fields_on_guarded_region():
    r = compare(parse("abs(y)"), parse("y"), ["y > 0"])
    assert r.verdict.is_equal
