import math
import re

import numpy as np
import pytest

from lieham.dynamics import (
    GUARD_EXIT,
    REACHED,
    UNDERFLOW,
    MapConstraintError,
    MissingStructureError,
    RegimeError,
    RelatednessError,
    UnknownSystemError,
    chart_map,
    conservation_residual,
    field_at,
    identity_map,
    integrate,
    integrate_rhs,
    inverse_of,
    make_system,
    minimal_algebra,
    transport_compare,
    verify_map,
)
from lieham.dynamics.maps import KINDS
from lieham.expr import E, evaluate, is_zero, parse, sample_region
from lieham.liealg import CapExceeded, algebra_fingerprint
from lieham.symplectic import poisson_bracket_at


def oscillator(t, z):
    return np.array([z[1], -z[0]])


# -- integrator ------------------------------------------------------------------------

def test_oscillator_accuracy():
    tr = integrate_rhs(oscillator, [1.0, 0.0], 0.0, 2 * math.pi, rtol=1e-10, atol=1e-12)
    assert tr.termination == REACHED
    assert abs(tr.x[-1] - 1.0) < 1e-8 and abs(tr.y[-1]) < 1e-8


def test_fixed_step_order_floor():
    errs = []
    for h in (0.2, 0.1):
        tr = integrate_rhs(oscillator, [1.0, 0.0], 0.0, 4.0, fixed_step=h)
        errs.append(math.hypot(tr.x[-1] - math.cos(4.0), tr.y[-1] + math.sin(4.0)))
    assert errs[0] / errs[1] >= 2 ** 4 * 0.8


def test_forward_backward_symmetry():
    rtol = 1e-10
    fwd = integrate_rhs(oscillator, [1.0, 0.5], 0.0, 5.0, rtol=rtol, atol=1e-13)
    back = integrate_rhs(oscillator, list(fwd.final_state), 5.0, 0.0, rtol=rtol, atol=1e-13)
    assert math.hypot(back.x[-1] - 1.0, back.y[-1] - 0.5) < 10 * rtol


def test_requested_samples_are_honoured():
    times = np.linspace(0, 1, 11)
    tr = integrate_rhs(oscillator, [1.0, 0.0], 0.0, 1.0, samples=times)
    assert np.allclose(tr.t, times)
    assert np.allclose(tr.x, np.cos(times), atol=1e-8)


def test_dense_output_interpolates():
    tr = integrate_rhs(oscillator, [1.0, 0.0], 0.0, 3.0, rtol=1e-10)
    x, y = tr.state_at(1.2345)
    assert x == pytest.approx(math.cos(1.2345), abs=1e-8)


def test_guard_exit_stops_at_boundary():
    from lieham.dynamics.integrator import Guard

    tr = integrate_rhs(oscillator, [1.0, 0.0], 0.0, 5.0, guards=[Guard("x > 0", lambda t, z: z[0], True)])
    assert tr.termination == GUARD_EXIT
    assert tr.t_end == pytest.approx(math.pi / 2, abs=1e-8)


def test_blow_up_underflows():
    tr = integrate_rhs(lambda t, z: np.array([z[0] ** 2, 0.0]), [1.0, 0.0], 0.0, 2.0)
    assert tr.termination in (UNDERFLOW, GUARD_EXIT) or not tr.completed
    assert tr.t_end < 1.0 + 1e-6


# -- systems ---------------------------------------------------------------------------

def test_riccati_field_at_time():
    S = make_system("riccati", coefficients={"a0": 1, "a1": 0, "a2": 1})
    X = field_at(S, 0.7)
    assert is_zero(X.xc - E("1 + x^2 - y^2")) and is_zero(X.yc - E("2*x*y"))


def test_zero_coefficients_give_zero_field():
    S = make_system("riccati", coefficients={"a0": 0, "a1": 0, "a2": 0})
    assert field_at(S, 1.0).is_zero()


def test_ks_field_at_origin_of_time():
    S = make_system("kummer-schwarz", {"c": -1}, {"b1": "sin(t)"})
    assert field_at(S, 0.0) == S.fields[2]


def test_mp_structure():
    S = make_system("milne-pinney", {"c": 1})
    st = S.structure
    assert is_zero(st.omega.f - E("1"))
    assert is_zero(st.functions[0] - E("(x^2)/2"))
    assert is_zero(st.functions[2] - E("(y^2)/2 + 1/(2*x^2)"))
    assert all(r.is_equal for r in st.check(S.fields))


def test_viral_structure():
    S = make_system("viral", {"delta": 1})
    st = S.structure
    assert is_zero(st.omega.f - E("1/(x*y)"))
    assert st.extension
    assert [str(h) for h in st.functions][2] == str(E("-x"))


def test_slv3_structure():
    st = make_system("slv3", {"b": 3}).structure
    expected = ["-x/y^3", "-1/(2*y^2)", "-1/y"]
    assert all(is_zero(h - E(t)) for h, t in zip(st.functions, expected))
    assert st.relations == ["{h1,h2} = 2*h2", "{h1,h3} = h3"]


def test_unknown_system():
    with pytest.raises(UnknownSystemError):
        make_system("duffing")


def test_degenerate_lv_has_no_structure():
    S = make_system("lotka-volterra", {"a": 1, "b": 1})
    assert S.structure is None
    with pytest.raises(MissingStructureError):
        S.hamiltonian()


def _bracket_error(S, structure, n=30):
    st = structure
    pts = sample_region(["x", "y"], list(st.omega.guards) + list(S.guards), n=n, seed=11, margin=0.05)
    worst = 0.0
    for rel in st.relations:
        lhs, rhs = rel.split("=")
        i, j = map(int, re.findall(r"h(\d)", lhs))
        for x, y in zip(pts["x"], pts["y"]):
            env = {f"h{k + 1}": evaluate(h, {"x": x, "y": y}) for k, h in enumerate(st.functions)}
            env["h0"] = 1.0
            val = poisson_bracket_at(st.functions[i - 1], st.functions[j - 1], st.omega, x, y)
            ref = eval(rhs.replace("^", "**"), {}, env)
            worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
    return worst


SHIPPED = [
    ("buchdahl", {}),
    ("lotka-volterra", {"a": 2, "b": 3}),
    ("lotka-volterra", {"a": 1, "b": 3}),
    ("lotka-volterra", {"a": 3, "b": 1}),
    ("lotka-volterra", {"a": "1/2", "b": "5/2"}),
    ("slv3", {"b": 1}),
    ("slv3", {"b": 2}),
    ("slv3", {"b": 3}),
    ("slv3", {"b": "1/2"}),
    ("viral", {"delta": 1}),
    ("milne-pinney", {"c": 1}),
    ("milne-pinney", {"c": "-1/4"}),
    ("kummer-schwarz", {"c": -1}),
    ("riccati", {}),
]


@pytest.mark.parametrize("name,params", SHIPPED)
def test_shipped_structures_verify(name, params):
    S = make_system(name, params)
    for st in S.structures.values():
        assert all(r.is_equal for r in st.check(S.fields))
        assert _bracket_error(S, st) < 1e-6


# -- maps ------------------------------------------------------------------------------

def test_root_map_formula():
    phi = chart_map("mpFromI4", {"c": "-1/4", "lambda": 1, "branch": "x>y"})
    assert is_zero(phi.u - parse("1/(x-y)^(1/2)"))
    assert is_zero(phi.v - parse("-(x+y)/(2*(x-y)^(1/2))"))


def test_square_map_formula():
    phi = chart_map("ksFromI5", {"lambda": 1})
    assert is_zero(phi.u - E("y^2")) and is_zero(phi.v - E("2*x*y^2"))


def test_riccati_map_formula():
    phi = chart_map("riccatiToMp", {"c": 1, "lambda": 1, "branch": "y>0"})
    assert is_zero(phi.u - parse("y^(-1/2)")) and is_zero(phi.v - parse("-x*y^(-1/2)"))


def test_map_constraint_violation():
    with pytest.raises(MapConstraintError):
        chart_map("mpFromI4", {"c": 1})
    with pytest.raises(MapConstraintError):
        chart_map("riccatiToMp", {"c": 1, "lambda": 2})


@pytest.mark.parametrize("kind", KINDS)
def test_maps_relate_paired_bases(kind):
    _, reports = verify_map(kind)
    assert all(r.is_equal for r in reports)


@pytest.mark.parametrize("kind", KINDS)
def test_attached_inverse_is_an_inverse(kind):
    phi = chart_map(kind)
    assert phi.check_inverse().is_equal
    assert inverse_of(phi).check_inverse().is_equal


# -- transport and conservation --------------------------------------------------------

def test_identity_transport_is_exact():
    S = make_system("milne-pinney", {"c": 1}, {"w2": "sin(t)"})
    rep = transport_compare(S, identity_map(), S, (1.0, 0.3), 0.0, 2.0)
    assert rep.max_deviation < 1e-10


def test_transport_rejects_unrelated_systems():
    S = make_system("milne-pinney", {"c": 1})
    T = make_system("riccati")
    with pytest.raises(RelatednessError):
        transport_compare(S, identity_map(), T, (1.0, 0.3), 0.0, 1.0)


def test_ks_to_mp_transport_before_blow_up():
    # the KS solution from (1, 0.3) blows up just after t = 0.828
    src = make_system("kummer-schwarz", {"c": -1}, {"b1": "sin(t)"})
    tgt = make_system("milne-pinney", {"c": "-1/4"}, {"w2": "sin(t)"})
    rep = transport_compare(src, chart_map("ksToMp"), tgt, (1.0, 0.3), 0.0, 0.8)
    assert rep.max_deviation < 1e-5


def test_riccati_to_mp_transport():
    src = make_system("riccati", coefficients={"a0": 1, "a1": "sin(t)", "a2": "cos(t)"})
    tgt = make_system("milne-pinney", {"c": 1}, {"w2": 1, "b2": "sin(t)", "b3": "cos(t)"})
    rep = transport_compare(src, chart_map("riccatiToMp"), tgt, (1.0, 0.3), 0.0, 2.0)
    assert rep.max_deviation < 1e-5


def test_autonomous_drift():
    S = make_system("milne-pinney", {"c": 1}, {"w2": 1})
    tr = integrate(S, (1.0, 0.5), 0.0, 10.0, rtol=1e-10, atol=1e-12)
    assert conservation_residual(tr, S).drift < 1e-8


def test_constant_hamiltonian_has_zero_residual():
    S = make_system("riccati", coefficients={"a0": 0, "a1": 0, "a2": 0})
    tr = integrate(S, (0.2, 1.0), 0.0, 1.0)
    rep = conservation_residual(tr, S)
    assert rep.max_abs_residual == 0.0 and np.allclose(tr.x, 0.2)


def test_nonautonomous_residual():
    S = make_system("riccati", coefficients={"a0": 1, "a1": "sin(t)", "a2": "cos(t)"})
    tr = integrate(S, (1.0, 0.3), 0.0, 2.0, rtol=1e-9)
    assert conservation_residual(tr, S).max_abs_residual < 1e-5


def test_midpoint_rule_is_available():
    S = make_system("riccati", coefficients={"a0": 1, "a1": "sin(t)", "a2": "cos(t)"})
    tr = integrate(S, (1.0, 0.3), 0.0, 2.0, rtol=1e-9)
    assert conservation_residual(tr, S, rule="midpoint").max_abs_residual < 1e-2


def test_riccati_fixed_point():
    S = make_system("riccati", coefficients={"a0": 1, "a1": 0, "a2": 1})
    tr = integrate(S, (0.0, 1.0), 0.0, 5.0)
    assert np.allclose(tr.x, 0.0, atol=1e-12) and np.allclose(tr.y, 1.0, atol=1e-12)


# -- minimal algebras ------------------------------------------------------------------

def test_slv_is_not_a_lie_system():
    assert isinstance(minimal_algebra(make_system("slv"), np.linspace(0.1, 2, 12), cap=10), CapExceeded)


def test_mp_minimal_algebra_is_sl2():
    S = make_system("milne-pinney", {"c": 1}, {"w2": "sin(t)"})
    A = minimal_algebra(S, [0, math.pi / 6, math.pi / 3, 1.0])
    assert A.dim == 3 and "sl(2)" in algebra_fingerprint(A).names


def test_constant_coefficients_give_one_field():
    S = make_system("milne-pinney", {"c": 1}, {"w2": 1, "b2": 0, "b3": 1})
    assert minimal_algebra(S, [0.0, 0.5, 1.0, 1.5]).dim == 1


def test_degenerate_lv_rank_one():
    from lieham.liealg import rank_at

    S = make_system("lotka-volterra", {"a": 1, "b": 1})
    assert rank_at(S.basis, (0.7, 1.3)) == 1
    assert rank_at(S.basis, (2.0, 0.5)) == 1


def test_regime_error_for_bad_parameters():
    with pytest.raises((RegimeError, ValueError)):
        make_system("lotka-volterra", {"a": 0, "b": 0})
