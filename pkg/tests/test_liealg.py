from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lieham.expr import E, is_zero
from lieham.liealg import (
    CapExceeded,
    CounterexampleWitness,
    ModularPass,
    NotClosed,
    VFLieAlgebra,
    algebra_fingerprint,
    check_invariant_distribution,
    fingerprint,
    generic_scan,
    lie_closure,
    modular_divergence_check,
    rank_at,
)
from lieham.liealg.structure import StructureConstants
from lieham.vfield import PlanarVectorField

F = PlanarVectorField.parse

P2 = VFLieAlgebra([F("1;0"), F("x;y"), F("x^2-y^2;2*x*y")], generators=(0, 1), guards=("y != 0",))
P3 = VFLieAlgebra([F("y;-x"), F("1+x^2-y^2;2*x*y"), F("2*x*y;1-x^2+y^2")], generators=(0, 1))
I4 = VFLieAlgebra([F("1;1"), F("x;y"), F("x^2;y^2")], generators=(0, 1))
MP = VFLieAlgebra([F("0;-x"), F("-x/2;y/2"), F("y;-1/(4*x^3)")], generators=(0, 2), guards=("x != 0",))


def test_p2_structure_constants():
    sc = P2.structure_constants()
    assert sc.relations_text() == ["[X1,X2] = X1", "[X1,X3] = 2*X2", "[X2,X3] = X3"]


def test_one_field_has_zero_constants():
    sc = VFLieAlgebra([F("1;0")]).structure_constants()
    assert sc == StructureConstants.zeros(1)


def test_mp_structure_constants():
    assert MP.structure_constants().relations_text() == ["[X1,X2] = X1", "[X1,X3] = 2*X2", "[X2,X3] = X3"]


def test_span_that_does_not_close():
    A = VFLieAlgebra([F("1;0"), F("x^2;0")])
    assert isinstance(A.structure_constants(), NotClosed)


def test_closure_exceeds_cap():
    assert isinstance(lie_closure([F("x^2;0"), F("x*y;0"), F("0;y")], cap=10), CapExceeded)


def test_closure_of_one_field():
    A = lie_closure([F("1;0")], cap=1)
    assert A.dim == 1


def test_closure_of_buchdahl_seeds():
    A = lie_closure([F("y;y^2"), F("0;y")], cap=4)
    assert A.dim == 2
    assert "h2" in algebra_fingerprint(A).names


def test_sl2_fingerprint():
    fp = fingerprint(P2.structure_constants())
    assert fp.name == "sl(2)" and fp.semisimple and fp.dimension == 3
    assert tuple(fp.killing_signature) == (2, 1, 0)


def test_abelian_plane():
    fp = fingerprint(StructureConstants.zeros(2))
    assert fp.name == "R^2" and fp.abelian


def test_poincare_two_dimensional():
    fp = algebra_fingerprint(VFLieAlgebra([F("1;0"), F("0;1"), F("x;-y")]))
    assert "iso(1,1)" in fp.names
    assert fp.solvable and list(fp.derived_series)[:2] == [3, 2]


def test_so3():
    assert algebra_fingerprint(P3).names[0] == "so(3)"


def test_rank_on_and_off_the_diagonal():
    assert rank_at(I4, (1, 0)) == 2
    assert rank_at(I4, (1, 1)) == 1
    assert rank_at(P3, (0, 0)) == 2
    assert rank_at(VFLieAlgebra([]), (0.3, 0.4)) == 0


def test_generic_scan_finds_the_diagonal():
    s = generic_scan(I4, grid_size=41)
    assert s.singular
    step = 4 / 40
    # a point is non-generic when its grid neighbourhood meets the rank-one diagonal
    assert all(abs(x - y) <= 2 * step + 1e-9 for x, y in s.singular)
    assert any(abs(x - y) < 1e-9 for x, y in s.singular)


def test_generic_scan_of_translation():
    s = generic_scan(VFLieAlgebra([F("1;0")]), grid_size=11)
    assert not s.singular and (s.ranks == 1).all()


def test_invariant_distribution_of_i4():
    inv = check_invariant_distribution(I4, F("1;0"))
    assert inv.holds
    expected = ["0", "-1", "-2*x"]
    assert all(is_zero(m - E(t)) for m, t in zip(inv.multipliers, expected))


def test_invariant_distribution_of_mp():
    assert check_invariant_distribution(MP, F("1;y/x+1/x^2")).holds


def test_primitive_algebra_has_no_invariant_line_field():
    P1 = VFLieAlgebra([F("1;0"), F("0;1"), F("y;-x")])
    assert not check_invariant_distribution(P1, F("1;0")).holds


def test_modular_check_fails_for_exponential_column():
    I15 = VFLieAlgebra([F("1;0"), F("0;y"), F("0;exp(x)")], generators=(0, 1))
    w = modular_divergence_check(I15)
    assert isinstance(w, CounterexampleWitness) and w.index == 2


def test_modular_check_passes_vacuously():
    assert isinstance(modular_divergence_check(VFLieAlgebra([F("1;0"), F("0;1")], generators=(0, 1))), ModularPass)


def test_modular_coefficients_of_so3():
    r = modular_divergence_check(P3)
    assert isinstance(r, ModularPass)
    ff = r.coefficients[2]
    assert is_zero(ff[0] - E("(x^2+y^2-1)/x")) and is_zero(ff[1] - E("y/x"))


# -- properties -------------------------------------------------------------------

def change_basis(sc: StructureConstants, M):
    """Constants in the basis ``Y_a = sum M[a][i] X_i``."""
    import sympy as sp

    n = sc.n
    Minv = sp.Matrix(M).inv()
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            v = sc.bracket_vectors(M[a], M[b])
            w = sp.Matrix([v]) * Minv
            for k in range(n):
                c[a][b][k] = Fraction(str(w[k]))
    return StructureConstants(tuple(tuple(tuple(r) for r in m) for m in c))


def invertible(n):
    entries = st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)

    def det_nonzero(m):
        import sympy as sp
        return sp.Matrix(m).det() != 0

    return entries.filter(det_nonzero).map(lambda m: [[Fraction(v) for v in r] for r in m])


REFERENCE = {
    "sl(2)": P2,
    "so(3)": P3,
    "iso(1,1)": VFLieAlgebra([F("1;0"), F("0;1"), F("x;-y")]),
}


@pytest.mark.parametrize("label", sorted(REFERENCE))
@given(M=invertible(3))
def test_fingerprint_is_basis_independent(label, M):
    sc = REFERENCE[label].structure_constants()
    assert label in fingerprint(change_basis(sc, M)).names


@given(M=invertible(3))
def test_basis_change_keeps_jacobi(M):
    sc = change_basis(P2.structure_constants(), M)
    assert sc.is_antisymmetric() and sc.jacobi_residual() == 0
