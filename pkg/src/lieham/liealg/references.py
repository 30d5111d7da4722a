"""Reference algebras for the fingerprint name lookup.

Each reference is built abstractly (explicit brackets, or a Lie algebra of
matrices, with semidirect products realized as affine matrices) and filed
under its invariant key.  Lookup returns every name filed under a key, in
registration order, so the first name is the preferred one.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from .. import _exact
from .structure import StructureConstants, invariants

F = Fraction
HALF = F(1, 2)


def R(m: int) -> str:
    return "R" if m == 1 else f"R^{m}"


def brackets(n, rel):
    return StructureConstants.from_brackets(n, {(i - 1, j - 1): {k - 1: v for k, v in row.items()}
                                                for (i, j), row in rel.items()})


def abelian(n):
    return StructureConstants.zeros(n)


def direct_sum(a: StructureConstants, b: StructureConstants) -> StructureConstants:
    n = a.n + b.n
    rel = {}
    for (i, j), row in a.nonzero_brackets().items():
        rel[(i, j)] = dict(row)
    for (i, j), row in b.nonzero_brackets().items():
        rel[(i + a.n, j + a.n)] = {k + a.n: v for k, v in row.items()}
    return StructureConstants.from_brackets(n, rel)


def _commutator(a, b):
    A, B = _exact.matrix(a), _exact.matrix(b)
    return _exact._dense(A * B - B * A)


def matrix_algebra(mats) -> StructureConstants:
    """Structure constants of the span of ``mats`` under the commutator."""
    mats = [[[F(v) for v in row] for row in m] for m in mats]
    flat = [[v for row in m for v in row] for m in mats]
    if _exact.rank(flat) != len(mats):
        raise ValueError("matrices are linearly dependent")
    cols = [list(col) for col in zip(*flat)]
    rel = {}
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            target = [v for row in _commutator(mats[i], mats[j]) for v in row]
            if not any(target):
                continue
            coeffs = _exact.solve(cols, target)
            if coeffs is None:
                raise ValueError("matrices do not close under the commutator")
            rel[(i, j)] = {k: c for k, c in enumerate(coeffs) if c}
    return StructureConstants.from_brackets(len(mats), rel)


def _zeros(n):
    return [[F(0)] * n for _ in range(n)]


def affine(reps, m: int) -> StructureConstants:
    """``h ⋉ R^m`` where ``reps`` are the matrices of a representation of ``h``."""
    size = m + 1
    mats = []
    for A in reps:
        M = _zeros(size)
        for i in range(m):
            for j in range(m):
                M[i][j] = F(A[i][j])
        mats.append(M)
    for i in range(m):
        M = _zeros(size)
        M[i][m] = F(1)
        mats.append(M)
    return matrix_algebra(mats)


def diag(*vals):
    n = len(vals)
    return [[F(vals[i]) if i == j else F(0) for j in range(n)] for i in range(n)]


def eye(n):
    return diag(*([1] * n))


def block(*blocks):
    n = sum(len(b) for b in blocks)
    M = _zeros(n)
    o = 0
    for b in blocks:
        for i in range(len(b)):
            for j in range(len(b)):
                M[o + i][o + j] = F(b[i][j])
        o += len(b)
    return M


def poly_ops(r: int):
    """``d/ds``, ``s d/ds`` and ``s^2 d/ds`` on polynomials of degree <= r."""
    n = r + 1

    def op(shift, weight):
        M = _zeros(n)
        for k in range(n):
            tgt = k + shift
            if 0 <= tgt < n and weight(k):
                M[tgt][k] = F(weight(k))
        return M

    return op(-1, lambda k: k), op(0, lambda k: k), op(1, lambda k: k)


# -- the named algebras -------------------------------------------------------

def h2():
    return brackets(2, {(1, 2): {2: 1}})


def sl2():
    return brackets(3, {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}})


def so3():
    return brackets(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {2: -1}})


def so31():
    eta = [1, 1, 1, -1]
    mats = []
    for i in range(4):
        for j in range(i + 1, 4):
            M = _zeros(4)
            # A with A^T eta + eta A = 0
            M[i][j] = F(1)
            M[j][i] = F(-eta[i] * eta[j])
            mats.append(M)
    return matrix_algebra(mats)


def sl3():
    mats = []
    for i in range(3):
        for j in range(3):
            if i != j:
                M = _zeros(3)
                M[i][j] = F(1)
                mats.append(M)
    mats.append(diag(1, -1, 0))
    mats.append(diag(0, 1, -1))
    return matrix_algebra(mats)


def h4():
    # N, A+, A-, I
    return brackets(4, {(1, 2): {2: 1}, (1, 3): {3: -1}, (3, 2): {4: 1}})


def iso2_bar():
    # J, P1, P2, I
    return brackets(4, {(1, 2): {3: 1}, (1, 3): {2: -1}, (2, 3): {4: 1}})


def h6():
    # h, e, f, q, p, I
    return brackets(6, {
        (1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1},
        (1, 4): {4: 1}, (1, 5): {5: -1}, (2, 5): {4: 1}, (3, 4): {5: 1},
        (4, 5): {6: 1},
    })


_ROT = [[0, -1], [1, 0]]


def _rot(a):
    return [[F(a), F(-1)], [F(1), F(a)]]


def _jordan(lam, size=2):
    M = diag(*([lam] * size))
    for i in range(size - 1):
        M[i][i + 1] = F(1)
    return M


_GRID = (F(-2), F(-1), -HALF, F(0), HALF, F(1), F(2))


def _one_matrix_family(m):
    """Matrices for ``R ⋉ R^m`` (up to scaling, so one eigenvalue is 1)."""
    out = []
    if m == 1:
        return [diag(1)]
    for rest in combinations_with_replacement(_GRID if m <= 3 else (F(0), F(1), F(-1), F(2)), m - 1):
        out.append(diag(1, *rest))
    out.append(diag(*([0] * (m - 1)), 1))
    for a in (F(0), HALF, F(1), F(2)):
        if m == 2:
            out.append(_rot(a))
        else:
            for rest in combinations_with_replacement((F(0), F(1), F(-1)), m - 2):
                out.append(block(_rot(a), diag(*rest)))
    for lam in (F(0), F(1)):
        if m == 2:
            out.append(_jordan(lam))
        else:
            for rest in combinations_with_replacement((F(0), F(1), F(-1), F(2)), m - 2):
                if lam == 0 and not any(rest):
                    continue
                out.append(block(_jordan(lam), diag(*rest)))
    return out


def _pair_family(m):
    """Commuting pairs for ``R^2 ⋉ R^m``."""
    out = []
    vals = (F(-1), F(0), F(1), F(2))
    for a in combinations_with_replacement(vals, m):
        for b in combinations_with_replacement(vals, m):
            A, B = diag(*a), diag(*b)
            if _exact.rank([a, b]) == 2:
                out.append((A, B))
    if m == 2:
        out.append((eye(2), [[F(v) for v in r] for r in _ROT]))
        out.append((eye(2), _jordan(F(0))))
    if m > 1:
        d, _, _ = poly_ops(m - 1)
        out.append((d, eye(m)))
    return out


def _register_all():
    table = {}
    order = []

    def add(names, sc):
        try:
            fp = invariants(sc)
        except Exception:  # noqa: BLE001 - a malformed reference is skipped
            return
        if sc.jacobi_residual() != 0:
            return
        key = fp.key
        if key not in table:
            table[key] = []
            order.append(key)
        for name in names:
            if name not in table[key]:
                table[key].append(name)

    add(["R"], abelian(1))
    add(["h2", "R⋉R"], h2())
    add(["sl(2)"], sl2())
    add(["so(3)"], so3())
    add(["iso(2)", "A_0"], affine([_ROT], 2))
    add(["iso(1,1)", "B_-1"], affine([diag(1, -1)], 2))
    add(["gl(2)", "sl(2)⊕R"], direct_sum(sl2(), abelian(1)))
    add(["h4", "iso(1,1)-bar"], h4())
    add(["iso(2)-bar"], iso2_bar())
    add(["h6", "(sl(2)⋉R^2)-bar"], h6())
    add(["so(3,1)"], so31())
    add(["sl(3)"], sl3())
    add(["h2⊕h2"], direct_sum(h2(), h2()))
    add(["sl(2)⊕h2"], direct_sum(sl2(), h2()))
    add(["sl(2)⊕sl(2)"], direct_sum(sl2(), sl2()))
    add(["so(3)⊕R"], direct_sum(so3(), abelian(1)))
    add(["h2⊕R", "R^2⋉R"], direct_sum(h2(), abelian(1)))
    add(["sl(2)⊕R^2", "gl(2)⊕R"], direct_sum(sl2(), abelian(2)))
    add(["R^2⋉R^2"], affine([eye(2), [[F(v) for v in r] for r in _ROT]], 2))
    add(["sl(2)⋉R^2"], affine(_sl2_rep(1), 2))
    for n in range(2, 10):
        add([R(n)], abelian(n))

    for m in range(1, 5):
        for A in _one_matrix_family(m):
            add([f"R⋉{R(m)}"], affine([A], m))
    for m in range(1, 4):
        for A, B in _pair_family(m):
            add([f"R^2⋉{R(m)}"], affine([A, B], m))
    for r in range(1, 4):
        m = r + 1
        d, s, q = poly_ops(r)
        for c in _GRID:
            a = [[-s[i][j] - (c if i == j else 0) for j in range(m)] for i in range(m)]
            add([f"h2⋉{R(m)}", f"C^{r}"], affine([a, d], m))
        sl_ops = _sl2_rep(r)
        add([f"sl(2)⋉{R(m)}"], affine(sl_ops, m))
        add([f"gl(2)⋉{R(m)}"], affine(sl_ops + [eye(m)], m))
        add([f"(h2⊕R)⋉{R(m)}"], affine([d, s, eye(m)], m))
        add([f"R⋉(R⋉{R(r)})"], _i17_type(r))
    return table


def _sl2_rep(r):
    """``d/ds``, ``2 s d/ds - r`` and ``s^2 d/ds - r s`` on degree <= r."""
    d, s, q = poly_ops(r)
    m = r + 1
    h = [[2 * s[i][j] - (r if i == j else 0) for j in range(m)] for i in range(m)]
    f = _zeros(m)
    for k in range(m):
        # s^2 d/ds - r s maps s^k to (k - r) s^(k+1)
        if k + 1 < m:
            f[k + 1][k] = F(k - r)
    return [d, h, f]


def _i17_type(r):
    """``R ⋉ (R ⋉ R^r)``: a derivation D acting on ``R ⋉ R^r``.

    Inner algebra: e0 acting on f_0..f_(r-1) by ``[e0, f_k] = k f_(k-1)``.
    ``[e0, D] = e0 + r f_(r-1)`` and ``[f_k, D] = (r - k) f_k``.
    """
    n = r + 2
    e0, D = 0, r + 1

    def fk(k):
        return 1 + k

    rel = {}
    for k in range(1, r):
        rel[(e0, fk(k))] = {fk(k - 1): F(k)}
    rel[(e0, D)] = {e0: F(1)}
    rel[(e0, D)][fk(r - 1)] = rel[(e0, D)].get(fk(r - 1), F(0)) + r
    for k in range(r):
        if r - k:
            rel[(fk(k), D)] = {fk(k): F(r - k)}
    return StructureConstants.from_brackets(n, rel)


@lru_cache(maxsize=1)
def reference_table():
    return _register_all()


def lookup(key) -> list:
    return list(reference_table().get(key, []))


def names_for(sc: StructureConstants) -> list:
    return lookup(invariants(sc).key)
