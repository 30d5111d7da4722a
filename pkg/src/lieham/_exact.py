"""Exact rational linear algebra on lists of Fractions (thin DomainMatrix wrapper)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

FLOAT_RANK_RTOL = 1e-10


def _q(v):
    if type(v) is not Fraction:
        v = Fraction(v)
    return QQ(v.numerator, v.denominator)


try:
    Fraction(1, 1, _normalize=False)
    _SKIP_GCD = {"_normalize": False}
except TypeError:  # the private flag is gone in newer Pythons
    _SKIP_GCD = {}


def _f(c) -> Fraction:
    # QQ elements are already reduced
    return Fraction(int(c.numerator), int(c.denominator), **_SKIP_GCD)


def matrix(rows) -> DomainMatrix:
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    sparse = {}
    for i, r in enumerate(rows):
        entries = {j: _q(v) for j, v in enumerate(r) if v}
        if entries:
            sparse[i] = entries
    return DomainMatrix(sparse, (len(rows), ncols), QQ)


def _dense(m: DomainMatrix):
    nrows, ncols = m.shape
    out = [[Fraction(0)] * ncols for _ in range(nrows)]
    for i, row in m.to_sdm().items():
        for j, c in row.items():
            out[i][j] = _f(c)
    return out


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return matrix(rows).rank()


def nullspace(rows, ncols=None):
    """Basis of ``{v : rows . v = 0}`` as Fraction vectors."""
    rows = [list(r) for r in rows]
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return _dense(matrix(rows).nullspace())


def rref(rows):
    m, pivots = matrix(rows).rref()
    return _dense(m), list(pivots)


def solve(a_rows, b):
    """One solution of ``A v = b`` or None when inconsistent."""
    n = len(a_rows[0]) if a_rows else 0
    aug = [list(r) + [bi] for r, bi in zip(a_rows, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    v = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        v[p] = row[n]
    return v


def float_rank(m, rtol=FLOAT_RANK_RTOL) -> int:
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))
