"""Abstract structure constants and invariant fingerprints."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .. import _exact

KILLING_ZERO = 1e-9


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class StructureConstants:
    """``c[i][j][k]`` is the coefficient of ``X_k`` in ``[X_i, X_j]``."""

    c: tuple

    @classmethod
    def from_brackets(cls, n: int, brackets: dict):
        """Build from ``{(i, j): {k: coeff}}`` with i < j (0-based)."""
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), row in brackets.items():
            for k, v in row.items():
                c[i][j][k] += Fraction(v)
                c[j][i][k] -= Fraction(v)
        return cls(_freeze(c))

    @classmethod
    def zeros(cls, n: int):
        return cls.from_brackets(n, {})

    @property
    def n(self) -> int:
        return len(self.c)

    def bracket_vectors(self, a, b):
        n = self.n
        out = [Fraction(0)] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if not b[j]:
                    continue
                w = a[i] * b[j]
                cij = self.c[i][j]
                for k in range(n):
                    if cij[k]:
                        out[k] += w * cij[k]
        return out

    def ad(self, i):
        """Matrix of ``ad X_i`` acting on coordinate columns."""
        n = self.n
        return [[self.c[i][j][k] for j in range(n)] for k in range(n)]

    def is_antisymmetric(self) -> bool:
        n = self.n
        return all(self.c[i][j][k] == -self.c[j][i][k] for i, j, k in product(range(n), repeat=3))

    def jacobi_residual(self) -> Fraction:
        """Largest |coefficient| of the Jacobiator over all basis triples."""
        n = self.n
        worst = Fraction(0)
        basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    a, b, d = basis[i], basis[j], basis[k]
                    t1 = self.bracket_vectors(self.bracket_vectors(a, b), d)
                    t2 = self.bracket_vectors(self.bracket_vectors(b, d), a)
                    t3 = self.bracket_vectors(self.bracket_vectors(d, a), b)
                    for s in range(n):
                        worst = max(worst, abs(t1[s] + t2[s] + t3[s]))
        return worst

    def nonzero_brackets(self):
        """``{(i, j): {k: c}}`` for i < j with nonzero brackets."""
        out = {}
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                row = {k: self.c[i][j][k] for k in range(n) if self.c[i][j][k]}
                if row:
                    out[(i, j)] = row
        return out

    def negated(self):
        return StructureConstants(_freeze([[[-v for v in r] for r in m] for m in self.c]))

    def to_json(self):
        return [[[_frac_text(v) for v in r] for r in m] for m in self.c]

    @classmethod
    def from_json(cls, data):
        return cls(_freeze([[[Fraction(v) for v in r] for r in m] for m in data]))

    def relations_text(self, names=None, brackets="[]"):
        names = names or [f"X{i + 1}" for i in range(self.n)]
        lo, hi = brackets
        lines = []
        for (i, j), row in self.nonzero_brackets().items():
            lines.append(f"{lo}{names[i]},{names[j]}{hi} = {_combo_text(row, names)}")
        return lines


def _combo_text(row, names):
    parts = []
    for k, v in sorted(row.items()):
        if v == 1:
            term = names[k]
        elif v == -1:
            term = "-" + names[k]
        else:
            term = f"{_frac_text(v)}*{names[k]}"
        parts.append(term)
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


def _freeze(c):
    return tuple(tuple(tuple(Fraction(v) for v in r) for r in m) for m in c)


# -- subspace operations ------------------------------------------------------

def _span(vectors, n):
    """Row-reduced basis of the span."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    red, pivots = _exact.rref(vectors)
    return [red[i] for i in range(len(pivots))]


def _bracket_span(sc, A, B):
    n = sc.n
    return _span([sc.bracket_vectors(a, b) for a in A for b in B], n)


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def derived_series(sc):
    n = sc.n
    current = _identity(n)
    dims = [n]
    while current:
        nxt = _bracket_span(sc, current, current)
        if len(nxt) == len(current):
            break
        current = nxt
        dims.append(len(current))
    return dims, current


def lower_central_series(sc):
    n = sc.n
    g = _identity(n)
    current = g
    dims = [n]
    while current:
        nxt = _bracket_span(sc, g, current)
        if len(nxt) == len(current):
            break
        current = nxt
        dims.append(len(current))
    return dims


def center(sc):
    """Basis of ``{v : [v, X_j] = 0 for all j}``."""
    n = sc.n
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([sc.c[i][j][k] for i in range(n)])
    return _exact.nullspace(rows, n)


def killing_form(sc):
    """``K(a, b) = tr(ad_a ad_b)``, exact."""
    n = sc.n
    ads = []
    for a in range(n):
        # (ad_a)[k][j] = c[a][j][k]
        ads.append({(k, j): sc.c[a][j][k] for j in range(n) for k in range(n) if sc.c[a][j][k]})
    K = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        A = ads[a]
        for b in range(a, n):
            B = ads[b]
            v = Fraction(0)
            for (i, j), w in A.items():
                u = B.get((j, i))
                if u:
                    v += w * u
            K[a][b] = K[b][a] = v
    return K


def signature(K, zero=KILLING_ZERO):
    if not K:
        return (0, 0, 0)
    m = np.array([[float(v) for v in r] for r in K])
    ev = np.linalg.eigvalsh(m)
    scale = max(1.0, float(np.max(np.abs(m))))
    pos = int(np.sum(ev > zero * scale))
    neg = int(np.sum(ev < -zero * scale))
    return (pos, neg, len(ev) - pos - neg)


def _restrict(K, basis):
    return [[sum((a[i] * K[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if a[i] and b[j]),
                 Fraction(0)) for b in basis] for a in basis]


@dataclass
class AlgebraFingerprint:
    dimension: int
    derived_series: list
    lower_central_series: list
    center_dimension: int
    killing_signature: tuple
    unimodular: bool
    radical_dimension: int
    levi_signature: tuple
    abelian: bool
    nilpotent: bool
    solvable: bool
    semisimple: bool
    name: str = "unrecognized"
    aliases: list = field(default_factory=list)

    @property
    def key(self):
        return invariant_key(self)

    @property
    def names(self):
        return ([self.name] if self.name != "unrecognized" else []) + list(self.aliases)

    def to_json(self):
        return {
            "dimension": self.dimension,
            "derived_series": self.derived_series,
            "lower_central_series": self.lower_central_series,
            "center_dimension": self.center_dimension,
            "killing_signature": list(self.killing_signature),
            "unimodular": self.unimodular,
            "radical_dimension": self.radical_dimension,
            "levi_signature": list(self.levi_signature),
            "abelian": self.abelian,
            "nilpotent": self.nilpotent,
            "solvable": self.solvable,
            "semisimple": self.semisimple,
            "name": self.name,
            "aliases": list(self.aliases),
        }


def invariant_key(fp: AlgebraFingerprint):
    return (fp.dimension, tuple(fp.derived_series), tuple(fp.lower_central_series), fp.center_dimension,
            tuple(fp.killing_signature), fp.unimodular, fp.radical_dimension, tuple(fp.levi_signature))


def invariants(sc: StructureConstants) -> AlgebraFingerprint:
    """Every fingerprint field except the name."""
    n = sc.n
    derived, _ = derived_series(sc)
    lcs = lower_central_series(sc)
    z = len(center(sc)) if n else 0
    K = killing_form(sc)
    sig = signature(K)
    unimodular = all(sum(sc.c[i][j][j] for j in range(n)) == 0 for i in range(n))
    gg = _bracket_span(sc, _identity(n), _identity(n)) if n else []
    if gg:
        # radical = Killing-orthogonal complement of [g, g]
        rows = [[sum(g[i] * K[i][j] for i in range(n)) for j in range(n)] for g in gg]
        rad = len(_exact.nullspace(rows, n))
        levi = signature(_restrict(K, gg))
    else:
        rad = n
        levi = (0, 0, 0)
    solvable = derived[-1] == 0
    nilpotent = lcs[-1] == 0
    abelian = n == 0 or (len(derived) > 1 and derived[1] == 0)
    semisimple = n > 0 and sig[2] == 0
    return AlgebraFingerprint(n, derived, lcs, z, sig, unimodular, rad, levi,
                              abelian, nilpotent, solvable, semisimple)


def fingerprint(sc: StructureConstants) -> AlgebraFingerprint:
    from .references import lookup

    fp = invariants(sc)
    names = lookup(fp.key)
    if names:
        fp.name = names[0]
        fp.aliases = names[1:]
    return fp
