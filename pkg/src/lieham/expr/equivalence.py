"""Semi-decidable equality of expressions.

The rational layer decides exactly; when normal forms differ the
difference is sampled at seeded guard-respecting points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .evaluate import evaluate_many
from .guards import DEFAULT_SEED, as_guard, natural_guards, sample_region
from .nodes import as_expr
from .normal import is_zero

N_SAMPLES = 200
EQUAL_RTOL = 1e-9
UNEQUAL_RTOL = 1e-6


class Verdict(enum.Enum):
    PROVED_EQUAL = "ProvedEqual"
    NUMERICALLY_EQUAL = "NumericallyEqual"
    PROVED_UNEQUAL = "ProvedUnequal"
    # normal forms differ and samples sit between the two thresholds
    INCONCLUSIVE = "Inconclusive"

    @property
    def is_equal(self) -> bool:
        return self in (Verdict.PROVED_EQUAL, Verdict.NUMERICALLY_EQUAL)

    def __str__(self):
        return self.value


@dataclass
class EquivalenceReport:
    verdict: Verdict
    max_rel_diff: float = 0.0
    samples: int = 0
    witness: dict = field(default_factory=dict)

    @property
    def is_equal(self):
        return self.verdict.is_equal


def relative_difference(a, b):
    """|a - b| / max(|a|, |b|, 1), elementwise."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1.0)
    return np.abs(a - b) / scale


def compare(e1, e2, guards=(), seed=DEFAULT_SEED, box=None, bindings=None, samples=N_SAMPLES,
            symbolic=True) -> EquivalenceReport:
    e1, e2 = as_expr(e1), as_expr(e2)
    if symbolic and is_zero(e1 - e2):
        return EquivalenceReport(Verdict.PROVED_EQUAL)
    guards = [as_guard(g) for g in guards]
    guards += natural_guards(e1) + natural_guards(e2)
    names = e1.symbols | e2.symbols
    pts = sample_region(names, guards, n=samples, seed=seed, box=box, bindings=bindings,
                        extra=(e1, e2))
    a = np.broadcast_to(np.asarray(evaluate_many(e1, pts), dtype=float), (samples,))
    b = np.broadcast_to(np.asarray(evaluate_many(e2, pts), dtype=float), (samples,))
    rel = relative_difference(a, b)
    worst = int(np.argmax(rel))
    witness = {k: float(np.broadcast_to(v, (samples,))[worst]) for k, v in pts.items()}
    m = float(rel[worst])
    if m > UNEQUAL_RTOL:
        verdict = Verdict.PROVED_UNEQUAL
    elif m <= EQUAL_RTOL:
        verdict = Verdict.NUMERICALLY_EQUAL
    else:
        verdict = Verdict.INCONCLUSIVE
    return EquivalenceReport(verdict, m, samples, witness)


def equivalent(e1, e2, guards=(), seed=DEFAULT_SEED, **kwargs) -> Verdict:
    """ProvedEqual, NumericallyEqual, ProvedUnequal or Inconclusive."""
    return compare(e1, e2, guards, seed, **kwargs).verdict
