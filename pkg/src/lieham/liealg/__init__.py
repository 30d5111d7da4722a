"""Lie algebras of planar vector fields."""

from .algebra import (
    CapExceeded,
    CounterexampleWitness,
    DegenerateSamplingError,
    InvariantDistribution,
    ModularGeneratorError,
    ModularPass,
    NotClosed,
    ScanResult,
    VFLieAlgebra,
    algebra_fingerprint,
    check_invariant_distribution,
    expand_in_basis,
    extract_structure_constants,
    generic_scan,
    is_independent,
    lie_closure,
    modular_coefficients,
    modular_divergence_check,
    rank_at,
)
from .structure import AlgebraFingerprint, StructureConstants, fingerprint, invariants

__all__ = [name for name in dir() if not name.startswith("_")]
