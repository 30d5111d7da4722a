"""Named t-dependent Lie systems, chart maps, integration and transport."""

from .analysis import (
    ConservationReport,
    IntegrationAbort,
    RelatednessError,
    TransportReport,
    conservation_residual,
    minimal_algebra,
    transport_compare,
)
from .integrator import GUARD_EXIT, REACHED, UNDERFLOW, IntegratorStats, Trajectory, integrate_rhs
from .maps import (
    DEFAULTS as MAP_DEFAULTS,
    KINDS as MAP_KINDS,
    UNTESTED_BRANCHES,
    MapConstraintError,
    class_basis,
    identity_map,
    inverse_of,
    related_bases,
    chart_map,
    source_structure,
    verify_map,
)
from .systems import (
    LieHamiltonianStructure,
    MissingStructureError,
    RegimeError,
    TDependentSystem,
    UnknownSystemError,
    custom,
    field_at,
    integrate,
    make_system,
    system_names,
)

__all__ = [name for name in dir() if not name.startswith("_")]
