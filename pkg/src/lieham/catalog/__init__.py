"""The classification tables as data, with per-row verification."""

from .core import (
    CatalogEntry,
    HamiltonianData,
    ParameterRangeError,
    UnknownEntryError,
    VerifyReport,
    all_instances,
    catalog_version,
    entry_ids,
    get_entry,
    hamiltonian_instances,
    inclusion_facts,
    list_entries,
    obstructed_instances,
    parse_relation,
    relations_to_constants,
    show,
    verify_entry,
)

__all__ = [name for name in dir() if not name.startswith("_")]
