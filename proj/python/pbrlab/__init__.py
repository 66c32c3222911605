"""Finite ontological models and the PBR forbidden-outcome argument."""

from ._pbrlab import (
    Error,
    classical_overlap,
    fermion_check,
    forbidden_table,
    leakage_probability,
    pbr_feasibility,
    pbr_overlap_bound,
    run_scenario,
    run_suite,
    version,
)

__all__ = [
    "Error",
    "classical_overlap",
    "fermion_check",
    "forbidden_table",
    "leakage_probability",
    "pbr_feasibility",
    "pbr_overlap_bound",
    "run_scenario",
    "run_suite",
    "version",
]
__version__ = version()
