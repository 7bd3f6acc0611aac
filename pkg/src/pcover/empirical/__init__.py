from .coverage import (
    DEFAULT_EPS,
    Bridge,
    CoverageReport,
    SymmetricSet,
    prepare_bridge,
    symmetric_witness_sets,
    tail_coverage_check,
)
from .discretize import CellPartition, DiscretizationReport, cell_sup, discretization_error_check, discretize, refines
from .instance import FiniteEmpiricalInstance, expected_sup_Z, normalize
from .witness import (
    MarkovReport,
    WitnessEvent,
    containment_violations,
    log_step_check,
    log_step_grid,
    markov_chain_check,
    witness_from_cover_element,
)

__all__ = [
    "DEFAULT_EPS",
    "Bridge",
    "CellPartition",
    "CoverageReport",
    "DiscretizationReport",
    "FiniteEmpiricalInstance",
    "MarkovReport",
    "SymmetricSet",
    "WitnessEvent",
    "cell_sup",
    "containment_violations",
    "discretization_error_check",
    "discretize",
    "expected_sup_Z",
    "log_step_check",
    "log_step_grid",
    "markov_chain_check",
    "normalize",
    "prepare_bridge",
    "refines",
    "symmetric_witness_sets",
    "tail_coverage_check",
    "witness_from_cover_element",
]
