from .expectations import (
    LambdaCollection,
    SupEstimate,
    expected_sup,
    expected_sup_uniform,
    sup_weighted,
    threshold_family,
)
from .reductions import (
    ReductionReport,
    UniformReport,
    binomial_tail,
    binomial_tail_grid,
    coupled_subsample_gap,
    empirical_frequencies,
    verify_subsampling_chain,
    verify_uniform_conclusion,
)
from .sampling import make_rng, sample_uniform_w_subset, sample_Xp

__all__ = [
    "LambdaCollection",
    "ReductionReport",
    "SupEstimate",
    "UniformReport",
    "binomial_tail",
    "binomial_tail_grid",
    "coupled_subsample_gap",
    "empirical_frequencies",
    "expected_sup",
    "expected_sup_uniform",
    "make_rng",
    "sample_Xp",
    "sample_uniform_w_subset",
    "sup_weighted",
    "threshold_family",
    "verify_subsampling_chain",
    "verify_uniform_conclusion",
]
