from .engine import (
    FragmentResult,
    build_cover,
    captured_weight,
    check_fragment_properties,
    classify_W,
    feasible_witnesses,
    fragments_for,
    is_feasible,
    is_fragment,
    minimum_fragment,
)
from .ledger import (
    AjSeries,
    CostLedger,
    LedgerBucket,
    aggregate_bad_cost,
    aj_series,
    binomial_step_check,
    binomial_step_grid,
    global_bound,
)
from .profiles import (
    CoordinateCount,
    Profile,
    enumerate_legal_partial_profiles,
    is_legal,
    legal_values,
    members_with_profile,
    partial_profile,
    profile_count_bound,
)
from .weights import (
    DyadicFamily,
    ProcessedFamily,
    WeightReport,
    bucket_floor,
    dyadic_exponent,
    preprocess_weights,
    process_family,
    regularize_profiles,
    scale_cutoff,
)

__all__ = [
    "AjSeries",
    "CoordinateCount",
    "CostLedger",
    "DyadicFamily",
    "FragmentResult",
    "LedgerBucket",
    "ProcessedFamily",
    "Profile",
    "WeightReport",
    "aggregate_bad_cost",
    "aj_series",
    "binomial_step_check",
    "binomial_step_grid",
    "bucket_floor",
    "build_cover",
    "captured_weight",
    "check_fragment_properties",
    "classify_W",
    "dyadic_exponent",
    "enumerate_legal_partial_profiles",
    "feasible_witnesses",
    "fragments_for",
    "global_bound",
    "is_feasible",
    "is_fragment",
    "is_legal",
    "legal_values",
    "members_with_profile",
    "minimum_fragment",
    "partial_profile",
    "preprocess_weights",
    "process_family",
    "profile_count_bound",
    "regularize_profiles",
    "scale_cutoff",
]
