from .expoly import ExpPolynomial, e_bounds
from .family import (
    MultisetFamily,
    MultisetMember,
    expected_sup_multiset,
    sup_lambda,
    threshold_multiset_family,
)
from .fragments import (
    DyadicMultisetFamily,
    MultiFragmentResult,
    ProcessedMultisetFamily,
    build_cover_multi,
    check_multi_fragment_properties,
    classify_multi,
    feasible_witnesses_multi,
    fragments_for_multi,
    is_feasible_multi,
    is_fragment_multi,
    minimum_fragment_multi,
    process_multiset_family,
)
from .law import MultisetDistribution, multiset_prob, sample_counts, sample_multiset
from .ledger import (
    MultisetLedger,
    TailReport,
    aggregate_bad_cost_multi,
    binomial_factor_check,
    factorial_ratio_check,
    global_bound_multi,
    verify_tail_conclusion,
)
from .multiset import (
    Multiset,
    count_multisets,
    enumerate_multisets,
    mset_diff,
    mset_intersect,
    mset_subset,
    mset_sum,
    mset_union,
)
from .poisson import (
    is_pruned,
    log_poissonized_cost,
    min_multiset_cover_cost_exact,
    multiset_covers,
    poissonized_cost,
    poissonized_cover_cost,
    prune_cover,
    prune_cover_family,
    stirling_lower_bound,
)

__all__ = [
    "DyadicMultisetFamily",
    "ExpPolynomial",
    "MultiFragmentResult",
    "Multiset",
    "MultisetDistribution",
    "MultisetFamily",
    "MultisetLedger",
    "MultisetMember",
    "ProcessedMultisetFamily",
    "TailReport",
    "aggregate_bad_cost_multi",
    "binomial_factor_check",
    "build_cover_multi",
    "check_multi_fragment_properties",
    "classify_multi",
    "count_multisets",
    "e_bounds",
    "enumerate_multisets",
    "expected_sup_multiset",
    "factorial_ratio_check",
    "feasible_witnesses_multi",
    "fragments_for_multi",
    "global_bound_multi",
    "is_feasible_multi",
    "is_fragment_multi",
    "is_pruned",
    "log_poissonized_cost",
    "min_multiset_cover_cost_exact",
    "minimum_fragment_multi",
    "mset_diff",
    "mset_intersect",
    "mset_subset",
    "mset_sum",
    "mset_union",
    "multiset_covers",
    "multiset_prob",
    "poissonized_cost",
    "poissonized_cover_cost",
    "process_multiset_family",
    "prune_cover",
    "prune_cover_family",
    "sample_counts",
    "sample_multiset",
    "stirling_lower_bound",
    "sup_lambda",
    "threshold_multiset_family",
    "verify_tail_conclusion",
]
