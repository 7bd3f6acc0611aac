import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcover.data.generators import WEIGHT_GRID, anchored_weights
from pcover.family import GroundSet, WeightedFamily, covers
from pcover.fragments import (
    aggregate_bad_cost,
    aj_series,
    binomial_step_check,
    binomial_step_grid,
    bucket_floor,
    build_cover,
    check_fragment_properties,
    classify_W,
    dyadic_exponent,
    enumerate_legal_partial_profiles,
    feasible_witnesses,
    fragments_for,
    global_bound,
    is_feasible,
    is_fragment,
    is_legal,
    legal_values,
    minimum_fragment,
    preprocess_weights,
    process_family,
    profile_count_bound,
    scale_cutoff,
)
from pcover.utils.errors import ParameterError, ProfileMismatchError

WEIGHTS = st.sampled_from(WEIGHT_GRID)

# weights 1, 1/100 and 1/10^4 land in buckets 0, 1 and 2
DEEP = WeightedFamily.from_sets(6, [[0, 1, 2]], Fraction(1, 4), [{0: 1, 1: Fraction(1, 100), 2: Fraction(1, 10**4)}])


def _anchored_family(draw, n, sets):
    members = [sorted(s) for s in sets]
    weights = [anchored_weights(elems, [draw(WEIGHTS) for _ in elems]) for elems in members]
    return WeightedFamily.from_sets(n, members, Fraction(1, 4), weights)


@st.composite
def weighted_families(draw, max_n=5, max_members=3):
    n = draw(st.integers(1, max_n))
    sets = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=max_members))
    return _anchored_family(draw, n, sets)


@st.composite
def sparse_families(draw):
    """At least 100 elements, so tau = 3, with members of at most four elements."""
    n = draw(st.integers(100, 160))
    sets = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=4), min_size=1, max_size=3))
    return _anchored_family(draw, n, sets)


def all_subsets(n):
    ground = GroundSet(n)
    return list(ground.all_subsets())


def test_dyadic_grid():
    assert dyadic_exponent(Fraction(1)) == 0
    assert dyadic_exponent(Fraction(3)) == 0
    assert dyadic_exponent(Fraction(1, 4)) == 1
    assert dyadic_exponent(Fraction(1, 100)) == 1
    assert dyadic_exponent(Fraction(1, 101)) == 2
    assert dyadic_exponent(Fraction(0)) is None
    with pytest.raises(ParameterError):
        dyadic_exponent(Fraction(-1))


def test_scale_cutoff_and_bucket_floor():
    assert scale_cutoff(4) == 2
    assert scale_cutoff(100) == 3
    assert bucket_floor(0) == 1
    assert bucket_floor(4) == 1
    assert bucket_floor(6) == Fraction(10_000, 49)


def test_legal_profiles():
    assert legal_values(0) == [1]
    assert legal_values(1) == [1, 100]
    assert legal_values(1, n=4) == [1]
    assert is_legal((1, 100, 0))
    assert not is_legal((2,))
    assert enumerate_legal_partial_profiles(-1) == [()]
    assert enumerate_legal_partial_profiles(0, n=4) == [(0,), (1,)]


def test_profile_count_bound_is_reported_per_coordinate():
    counts = profile_count_bound(6)
    assert [c.j for c in counts] == list(range(7))
    assert counts[0].exact == 2
    assert all(c.holds for c in counts[:4])


def test_processing_singletons(singletons):
    processed = process_family(singletons)
    D = processed.family
    assert D.tau == 2
    assert [D.profile(i) for i in range(4)] == [(1, 0, 0)] * 4
    assert all(r.weight_after == 1 for r in processed.reports)


def test_heavy_member_is_trimmed_below_two():
    F = WeightedFamily.from_sets(4, [[0, 1, 2, 3]], Fraction(1, 4))
    processed = process_family(F)
    report = processed.reports[0]
    assert report.weight_before == 4
    assert report.weight_after == 1
    assert report.dropped == (0, 1, 2)
    assert processed.family.profile(0) == (1, 0, 0)


def test_preprocessing_caps_and_rounds_down():
    F = WeightedFamily.from_sets(4, [[0], [1]], Fraction(1, 4), [{0: Fraction(17, 10)}, {1: Fraction(1, 2)}])
    processed = preprocess_weights(F)
    D = processed.family
    assert [D.profile(i) for i in range(2)] == [(1, 0, 0), (0, 1, 0)]
    weighted = D.to_family()
    assert weighted.members[0].weight(0) == 1
    assert weighted.members[1].weight(1) == Fraction(1, 100)
    assert processed.reports[1].guarantee is None


def test_weights_past_the_cutoff_are_dropped():
    weights = [{0: 1, 1: Fraction(1, 10**6), 2: Fraction(1, 10**9)}]
    processed = preprocess_weights(WeightedFamily.from_sets(4, [[0, 1, 2]], Fraction(1, 4), weights))
    assert processed.family.tau == 2
    assert processed.family.profile(0) == (1, 0, 0)
    assert processed.reports[0].dropped == (1, 2)


def test_hundred_elements_raise_the_cutoff():
    weights = [{0: 1, 1: Fraction(1, 10**9), 2: Fraction(1, 10**6)}]
    processed = preprocess_weights(WeightedFamily.from_sets(100, [[0, 1, 2]], Fraction(1, 4), weights))
    assert processed.family.tau == 3
    assert processed.family.profile(0) == (1, 0, 0, 1)
    assert processed.reports[0].dropped == (1,)
    assert processed.reports[0].guarantee


def test_large_bucket_rounds_down_to_one_hundred():
    elems = list(range(150))
    F = WeightedFamily.from_sets(150, [elems], Fraction(1, 4), [{i: Fraction(1, 100) for i in elems}])
    processed = process_family(F)
    assert processed.family.profile(0) == (0, 100, 0, 0)
    report = processed.reports[0]
    assert (report.weight_before, report.weight_after) == (Fraction(3, 2), 1)
    assert report.dropped == tuple(range(50))
    assert report.guarantee


@given(weighted_families())
def test_processing_never_adds_elements_or_weight(F):
    processed = process_family(F).family.to_family()
    for before, after in zip(F.members, processed.members, strict=True):
        assert after.subset.mask & ~before.subset.mask == 0
        assert all(w <= before.weight(i) for i, w in after.weights.items())


def test_minimum_fragment_of_singletons(singletons):
    D = process_family(singletons).family
    empty = GroundSet(4).empty
    result = minimum_fragment(D, 0, empty)
    assert result.T.elements() == (0,)
    assert (result.b, result.t, result.witness, result.s_b) == (0, 1, 0, (1,))
    assert build_cover(D, empty).key() == (1, 2, 4, 8)
    assert classify_W(D, empty) == "bad"


def test_fragment_is_empty_when_W_already_captures(singletons):
    D = process_family(singletons).family
    W = GroundSet(4).subset([0])
    result = minimum_fragment(D, 0, W)
    assert len(result.T) == 0 and result.b == -1
    assert classify_W(D, W) == "good"
    assert is_fragment(D, 0, 0, W, -1) == (True, 0)


def test_feasibility_checks_the_partial_profile(singletons):
    D = process_family(singletons).family
    Z = GroundSet(4).subset([1])
    assert is_feasible(D, 1, Z, 0, (1,), 1)
    assert not is_feasible(D, 0, Z, 0, (1,), 1)
    assert feasible_witnesses(D, Z, 0, (1,), 1) == [1]
    with pytest.raises(ProfileMismatchError):
        is_feasible(D, 0, Z, 0, (0,), 1)
    with pytest.raises(ParameterError):
        is_feasible(D, 0, Z, 1, (1,), 1)


@given(weighted_families())
def test_minimum_fragments_satisfy_their_structural_properties(F):
    D = process_family(F).family
    for W in all_subsets(F.ground.n):
        for idx, result in enumerate(fragments_for(D, W)):
            assert check_fragment_properties(D, idx, W, result) == []


@given(weighted_families())
def test_fragment_cover_covers_the_family(F):
    D = process_family(F).family
    for W in all_subsets(F.ground.n):
        assert covers(build_cover(D, W), F)


def test_fragments_reach_the_deeper_buckets():
    D = process_family(DEEP).family
    assert D.profile(0) == (1, 1, 1)
    ground = GroundSet(6)
    deepest = minimum_fragment(D, 0, ground.empty)
    assert (deepest.T.elements(), deepest.b, deepest.s_b) == ((0, 1, 2), 2, (1, 1, 1))
    assert classify_W(D, ground.empty) == "bad"
    middle = minimum_fragment(D, 0, ground.subset([2]))
    assert (middle.T.elements(), middle.b, middle.s_b) == ((0, 1), 1, (1, 1))
    assert classify_W(D, ground.subset([2])) == "good"
    for W in all_subsets(6):
        assert check_fragment_properties(D, 0, W, minimum_fragment(D, 0, W)) == []


@settings(max_examples=20)
@given(sparse_families(), st.data())
def test_minimum_fragments_on_large_sparse_ground_sets(F, data):
    D = process_family(F).family
    assert D.tau == 3
    support = sorted({i for m in F.members for i in m.subset.elements()})
    W = F.ground.subset(data.draw(st.sets(st.sampled_from(support))))
    for idx, result in enumerate(fragments_for(D, W)):
        assert check_fragment_properties(D, idx, W, result) == []
    assert covers(build_cover(D, W), F)


def test_ledger_single_singleton(single_singleton):
    D = process_family(single_singleton).family
    ledger = aggregate_bad_cost(D, 2)
    assert (ledger.w, ledger.binom_nw, ledger.bad_count) == (2, 6, 3)
    assert ledger.J_eff == 2
    assert ledger.lhs == Fraction(3, 4)
    [bucket] = ledger.buckets
    assert (bucket.b, bucket.s_b, bucket.t) == (0, (1,), 1)
    assert bucket.cost == Fraction(3, 4)
    assert bucket.bound == 6
    assert ledger.holds
    assert bucket.to_row() == {"b": 0, "s_b": "1", "t": 1, "bucket_cost": "3/4", "bound": "6"}


def test_ledger_counts_a_deep_bucket():
    ledger = aggregate_bad_cost(process_family(DEEP).family, 2)
    assert (ledger.w, ledger.J_eff, ledger.bad_count) == (3, 2, 1)
    [bucket] = ledger.buckets
    assert (bucket.b, bucket.s_b, bucket.t) == (2, (1, 1, 1), 3)
    assert bucket.cost == Fraction(1, 64)
    assert bucket.bound == 20
    assert bucket.in_range
    assert ledger.holds


def test_ledger_rejects_degenerate_w(single_singleton):
    D = process_family(single_singleton).family
    with pytest.raises(ParameterError):
        aggregate_bad_cost(D, 5)
    with pytest.raises(ParameterError):
        aggregate_bad_cost(D, Fraction(1, 2))


@given(weighted_families(max_n=5), st.sampled_from([Fraction(2), Fraction(3)]))
def test_ledger_chain_holds(F, J):
    if F.ground.n < 2:
        return
    ledger = aggregate_bad_cost(process_family(F).family, J)
    assert ledger.lhs <= ledger.bucket_total
    assert ledger.holds


def test_global_bound_counts_the_first_bucket():
    assert global_bound(4, 2, Fraction(2), 0, Fraction(9, 10)) == 6


def test_binomial_step():
    check = binomial_step_check(10, 3, 2)
    assert check.holds
    assert check.lhs == 252
    assert binomial_step_grid(30) == []
    with pytest.raises(ParameterError):
        binomial_step_check(5, 0, 1)


def test_aj_series():
    with pytest.raises(ParameterError):
        aj_series(4.0, 2)
    series = aj_series(1e6, 2)
    assert len(series.values) == 3
    assert series.exact_sum is not None
    assert series.exact_sum <= series.product_bound <= series.exp_bound
    assert series.holds


def test_aj_series_with_a_single_bucket():
    series = aj_series(400.0, 0)
    assert series.exact_sum == pytest.approx(100**-0.9)
    assert series.values[0] == pytest.approx(math.log(2 * 100**4, 100) * 100**-0.9)
    assert series.exact_sum <= series.product_bound <= series.exp_bound
    assert series.holds


@given(st.floats(4.5, 1e6), st.floats(1.01, 100))
def test_aj_values_decrease_in_J(J, factor):
    smaller, larger = aj_series(J, 10), aj_series(J * factor, 10)
    assert all(a >= b for a, b in zip(smaller.values, larger.values, strict=True))
