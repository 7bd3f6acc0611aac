import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcover.domain import SelectorConfig
from pcover.multiset import (
    ExpPolynomial,
    Multiset,
    MultisetDistribution,
    MultisetFamily,
    MultisetMember,
    aggregate_bad_cost_multi,
    binomial_factor_check,
    build_cover_multi,
    check_multi_fragment_properties,
    classify_multi,
    count_multisets,
    e_bounds,
    enumerate_multisets,
    expected_sup_multiset,
    factorial_ratio_check,
    is_pruned,
    log_poissonized_cost,
    min_multiset_cover_cost_exact,
    is_feasible_multi,
    is_fragment_multi,
    minimum_fragment_multi,
    mset_diff,
    mset_intersect,
    mset_subset,
    mset_sum,
    mset_union,
    multiset_covers,
    multiset_prob,
    poissonized_cost,
    process_multiset_family,
    prune_cover,
    prune_cover_family,
    sample_counts,
    sample_multiset,
    stirling_lower_bound,
    threshold_multiset_family,
    verify_tail_conclusion,
)
from pcover.selector import LambdaCollection, make_rng
from pcover.utils.errors import ParameterError, ProfileMismatchError

SKEWED = (Fraction(1, 10), Fraction(9, 10))
HALVES = (Fraction(1, 2), Fraction(1, 2))

counts = st.dictionaries(st.integers(0, 2), st.integers(0, 3), max_size=3)


def test_multiset_operations():
    a = Multiset.of({0: 2, 1: 1})
    b = Multiset.of({0: 1, 2: 3})
    assert (a | b).as_dict() == {0: 2, 1: 1, 2: 3}
    assert (a & b).as_dict() == {0: 1}
    assert (a + b).as_dict() == {0: 3, 1: 1, 2: 3}
    assert (a - b).as_dict() == {0: 1, 1: 1}
    assert Multiset.of({0: 1}) <= a
    assert not b <= a
    assert len(a) == 3
    assert Multiset.of({3: 0}) == Multiset()
    with pytest.raises(ParameterError):
        Multiset.of({0: -1})


def test_sub_multisets_of_size_skips_repeats():
    subs = list(Multiset.of({0: 2, 1: 1}).sub_multisets_of_size(2))
    assert subs == [Multiset.of({0: 2}), Multiset.of({0: 1, 1: 1})]
    assert len(list(Multiset.of({0: 2, 1: 1}).sub_multisets())) == 6


def test_enumeration_order_and_count():
    assert list(enumerate_multisets((0, 1), 2)) == [
        Multiset.of({0: 2}),
        Multiset.of({0: 1, 1: 1}),
        Multiset.of({1: 2}),
    ]
    assert count_multisets(2, 2) == 3
    assert count_multisets(0, 0) == 1
    assert list(enumerate_multisets((), 0)) == [Multiset()]
    assert sum(1 for _ in enumerate_multisets((0, 1, 2), 4)) == count_multisets(3, 4)


def test_multiset_prob(double_a):
    assert multiset_prob(double_a, HALVES, 2) == Fraction(1, 4)
    assert multiset_prob(Multiset.of({0: 1, 1: 1}), HALVES, 2) == Fraction(1, 2)
    with pytest.raises(ParameterError):
        multiset_prob(double_a, HALVES, 3)


def test_law_sums_to_one():
    mu = (Fraction(1, 3), Fraction(1, 6), Fraction(1, 2))
    total = sum(multiset_prob(W, mu, 4) for W in enumerate_multisets((0, 1, 2), 4))
    assert total == 1


def test_distribution_validation():
    assert MultisetDistribution.of(["1/2", "1/2"], 3, 2).M == 6
    with pytest.raises(ParameterError):
        MultisetDistribution.of(["1/2", "1/3"], 2)
    with pytest.raises(ParameterError):
        MultisetDistribution.of([1], 0)


def test_sampling_is_reproducible():
    dist = MultisetDistribution.of(["1/4", "3/4"], 5)
    W = sample_multiset(dist, seed=8)
    assert len(W) == 5
    assert W == sample_multiset(dist, seed=8)


def test_sampling_honours_an_explicit_size():
    dist = MultisetDistribution.of(["1/4", "3/4"], 5)
    assert sample_multiset(dist, seed=8, size=0) == Multiset()
    assert len(sample_multiset(dist, seed=8, size=2)) == 2
    counts = sample_counts(make_rng(8, 0), dist, 3, size=0)
    assert counts.shape == (3, 2)
    assert counts.sum() == 0
    assert (sample_counts(make_rng(8, 0), dist, 3).sum(axis=1) == 5).all()


def test_exp_polynomial_arithmetic():
    e = ExpPolynomial.term(1, 1)
    assert e - e == 0
    assert Fraction(271828, 100000) < e < Fraction(271829, 100000)
    assert e > Fraction(2718281828459045, 10**15)
    assert float(e * e) == pytest.approx(math.e**2)
    assert str(ExpPolynomial.term(Fraction(1, 2), 2) + 1) == "1/2*e^2 + 1"
    assert (e / 2).is_rational() is False
    lo, hi = e_bounds(10)
    assert lo < Fraction(math.e) < hi


def test_poissonized_costs():
    assert poissonized_cost(Multiset.of({0: 1}), SKEWED, 1) == ExpPolynomial.term(Fraction(1, 10), 1)
    assert poissonized_cost(Multiset.of({0: 2}), SKEWED, 1) == ExpPolynomial.term(Fraction(1, 200), 2)
    assert poissonized_cost(Multiset(), SKEWED, 1) == 1
    assert log_poissonized_cost(Multiset.of({0: 1}), SKEWED, 1) == pytest.approx(1 + math.log(0.1))
    zero = (Fraction(0), Fraction(1))
    assert log_poissonized_cost(Multiset.of({0: 1}), zero, 1) == -math.inf


def test_min_multiset_cover():
    cost, cover = min_multiset_cover_cost_exact([Multiset.of({0: 2})], SKEWED, 1)
    assert cost == ExpPolynomial.term(Fraction(1, 200), 2)
    assert cover == [Multiset.of({0: 2})]
    assert multiset_covers(cover, [Multiset.of({0: 2, 1: 1})])
    assert not multiset_covers([Multiset.of({1: 1})], [Multiset.of({0: 2})])


def test_pruning():
    G = Multiset.of({0: 1, 1: 1})
    assert prune_cover(G, SKEWED, 10) == Multiset.of({0: 1})
    assert is_pruned(prune_cover(G, SKEWED, 10), SKEWED, 10)
    assert not is_pruned(G, SKEWED, 10)
    assert prune_cover_family([G, Multiset.of({0: 1})], SKEWED, 10) == [Multiset.of({0: 1})]


@given(counts, st.integers(1, 6))
def test_pruning_and_stirling_bound_never_raise_cost(raw, N):
    mu = (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))
    G = Multiset.of(raw)
    cost = poissonized_cost(G, mu, N)
    assert poissonized_cost(prune_cover(G, mu, N), mu, N) <= cost
    assert stirling_lower_bound(G, mu, N) <= cost


def test_factor_checks():
    check = factorial_ratio_check(6, 2)
    assert check.lhs == Fraction(1, 56)
    assert check.holds
    assert binomial_factor_check(3, 2, 2).holds
    assert binomial_factor_check(3, 2, 2).rhs == (6, 16)
    with pytest.raises(ParameterError):
        binomial_factor_check(5, 1, 2)
    with pytest.raises(ParameterError):
        factorial_ratio_check(0, 1)


def test_members_and_threshold_family():
    member = MultisetMember(Multiset.of({0: 2}), {0: Fraction(1)})
    W = Multiset.of({0: 3})
    assert member.weight_of(W) == 3
    assert member.capped_weight_of(W) == 2
    assert member.total() == 2

    lam = LambdaCollection.of([[1, 0], [0, 1]])
    assert expected_sup_multiset(lam, HALVES, 2) == Fraction(3, 2)
    F = threshold_multiset_family(lam, HALVES, 2, 1)
    assert F.multisets() == [Multiset.of({0: 2}), Multiset.of({1: 2})]
    with pytest.raises(ParameterError):
        threshold_multiset_family(lam, (Fraction(1),), 2, 1)


def test_family_rejects_foreign_elements():
    with pytest.raises(ParameterError):
        MultisetFamily.of(1, [{1: 1}])


def _unit():
    return process_multiset_family(MultisetFamily.of(2, [{0: 1}])).family


def test_processing_and_fragments():
    D = _unit()
    assert D.tau == 0
    assert D.profile(0) == (1,)
    result = minimum_fragment_multi(D, 0, Multiset())
    assert (result.T, result.b, result.t) == (Multiset.of({0: 1}), 0, 1)
    assert check_multi_fragment_properties(D, 0, Multiset(), result) == []
    covered = minimum_fragment_multi(D, 0, Multiset.of({0: 1}))
    assert covered.b == -1
    assert covered.T == Multiset()
    assert classify_multi(D, Multiset()) == "bad"
    assert classify_multi(D, Multiset.of({0: 1})) == "good"
    assert build_cover_multi(D, Multiset.of({1: 2})) == [Multiset.of({0: 1})]


def test_processing_trims_heavy_members():
    processed = process_multiset_family(MultisetFamily.of(1, [{0: 3}]))
    report = processed.reports[0]
    assert report.weight_before == 3
    assert report.weight_after == 1
    assert processed.family.profile(0) == (1,)


def test_multiset_ledger():
    ledger = aggregate_bad_cost_multi(_unit(), MultisetDistribution.of(HALVES, 2))
    assert ledger.total_count == 3
    assert ledger.bad_count == 1
    assert ledger.bad_probability == Fraction(1, 4)
    assert ledger.lhs == ExpPolynomial.term(Fraction(1, 4), 1)
    [bucket] = ledger.buckets
    assert (bucket.b, bucket.s_b, bucket.t) == (0, (1,), 1)
    assert bucket.bound == ExpPolynomial.term(8, 1)
    assert ledger.global_rhs == ExpPolynomial.term(8, 1)
    assert ledger.holds


def test_tail_conclusion_exact():
    F = MultisetFamily.of(2, [{0: 1}])
    report = verify_tail_conclusion(F, MultisetDistribution.of(HALVES, 2))
    assert report.min_cover_cost == 1
    assert not report.vacuous
    assert report.expected_sup == 1
    assert report.expected_sup_capped == Fraction(3, 4)
    assert report.bad_probability == Fraction(1, 4)
    assert report.holds
    assert all(check.holds for check in report.conclusions)


def test_tail_conclusion_sampled_and_empty():
    F = MultisetFamily.of(2, [{0: 1}])
    config = SelectorConfig(Fraction(1, 2), trials=20_000, seed=1, mode="monte-carlo")
    report = verify_tail_conclusion(F, MultisetDistribution.of(HALVES, 2), config, J0=4.0, c=1.0)
    assert not report.exact
    assert report.expected_sup == pytest.approx(1.0, abs=0.05)
    assert report.bad_probability == pytest.approx(0.25, abs=0.02)
    assert len(report.conclusions) == 3
    with pytest.raises(ParameterError):
        verify_tail_conclusion(MultisetFamily(2, ()), MultisetDistribution.of(HALVES, 2))


@given(counts, counts)
def test_pointwise_operations(x, y):
    a, b = Multiset.of(x), Multiset.of(y)
    assert mset_intersect(a, b) <= mset_union(a, b)
    assert mset_subset(mset_intersect(a, b), a)
    assert len(mset_sum(a, b)) == len(a) + len(b)
    assert mset_sum(mset_diff(a, b), mset_intersect(a, b)) == a


def test_multiset_feasibility():
    D = _unit()
    assert is_feasible_multi(D, 0, Multiset.of({0: 1}), 0, (1,), 1)
    assert not is_feasible_multi(D, 0, Multiset(), 0, (1,), 0)
    assert is_feasible_multi(D, 0, Multiset.of({0: 1}), -1, (), 0)
    with pytest.raises(ProfileMismatchError):
        is_feasible_multi(D, 0, Multiset(), 0, (0,), 0)
    with pytest.raises(ParameterError):
        is_feasible_multi(D, 0, Multiset(), 0, (), 0)
    assert is_fragment_multi(D, Multiset.of({0: 1}), 0, Multiset(), 0) == (True, 0)
    assert is_fragment_multi(D, Multiset(), 0, Multiset(), -1) == (False, None)
    with pytest.raises(ParameterError):
        is_fragment_multi(D, Multiset.of({1: 1}), 0, Multiset(), 0)
