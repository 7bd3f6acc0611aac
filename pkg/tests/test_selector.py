from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcover.domain import Guards, SelectorConfig
from pcover.family import GroundSet, WeightedFamily
from pcover.selector import (
    LambdaCollection,
    binomial_tail,
    binomial_tail_grid,
    coupled_subsample_gap,
    empirical_frequencies,
    expected_sup,
    expected_sup_uniform,
    make_rng,
    sample_uniform_w_subset,
    sample_Xp,
    sup_weighted,
    threshold_family,
    verify_subsampling_chain,
    verify_uniform_conclusion,
)
from pcover.utils.errors import GuardError, ParameterError

EXACT = dict(arithmetic="exact")

ENTRIES = st.sampled_from([Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3)])


@st.composite
def collections(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return LambdaCollection.of(draw(st.lists(st.lists(ENTRIES, min_size=n, max_size=n), min_size=1, max_size=3)))


def test_lambda_collection_validation():
    with pytest.raises(ParameterError):
        LambdaCollection.of([])
    with pytest.raises(ParameterError):
        LambdaCollection.of([[1, -1]])
    with pytest.raises(ParameterError):
        LambdaCollection.of([[1, 1], [1]])


def test_sup_weighted_for_families_and_sequences(singletons):
    A = GroundSet(4).subset([1, 2])
    assert sup_weighted(singletons, A) == 1
    lam = LambdaCollection.of([[1, 2, 0, 0], [0, 0, "1/2", "1/2"]])
    assert sup_weighted(lam, A) == 2


def test_exact_expected_sup_of_singletons(singletons):
    estimate = expected_sup(singletons, SelectorConfig(Fraction(1, 8), **EXACT))
    assert estimate.exact
    assert estimate.value == 1 - Fraction(7, 8) ** 4


def test_float_enumeration_matches_exact(singletons):
    exact = expected_sup(singletons, SelectorConfig(Fraction(1, 8), **EXACT))
    approx = expected_sup(singletons, SelectorConfig(Fraction(1, 8), arithmetic="float"))
    assert approx.value == pytest.approx(float(exact.value))


def test_monte_carlo_within_four_sigma(singletons):
    p = Fraction(1, 8)
    exact = float(expected_sup(singletons, SelectorConfig(p, **EXACT)).value)
    estimate = expected_sup(singletons, SelectorConfig(p, trials=50_000, seed=3, mode="monte-carlo"))
    assert not estimate.exact
    assert estimate.ci_low < estimate.value < estimate.ci_high
    assert abs(estimate.value - exact) <= 4 * estimate.std_err
    assert len(estimate.samples) == 50_000


def test_monte_carlo_is_reproducible(singletons):
    config = SelectorConfig(Fraction(1, 3), trials=1000, seed=11, mode="monte-carlo")
    assert expected_sup(singletons, config).value == expected_sup(singletons, config).value


def test_expected_sup_uniform(singletons):
    config = SelectorConfig(Fraction(1, 8), **EXACT)
    assert expected_sup_uniform(singletons, 2, config).value == 1
    assert expected_sup_uniform(singletons, 0, config).value == 0
    with pytest.raises(ParameterError):
        expected_sup_uniform(singletons, 5, config)


def test_expectation_guard():
    lam = LambdaCollection.of([[1] * 8])
    with pytest.raises(GuardError):
        expected_sup(lam, SelectorConfig(Fraction(1, 2)), Guards(expectation_bits=6))


def test_sample_Xp_and_uniform_subsets():
    assert sample_Xp(10, 0.5, seed=4) == sample_Xp(10, 0.5, seed=4)
    W = sample_uniform_w_subset(10, 4, seed=4)
    assert len(W) == 4
    with pytest.raises(ParameterError):
        sample_Xp(3, 1.0, seed=0)


def test_empirical_frequencies_sum_to_one():
    samples = make_rng(5, 0).random((400, 3)) < 0.5
    freqs = empirical_frequencies(samples)
    assert sum(freqs.values()) == pytest.approx(1.0)
    assert set(freqs) <= set(range(8))


def test_coupled_gap_vanishes_without_subsampling():
    lam = LambdaCollection.of([[1, 0, 2, 1], [0, 1, 1, 1]])
    gap, err = coupled_subsample_gap(lam, 3, 3, trials=200, seed=1)
    assert gap == pytest.approx(0.0)
    assert err == pytest.approx(0.0)


def test_binomial_tail():
    assert binomial_tail(4, Fraction(1, 2), 2) == Fraction(11, 16)
    assert binomial_tail(4, Fraction(1, 2), 0) == 1
    assert binomial_tail_grid(50) == []


@given(st.integers(1, 30), st.integers(1, 19))
def test_binomial_median_lower_bound(n, k):
    p = Fraction(k, 20)
    assert binomial_tail(n, p, int(n * p)) >= Fraction(1, 2)


def test_threshold_family_members():
    lam = LambdaCollection.of([[1, 1]])
    F = threshold_family(lam, 1, SelectorConfig(Fraction(1, 2), **EXACT))
    assert sorted(m.subset.mask for m in F.members) == [1, 2, 3]
    normalized = threshold_family(lam, 2, SelectorConfig(Fraction(1, 2), **EXACT), M=1, normalize=True)
    assert [m.subset.mask for m in normalized.members] == [3]
    assert normalized.members[0].total() == 1
    with pytest.raises(ParameterError):
        threshold_family(lam, 0, SelectorConfig(Fraction(1, 2)), M=1)


@given(
    collections(),
    st.sampled_from([Fraction(1, 3), Fraction(2), Fraction(7)]),
    st.sampled_from([Fraction(1, 4), Fraction(1), Fraction(3)]),
)
def test_threshold_family_is_invariant_under_scaling(lam, c, M):
    config = SelectorConfig(Fraction(1, 2), **EXACT)
    base = threshold_family(lam, 1, config, M=M)
    scaled = threshold_family(lam.scaled(c), 1, config, M=c * M)
    assert [m.subset for m in scaled.members] == [m.subset for m in base.members]
    assert [dict(m.weights) for m in scaled.members] == [{i: c * w for i, w in m.weights.items()} for m in base.members]


@given(collections())
def test_uniform_expectation_is_nondecreasing_in_w(lam):
    config = SelectorConfig(Fraction(1, 2), **EXACT)
    values = [expected_sup_uniform(lam, w, config).value for w in range(lam.n + 1)]
    assert values == sorted(values)


def test_subsampling_chain_on_singletons(singletons):
    report = verify_subsampling_chain(singletons, 4, SelectorConfig(Fraction(1, 8), **EXACT))
    assert report.vacuous
    assert report.zeta == Fraction(1, 2)
    assert report.holds
    assert report.quantities["chained_factor"] == "1/8"


def test_subsampling_chain_monte_carlo():
    F = WeightedFamily.from_sets(6, [[0, 1], [2, 3, 4], [5]], Fraction(1, 3))
    config = SelectorConfig(Fraction(1, 3), trials=20_000, seed=2, mode="monte-carlo")
    report = verify_subsampling_chain(F, 2, config)
    assert report.holds
    assert "coupled_gap" in report.quantities


def test_uniform_conclusion_report(singletons):
    report = verify_uniform_conclusion(singletons, 4, SelectorConfig(Fraction(1, 8), **EXACT))
    assert report.w == 2
    assert report.vacuous
    assert report.estimate.value == 1
    assert report.above_threshold
    with pytest.raises(ParameterError):
        verify_uniform_conclusion(singletons, 16, SelectorConfig(Fraction(1, 8)))


def test_batches_have_the_requested_sizes():
    from pcover.selector.sampling import subsample_batch, uniform_batch

    rng = make_rng(9, 1)
    outer = uniform_batch(rng, 8, 5, 100)
    assert (outer.sum(axis=1) == 5).all()
    inner = subsample_batch(rng, outer, 2)
    assert (inner.sum(axis=1) == 2).all()
    assert not (inner & ~outer).any()
    assert np.issubdtype(inner.dtype, np.bool_)


def test_empty_selection_frequency_at_small_p():
    from pcover.selector.sampling import Xp_batch

    trials = 100_000
    freqs = empirical_frequencies(Xp_batch(make_rng(21, 0), 4, 0.01, trials))
    expected = 0.99**4
    sigma = (expected * (1 - expected) / trials) ** 0.5
    assert abs(freqs[0] - expected) <= 3 * sigma


def test_uniform_singletons_are_equally_likely():
    from pcover.selector.sampling import uniform_batch

    trials = 100_000
    freqs = empirical_frequencies(uniform_batch(make_rng(22, 1), 4, 1, trials))
    sigma = (0.25 * 0.75 / trials) ** 0.5
    assert set(freqs) == {1, 2, 4, 8}
    assert all(abs(f - 0.25) <= 4 * sigma for f in freqs.values())
