import math
from fractions import Fraction

import pytest

from pcover.empirical import (
    FiniteEmpiricalInstance,
    containment_violations,
    discretization_error_check,
    discretize,
    expected_sup_Z,
    log_step_check,
    log_step_grid,
    markov_chain_check,
    normalize,
    prepare_bridge,
    refines,
    symmetric_witness_sets,
    tail_coverage_check,
    witness_from_cover_element,
)
from pcover.multiset import ExpPolynomial, Multiset
from pcover.utils.errors import ParameterError, UnprunedCoverError

HALVES = (Fraction(1, 2), Fraction(1, 2))


@pytest.fixture
def two_points():
    return FiniteEmpiricalInstance.of(["a", "b"], HALVES, [["3/10", "9/10"]], 1)


@pytest.fixture
def coin():
    """Z = fraction of heads over two fair flips."""
    return FiniteEmpiricalInstance.of(["tails", "heads"], HALVES, [[0, 1]], 2)


def test_instance_validation():
    with pytest.raises(ParameterError):
        FiniteEmpiricalInstance.of(["a", "b"], [0, 1], [[1, 1]], 1)
    with pytest.raises(ParameterError):
        FiniteEmpiricalInstance.of(["a"], [1], [[-1]], 1)
    with pytest.raises(ParameterError):
        FiniteEmpiricalInstance.of(["a"], [1], [[1, 2]], 1)
    with pytest.raises(ParameterError):
        FiniteEmpiricalInstance.of(["a"], [1], [[1]], 0)


def test_expected_sup_and_normalization(two_points, coin):
    assert expected_sup_Z(two_points) == Fraction(3, 5)
    assert expected_sup_Z(coin) == Fraction(1, 2)
    normalized, factor = normalize(two_points)
    assert factor == Fraction(5, 3)
    assert expected_sup_Z(normalized) == 1
    zero = FiniteEmpiricalInstance.of(["a"], [1], [[0]], 1)
    with pytest.raises(ParameterError):
        normalize(zero)


def test_discretize_cells(two_points):
    partition, lam = discretize(two_points, Fraction(1, 2))
    assert partition.cells == ((0,), (1,))
    assert partition.mu == HALVES
    assert lam.vectors == ((Fraction(0), Fraction(1, 2)),)
    assert partition.push(Multiset.of({0: 1, 1: 2})) == Multiset.of({0: 1, 1: 2})
    coarse, _ = discretize(two_points, 1)
    assert len(coarse) == 1
    assert refines(partition, coarse)
    assert not refines(coarse, partition)
    with pytest.raises(ParameterError):
        discretize(two_points, 0)


def test_discretization_error(two_points):
    partition, lam = discretize(two_points, Fraction(1, 2))
    report = discretization_error_check(two_points, partition, lam)
    assert report.max_error == Fraction(2, 5)
    assert report.expected_sup == Fraction(3, 5)
    assert report.expected_cell_sup == Fraction(1, 4)
    assert report.holds


def test_markov_chain_worked_example():
    report = markov_chain_check(Multiset.of({0: 2}), HALVES, 2)
    assert report.q0 == Fraction(1, 4)
    assert report.q1 == 1
    assert report.q2 == ExpPolynomial.term(Fraction(1, 4), 2)
    assert report.q3 == ExpPolynomial.term(Fraction(1, 2), 2)
    assert report.holds


def test_witness_events():
    event = witness_from_cover_element(Multiset.of({0: 2}), HALVES, 2)
    assert event.level == Fraction(1, 4)
    assert event.contains([0, 0])
    assert not event.contains([0, 1])
    assert event.exported_contains([0, 0])
    assert not event.exported_contains([1, 1])
    g, t = event.exported()
    assert all(v >= 0 for v in g)
    assert t == pytest.approx(2 * math.log(2))
    assert containment_violations(event) == []
    with pytest.raises(UnprunedCoverError):
        witness_from_cover_element(Multiset.of({0: 1}), HALVES, 4)
    with pytest.raises(ParameterError):
        witness_from_cover_element(Multiset.of({0: 1}), (Fraction(0), Fraction(1)), 2)


def test_log_step():
    assert log_step_check(1, 1).lhs == 2
    assert log_step_check(3, 5).holds
    assert log_step_grid() == []


def test_bridge_on_coin(coin):
    bridge = prepare_bridge(coin)
    assert bridge.factor == 2
    assert [m.multiset for m in bridge.family.members] == [Multiset.of({0: 1, 1: 1}), Multiset.of({1: 2})]
    assert bridge.cover == [Multiset()]
    assert bridge.cover_cost == 1
    assert not bridge.certified


def test_tail_coverage_on_coin(coin):
    report = tail_coverage_check(coin)
    assert report.L_tail == 2
    assert report.covers_family
    assert report.tuples == 4
    assert report.tail_tuples == 1
    assert report.tail_probability == Fraction(1, 4)
    assert report.escapes == []
    assert report.exported_mismatches == 0
    assert report.budget == 1
    assert report.holds


def test_tail_coverage_with_supplied_cover(coin):
    report = tail_coverage_check(coin, L=Fraction(1, 2), L_tail=1, cover=[Multiset.of({1: 1})])
    assert report.covers_family
    assert report.tail_tuples == 3
    assert report.escapes == []
    assert report.holds


def test_tail_coverage_needs_eps_within_the_gap(coin):
    with pytest.raises(ParameterError, match="eps"):
        tail_coverage_check(coin, eps=2)
    with pytest.raises(ParameterError):
        tail_coverage_check(coin, eps=Fraction(1, 100), L_tail=1)
    assert tail_coverage_check(coin, eps=1).holds


def test_symmetric_witness_sets():
    sets = symmetric_witness_sets([Multiset(), Multiset.of({0: 1, 1: 1})], HALVES, 2, c=1.0)
    assert list(sets) == [2]
    V = sets[2]
    assert V.tuples == frozenset({(0, 1), (1, 0)})
    assert V.probability == Fraction(1, 2)
    assert V.symmetric
    assert V.holds
