"""Tail coverage by witness events, end to end on finite instances."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Any

from ..domain import DEFAULT_GUARDS, Guards, InequalityCheck
from ..multiset.expoly import ExpPolynomial
from ..multiset.family import MultisetFamily, threshold_multiset_family
from ..multiset.multiset import Multiset
from ..multiset.poisson import (
    min_multiset_cover_cost_exact,
    multiset_covers,
    poissonized_cover_cost,
    prune_cover_family,
)
from ..selector.expectations import LambdaCollection
from ..utils.errors import ParameterError
from ..utils.parallel import ordered_map
from ..utils.rationals import Number, to_fraction
from .discretize import CellPartition, discretize
from .instance import FiniteEmpiricalInstance, normalize
from .witness import WitnessEvent, witness_from_cover_element

logger = logging.getLogger(__name__)

DEFAULT_EPS = Fraction(1, 100)


@dataclass(slots=True)
class Bridge:
    """A normalized instance discretized into cells, its threshold family and a pruned cover."""

    instance: FiniteEmpiricalInstance
    factor: Fraction
    partition: CellPartition
    lam: LambdaCollection
    L: Fraction
    family: MultisetFamily
    cover_cost: ExpPolynomial
    cover: list[Multiset]
    events: list[WitnessEvent] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        """The cover costs at most 1/2."""
        return self.cover_cost <= Fraction(1, 2)

    def to_dict(self) -> dict[str, Any]:
        return {
            "factor": str(self.factor),
            "partition": self.partition.to_dict(),
            "L": str(self.L),
            "family_size": len(self.family),
            "cover_cost": str(self.cover_cost),
            "cover_cost_float": float(self.cover_cost),
            "certified": self.certified,
            "cover": [{str(x): c for x, c in G.items} for G in self.cover],
            "events": [event.to_dict() for event in self.events],
        }


def prepare_bridge(
    instance: FiniteEmpiricalInstance,
    eps: Number | None = None,
    L: Number = 1,
    cover: Sequence[Multiset] | None = None,
    guards: Guards = DEFAULT_GUARDS,
) -> Bridge:
    """Normalize, discretize, build the threshold family over cells, cover it and prune the cover.

    A supplied cover is pruned and used as is; otherwise the exact minimum-cost cover is taken.
    """
    L = to_fraction(L)
    if L <= 0:
        raise ParameterError(f"L must be positive, got {L}")
    normalized, factor = normalize(instance, guards)
    partition, lam = discretize(normalized, DEFAULT_EPS if eps is None else eps)
    family = threshold_multiset_family(lam, partition.mu, normalized.N, L, guards=guards)
    if cover is None:
        _, chosen = min_multiset_cover_cost_exact(family.multisets(), partition.mu, normalized.N, guards)
    else:
        chosen = list(cover)
    pruned = prune_cover_family(chosen, partition.mu, normalized.N)
    cost = poissonized_cover_cost(pruned, partition.mu, normalized.N)
    events = [witness_from_cover_element(G, partition.mu, normalized.N) for G in pruned]
    bridge = Bridge(normalized, factor, partition, lam, L, family, cost, pruned, events)
    logger.info("bridge: %d cells, %d family members, cover cost %s", len(partition), len(family), cost)
    return bridge


@dataclass(slots=True)
class CoverageReport:
    L_tail: Fraction
    eps: Fraction
    covers_family: bool
    certified: bool
    tuples: int = 0
    tail_tuples: int = 0
    tail_probability: Fraction = Fraction(0)
    escapes: list[tuple[tuple[int, ...], Fraction]] = field(default_factory=list)
    exported_mismatches: int = 0
    event_probabilities: list[Fraction] = field(default_factory=list)
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def budget(self) -> Fraction:
        return sum(self.event_probabilities, Fraction(0))

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "L_tail": str(self.L_tail),
            "eps": str(self.eps),
            "covers_family": self.covers_family,
            "certified": self.certified,
            "tuples": self.tuples,
            "tail_tuples": self.tail_tuples,
            "tail_probability": str(self.tail_probability),
            "escapes": [{"tuple": list(t), "sup": str(s)} for t, s in self.escapes],
            "exported_mismatches": self.exported_mismatches,
            "event_probabilities": [str(p) for p in self.event_probabilities],
            "budget": str(self.budget),
            "checks": [check.to_dict() for check in self.checks],
        }


def _scan_prefix(bridge: Bridge, prefix: int, level: Fraction) -> tuple[int, Fraction, list, int]:
    instance, partition = bridge.instance, bridge.partition
    tail = mismatches = 0
    prob = Fraction(0)
    escapes = []
    for rest in product(range(instance.size), repeat=instance.N - 1):
        sample = (prefix, *rest)
        sup = instance.sup_Z(sample)
        if sup < level:
            continue
        tail += 1
        prob += instance.tuple_probability(sample)
        cells = [partition.cell_of(y) for y in sample]
        inside = False
        for event in bridge.events:
            exact = event.contains(cells)
            if exact != event.exported_contains(cells):
                mismatches += 1
            inside = inside or exact
        if not inside:
            escapes.append((sample, sup))
    return tail, prob, escapes, mismatches


def tail_coverage_check(
    instance: FiniteEmpiricalInstance,
    eps: Number | None = None,
    L: Number = 1,
    L_tail: Number | None = None,
    cover: Sequence[Multiset] | None = None,
    guards: Guards = DEFAULT_GUARDS,
    bridge: Bridge | None = None,
) -> CoverageReport:
    """Every sample with sup Z_f >= L_tail E sup Z_f must fall in some witness event.

    L scales the threshold family over cells and L_tail the tail event; L_tail defaults to 2L.
    Samples are enumerated exhaustively, split by their first point. A prepared bridge skips the cover search.
    Cells lose at most eps of sup Z_f, so eps <= L_tail - L is required.
    """
    L_family = bridge.L if bridge is not None else to_fraction(L)
    width = bridge.partition.eps if bridge is not None else to_fraction(DEFAULT_EPS if eps is None else eps)
    level = 2 * L_family if L_tail is None else to_fraction(L_tail)
    if width > level - L_family:
        raise ParameterError(f"eps={width} exceeds L_tail - L = {level - L_family}; tail samples may miss the family")
    if bridge is None:
        bridge = prepare_bridge(instance, width, L_family, cover, guards)
    inst = bridge.instance
    guards.check("tuples", inst.size**inst.N)
    covers = multiset_covers(bridge.cover, bridge.family.multisets())
    if not covers:
        logger.warning("the supplied cover does not cover the threshold family")
    report = CoverageReport(level, bridge.partition.eps, covers, bridge.certified, tuples=inst.size**inst.N)

    for tail, prob, escapes, mismatches in ordered_map(
        lambda y: _scan_prefix(bridge, y, level), range(inst.size)
    ):
        report.tail_tuples += tail
        report.tail_probability += prob
        report.escapes.extend(escapes)
        report.exported_mismatches += mismatches
    report.event_probabilities = [event.probability(guards) for event in bridge.events]

    report.checks = [
        InequalityCheck("escaping tuples", len(report.escapes), 0, not report.escapes, relation="=="),
        InequalityCheck("exported (g, t) agrees", report.exported_mismatches, 0, report.exported_mismatches == 0, "=="),
        InequalityCheck("P[tail] <= sum P[H]", report.tail_probability, report.budget, report.tail_probability <= report.budget),
    ]
    if bridge.certified:
        half = Fraction(1, 2)
        report.checks.append(InequalityCheck("sum P[H] <= 1/2", report.budget, half, report.budget <= half))
    if report.escapes:
        logger.warning("%d tail samples escape the witness events", len(report.escapes))
    return report


@dataclass(frozen=True, slots=True)
class SymmetricSet:
    k: int
    tuples: frozenset[tuple[int, ...]]
    probability: Fraction
    symmetric: bool
    bound: float | None = None

    @property
    def holds(self) -> bool:
        return self.symmetric and (self.bound is None or float(self.probability) <= self.bound)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "size": len(self.tuples),
            "probability": str(self.probability),
            "symmetric": self.symmetric,
            "bound": self.bound,
            "holds": self.holds,
        }


def symmetric_witness_sets(
    cover: Sequence[Multiset], mu: Sequence[Fraction], N: int, c: float | None = None
) -> dict[int, SymmetricSet]:
    """V_k: all orderings of the cover elements of size k >= 1, with P((Y_1..Y_k) in V_k).

    With c given each V_k is also checked against (1/2)(c k / N)^k.
    """
    grouped: dict[int, set[tuple[int, ...]]] = {}
    for G in cover:
        if len(G):
            grouped.setdefault(len(G), set()).update(permutations(G.expanded()))
    result = {}
    for k in sorted(grouped):
        V = frozenset(grouped[k])
        prob = Fraction(0)
        for v in V:
            term = Fraction(1)
            for x in v:
                term *= mu[x]
            prob += term
        symmetric = all(perm in V for v in V for perm in permutations(v))
        bound = 0.5 * (c * k / N) ** k if c is not None else None
        result[k] = SymmetricSet(k, V, prob, symmetric, bound)
    return result
