"""Exact minimum-cost weighted set cover.

Members to be covered are indexed 0..m-1; each candidate carries the bitmask of
members it covers, a cost and a sort key. Costs only need +, division by an
int and ordering, so both Fractions and exponential polynomials work.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Generic, Protocol, TypeVar

logger = logging.getLogger(__name__)


class CostLike(Protocol):
    def __add__(self, other: Any) -> Any: ...
    def __truediv__(self, other: int) -> Any: ...
    def __lt__(self, other: Any) -> bool: ...
    def __le__(self, other: Any) -> bool: ...


C = TypeVar("C", bound=CostLike)


@dataclass(frozen=True, slots=True)
class CoverSolution(Generic[C]):
    cost: C
    chosen: tuple[int, ...]
    nodes: int = 0


def _irredundant(chosen: Sequence[int], coverage: Sequence[int], keys: Sequence[Any], full: int) -> list[int]:
    """Drop members of the cover that are not needed, largest key first."""
    kept = sorted(chosen, key=lambda c: keys[c])
    for c in sorted(chosen, key=lambda c: keys[c], reverse=True):
        rest = [d for d in kept if d != c]
        union = 0
        for d in rest:
            union |= coverage[d]
        if union & full == full:
            kept = rest
    return kept


def _total(chosen: Sequence[int], costs: Sequence[C], zero: C) -> C:
    total = zero
    for c in chosen:
        total = total + costs[c]
    return total


def greedy_weighted_cover(
    n_members: int,
    coverage: Sequence[int],
    costs: Sequence[C],
    keys: Sequence[Any],
    zero: C,
) -> CoverSolution[C]:
    """Ratio greedy: repeatedly take the candidate with the least cost per newly covered member."""
    full = (1 << n_members) - 1
    covered = 0
    chosen: list[int] = []
    while covered != full:
        best: int | None = None
        best_ratio: C | None = None
        for c, cov in enumerate(coverage):
            gain = (cov & ~covered).bit_count()
            if gain == 0:
                continue
            ratio = costs[c] / gain
            if best_ratio is None or ratio < best_ratio or (not best_ratio < ratio and keys[c] < keys[best]):
                best, best_ratio = c, ratio
        if best is None:
            raise ValueError("candidates do not cover every member")
        chosen.append(best)
        covered |= coverage[best]
    kept = _irredundant(chosen, coverage, keys, full)
    return CoverSolution(_total(kept, costs, zero), tuple(sorted(kept, key=lambda c: keys[c])))


def solve_weighted_cover(
    n_members: int,
    coverage: Sequence[int],
    costs: Sequence[C],
    keys: Sequence[Any],
    zero: C,
) -> CoverSolution[C]:
    """Minimum-cost cover, ties broken by the lexicographically smallest sorted key sequence.

    Depth-first branch and bound: branch on the uncovered member with the fewest
    candidates, bound with sum over uncovered members of the cheapest cost share
    min_c cost(c) / |cov(c) & uncovered|. Pruning is strict so that every
    optimal cover is still reached and the tie-break is exact.
    """
    if n_members == 0:
        return CoverSolution(zero, ())
    full = (1 << n_members) - 1
    by_member: list[list[int]] = [[] for _ in range(n_members)]
    for c, cov in enumerate(coverage):
        for i in range(n_members):
            if cov >> i & 1:
                by_member[i].append(c)
    for i, cands in enumerate(by_member):
        if not cands:
            raise ValueError(f"member {i} has no covering candidate")
        cands.sort(key=lambda c: (costs[c], keys[c]))

    incumbent = greedy_weighted_cover(n_members, coverage, costs, keys, zero)
    best_cost: C = incumbent.cost
    best_key = tuple(keys[c] for c in incumbent.chosen)
    best_chosen = incumbent.chosen
    nodes = 0

    def lower_bound(uncovered: int) -> C:
        bound = zero
        for i in range(n_members):
            if uncovered >> i & 1:
                share = min(costs[c] / (coverage[c] & uncovered).bit_count() for c in by_member[i])
                bound = bound + share
        return bound

    def search(covered: int, chosen: list[int], cost: C) -> None:
        nonlocal best_cost, best_key, best_chosen, nodes
        nodes += 1
        if covered == full:
            kept = _irredundant(chosen, coverage, keys, full)
            kept_cost = _total(kept, costs, zero)
            kept_key = tuple(sorted(keys[c] for c in kept))
            if kept_cost < best_cost or (not best_cost < kept_cost and kept_key < best_key):
                best_cost, best_key = kept_cost, kept_key
                best_chosen = tuple(sorted(kept, key=lambda c: keys[c]))
            return
        uncovered = full & ~covered
        if best_cost < cost + lower_bound(uncovered):
            return
        branch = min(
            (i for i in range(n_members) if uncovered >> i & 1),
            key=lambda i: (len(by_member[i]), i),
        )
        for c in by_member[branch]:
            if c in chosen:
                continue
            chosen.append(c)
            search(covered | coverage[c], chosen, cost + costs[c])
            chosen.pop()

    search(0, [], zero)
    logger.info("branch and bound explored %d nodes over %d candidates", nodes, len(coverage))
    return CoverSolution(best_cost, best_chosen, nodes)
