"""Poissonized cover costs, pruning and the exact multiset cover oracle."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction

from ..domain import DEFAULT_GUARDS, Guards
from ..family.branch_bound import solve_weighted_cover
from .expoly import ExpPolynomial
from .multiset import Multiset

logger = logging.getLogger(__name__)


def _rate(mu: Sequence[Fraction], N: int, x: int) -> Fraction:
    return N * mu[x]


def poissonized_cost(G: Multiset, mu: Sequence[Fraction], N: int) -> ExpPolynomial:
    """prod_x (e N mu(x))^G(x) / G(x)!, kept exactly as r e^|G|."""
    r = Fraction(1)
    for x, c in G.items:
        r *= _rate(mu, N, x) ** c / math.factorial(c)
    return ExpPolynomial.term(r, len(G))


def poissonized_cover_cost(cover: Sequence[Multiset], mu: Sequence[Fraction], N: int) -> ExpPolynomial:
    total = ExpPolynomial()
    for G in cover:
        total = total + poissonized_cost(G, mu, N)
    return total


def log_poissonized_cost(G: Multiset, mu: Sequence[Fraction], N: int) -> float:
    """Natural log of the cost, -inf when some mu(x) on G vanishes."""
    total = 0.0
    for x, c in G.items:
        rate = float(_rate(mu, N, x))
        if rate == 0:
            return -math.inf
        total += c * (1 + math.log(rate)) - math.lgamma(c + 1)
    return total


def stirling_lower_bound(G: Multiset, mu: Sequence[Fraction], N: int) -> ExpPolynomial:
    """prod_x (e N mu(x) / G(x))^G(x), never above the Poissonized cost."""
    r = Fraction(1)
    for x, c in G.items:
        r *= (_rate(mu, N, x) / c) ** c
    return ExpPolynomial.term(r, len(G))


def is_pruned(G: Multiset, mu: Sequence[Fraction], N: int) -> bool:
    return all(_rate(mu, N, x) <= c for x, c in G.items)


def prune_cover(G: Multiset, mu: Sequence[Fraction], N: int) -> Multiset:
    """Drop every x with N mu(x) / G(x) > 1; each dropped factor was at least 1."""
    return Multiset(tuple((x, c) for x, c in G.items if _rate(mu, N, x) <= c))


def prune_cover_family(cover: Sequence[Multiset], mu: Sequence[Fraction], N: int) -> list[Multiset]:
    """Prune every element and drop duplicates, keeping first occurrences."""
    pruned: list[Multiset] = []
    for G in cover:
        P = prune_cover(G, mu, N)
        if P not in pruned:
            pruned.append(P)
    return pruned


def multiset_covers(cover: Sequence[Multiset], family: Sequence[Multiset]) -> bool:
    return all(any(T.issubset(S) for T in cover) for S in family)


def min_multiset_cover_cost_exact(
    family: Sequence[Multiset], mu: Sequence[Fraction], N: int, guards: Guards = DEFAULT_GUARDS
) -> tuple[ExpPolynomial, list[Multiset]]:
    """Minimum Poissonized cost over covers, candidates restricted to sub-multisets of members."""
    guards.check("cover_candidates", sum(math.prod(c + 1 for _, c in S.items) for S in family))
    candidates = sorted({T for S in family for T in S.sub_multisets()}, key=Multiset.sort_key)
    coverage = []
    for T in candidates:
        cov = 0
        for i, S in enumerate(family):
            if T.issubset(S):
                cov |= 1 << i
        coverage.append(cov)
    costs = [poissonized_cost(T, mu, N) for T in candidates]
    keys = [T.sort_key() for T in candidates]
    solution = solve_weighted_cover(len(family), coverage, costs, keys, ExpPolynomial())
    cover = [candidates[c] for c in solution.chosen]
    logger.info("min multiset cover cost %s with %d elements", solution.cost, len(cover))
    return solution.cost, cover
