"""Exact and heuristic p-smallness oracles."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

from ..domain import DEFAULT_GUARDS, Guards
from ..utils.errors import BijectionError, ParameterError
from ..utils.rationals import Number
from .bitsets import SubsetBits, submasks
from .branch_bound import greedy_weighted_cover, solve_weighted_cover
from .family import Cover, WeightedFamily, check_probability, cover_cost, covers

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

Verdict = Literal["p-small", "not-p-small"]


@dataclass(frozen=True, slots=True)
class SmallnessCertificate:
    verdict: Verdict
    witness_cover: Cover | None
    min_cost: Fraction
    exhaustive: bool

    def validate(self, F: WeightedFamily, p: Number | None = None) -> bool:
        """Re-check the certificate from scratch with covers() and cover_cost()."""
        prob = F.p if p is None else check_probability(p)
        if self.verdict == "p-small":
            if self.witness_cover is None or not covers(self.witness_cover, F):
                return False
            return cover_cost(self.witness_cover, prob) <= HALF
        return not self.exhaustive or self.min_cost > HALF

    def to_dict(self) -> dict[str, Any]:
        cover = None if self.witness_cover is None else [list(e.elements()) for e in self.witness_cover.elements]
        return {
            "verdict": self.verdict,
            "cost": str(self.min_cost),
            "cover": cover,
            "exhaustive": self.exhaustive,
        }


def _candidates(F: WeightedFamily, guards: Guards) -> list[int]:
    # A cover element T only matters through the members it lies below. Replacing
    # T by T & S for a member S it covers keeps S covered and |T & S| <= |T|, so
    # optimal covers can be taken among subsets of members.
    guards.check("cover_candidates", sum(1 << len(m.subset) for m in F.members))
    masks: set[int] = set()
    for member in F.members:
        masks.update(submasks(member.subset.mask))
    return sorted(masks)


def _cover_instance(F: WeightedFamily, p: Fraction, guards: Guards) -> tuple[list[int], list[int], list[Fraction]]:
    candidates = _candidates(F, guards)
    subsets = [m.subset.mask for m in F.members]
    coverage = []
    for t in candidates:
        cov = 0
        for i, s in enumerate(subsets):
            if t & ~s == 0:
                cov |= 1 << i
        coverage.append(cov)
    powers = [p**k for k in range(F.ground.n + 1)]
    costs = [powers[t.bit_count()] for t in candidates]
    return candidates, coverage, costs


def min_cover_cost_exact(
    F: WeightedFamily, p: Number | None = None, guards: Guards = DEFAULT_GUARDS
) -> tuple[Fraction, Cover]:
    """Minimum of sum p^|T| over covers of F, with the tie-broken optimal cover."""
    prob = F.p if p is None else check_probability(p)
    candidates, coverage, costs = _cover_instance(F, prob, guards)
    solution = solve_weighted_cover(len(F), coverage, costs, candidates, Fraction(0))
    cover = Cover(tuple(SubsetBits(candidates[c], F.ground.n) for c in solution.chosen))
    logger.info("min cover cost %s with %d elements", solution.cost, len(cover))
    return solution.cost, cover


def greedy_cover(F: WeightedFamily, p: Number | None = None, guards: Guards = DEFAULT_GUARDS) -> Cover:
    """Upper-bound cover from the ratio greedy; not optimal in general."""
    prob = F.p if p is None else check_probability(p)
    candidates, coverage, costs = _cover_instance(F, prob, guards)
    solution = greedy_weighted_cover(len(F), coverage, costs, candidates, Fraction(0))
    return Cover(tuple(SubsetBits(candidates[c], F.ground.n) for c in solution.chosen))


def is_p_small(
    F: WeightedFamily,
    p: Number | None = None,
    method: Literal["exact", "given-cover"] = "exact",
    cover: Cover | None = None,
    guards: Guards = DEFAULT_GUARDS,
) -> SmallnessCertificate:
    prob = F.p if p is None else check_probability(p)
    if method == "exact":
        cost, best = min_cover_cost_exact(F, prob, guards)
        verdict: Verdict = "p-small" if cost <= HALF else "not-p-small"
        return SmallnessCertificate(verdict, best, cost, exhaustive=True)
    if method != "given-cover":
        raise ParameterError(f"unknown method {method!r}")
    if cover is None:
        raise ParameterError("method 'given-cover' needs a cover")
    cost = cover_cost(cover, prob)
    assert isinstance(cost, Fraction)
    ok = covers(cover, F) and cost <= HALF
    return SmallnessCertificate("p-small" if ok else "not-p-small", cover, cost, exhaustive=False)


def shrink_monotone_check(
    F: WeightedFamily, F_shrunk: WeightedFamily, p: Number | None = None, guards: Guards = DEFAULT_GUARDS
) -> bool:
    """If the member-wise smaller family is p-small then so is F; returns whether that held."""
    if F.ground.n != F_shrunk.ground.n or len(F) != len(F_shrunk):
        raise BijectionError(f"families of sizes {len(F)} and {len(F_shrunk)} are not in bijection")
    for idx, (big, small) in enumerate(zip(F.members, F_shrunk.members, strict=True)):
        if not small.subset.issubset(big.subset):
            raise BijectionError(f"member {idx}: {small.subset} is not a subset of {big.subset}")
    prob = F.p if p is None else check_probability(p)
    if is_p_small(F_shrunk, prob, guards=guards).verdict == "not-p-small":
        return True
    return is_p_small(F, prob, guards=guards).verdict == "p-small"
