"""Dyadic weight preprocessing and profile regularization."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..domain import DEFAULT_CONSTANTS, FragmentConstants
from ..family import GroundSet, Member, SubsetBits, WeightedFamily
from ..utils.errors import ParameterError
from ..utils.rationals import floor_log, is_power_of

logger = logging.getLogger(__name__)


def scale_cutoff(n: int, base: int = 100) -> int:
    """tau = floor(log_base n) + 2."""
    return floor_log(n, base) + 2


def dyadic_exponent(weight: Fraction, base: int = 100) -> int | None:
    """Smallest j >= 0 with base^-j <= weight (weights above 1 count as 1); None for zero."""
    if weight < 0:
        raise ParameterError(f"negative weight {weight}")
    if weight == 0:
        return None
    j = 0
    scale = Fraction(1)
    while scale > weight:
        j += 1
        scale /= base
    return j


def bucket_floor(j: int, base: int = 100) -> Fraction:
    """Smallest admissible nonzero bucket size max{1, base^j / (base^4 (j+1)^2)}."""
    return max(Fraction(1), Fraction(base**j, base**4 * (j + 1) ** 2))


@dataclass(frozen=True, slots=True)
class DyadicFamily:
    """A family whose weights are all base^-j, stored as per-member bucket masks S_0..S_tau."""

    ground: GroundSet
    p: Fraction
    buckets: tuple[tuple[int, ...], ...]
    tau: int
    constants: FragmentConstants = DEFAULT_CONSTANTS

    def __len__(self) -> int:
        return len(self.buckets)

    def scale(self, j: int) -> Fraction:
        return Fraction(self.constants.base) ** (-j)

    def subset_mask(self, idx: int) -> int:
        mask = 0
        for bucket in self.buckets[idx]:
            mask |= bucket
        return mask

    def profile(self, idx: int) -> tuple[int, ...]:
        return tuple(b.bit_count() for b in self.buckets[idx])

    def weight_of(self, idx: int, mask: int) -> Fraction:
        """lambda^S(S & mask)."""
        return sum(
            (self.scale(j) * (bucket & mask).bit_count() for j, bucket in enumerate(self.buckets[idx])),
            Fraction(0),
        )

    def total_weight(self, idx: int) -> Fraction:
        return self.weight_of(idx, self.subset_mask(idx))

    def to_family(self) -> WeightedFamily:
        members = []
        for idx, buckets in enumerate(self.buckets):
            weights = {i: self.scale(j) for j, bucket in enumerate(buckets) for i in range(self.ground.n) if bucket >> i & 1}
            members.append(Member(SubsetBits(self.subset_mask(idx), self.ground.n), weights))
        return WeightedFamily(self.ground, tuple(members), self.p)


@dataclass(frozen=True, slots=True)
class WeightReport:
    index: int
    weight_before: Fraction
    weight_after: Fraction
    dropped: tuple[int, ...]
    guarantee: bool | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "weight_before": str(self.weight_before),
            "weight_after": str(self.weight_after),
            "dropped": list(self.dropped),
            "guarantee": self.guarantee,
        }


@dataclass(frozen=True, slots=True)
class ProcessedFamily:
    family: DyadicFamily
    reports: tuple[WeightReport, ...]


def preprocess_weights(F: WeightedFamily, constants: FragmentConstants = DEFAULT_CONSTANTS) -> ProcessedFamily:
    """Cap at 1, round down onto the grid base^-j and drop scales beyond tau.

    Zero-weight elements are dropped too. The guarantee flag records whether a
    member with input weight >= 1 kept weight >= base^-2.
    """
    base = constants.base
    tau = scale_cutoff(F.ground.n, base)
    buckets: list[tuple[int, ...]] = []
    reports: list[WeightReport] = []
    for idx, member in enumerate(F.members):
        masks = [0] * (tau + 1)
        dropped = []
        for elem in member.subset.elements():
            j = dyadic_exponent(member.weight(elem), base)
            if j is None or j > tau:
                dropped.append(elem)
                continue
            masks[j] |= 1 << elem
        buckets.append(tuple(masks))
        before = member.total()
        after = sum((Fraction(base) ** (-j) * m.bit_count() for j, m in enumerate(masks)), Fraction(0))
        guarantee = after >= Fraction(1, base**2) if before >= 1 else None
        if guarantee is False:
            logger.warning("member %d kept weight %s below %s after preprocessing", idx, after, Fraction(1, base**2))
        reports.append(WeightReport(idx, before, after, tuple(dropped), guarantee))
    dyadic = DyadicFamily(F.ground, F.p, tuple(buckets), tau, constants)
    return ProcessedFamily(dyadic, tuple(reports))


def _remove_ascending(mask: int, count: int) -> int:
    """Clear the count lowest set bits of mask."""
    for _ in range(count):
        mask &= mask - 1
    return mask


def regularize_profiles(D: DyadicFamily) -> ProcessedFamily:
    """Make every profile legal by removing elements in ascending id order."""
    base = D.constants.base
    limit = Fraction(2)
    buckets: list[tuple[int, ...]] = []
    reports: list[WeightReport] = []
    for idx, member_buckets in enumerate(D.buckets):
        before = D.total_weight(idx)
        original = D.subset_mask(idx)
        masks = list(member_buckets)
        weight = before
        # remove elements in ascending id until the total weight drops below 2
        for elem in range(D.ground.n):
            if weight < limit:
                break
            for j, m in enumerate(masks):
                if m >> elem & 1:
                    masks[j] = m & ~(1 << elem)
                    weight -= D.scale(j)
                    break
        for j, m in enumerate(masks):
            size = m.bit_count()
            if size == 0:
                continue
            if size < bucket_floor(j, base):
                masks[j] = 0
                continue
            target = base ** floor_log(size, base)
            masks[j] = _remove_ascending(m, size - target)
        kept = 0
        for m in masks:
            kept |= m
        buckets.append(tuple(masks))
        after = sum((D.scale(j) * m.bit_count() for j, m in enumerate(masks)), Fraction(0))
        guarantee = after >= Fraction(1, base**4) if before >= Fraction(1, base**2) else None
        if guarantee is False:
            logger.warning("member %d kept weight %s below %s after regularization", idx, after, Fraction(1, base**4))
        dropped = tuple(i for i in range(D.ground.n) if (original & ~kept) >> i & 1)
        reports.append(WeightReport(idx, before, after, dropped, guarantee))
    regular = DyadicFamily(D.ground, D.p, tuple(buckets), D.tau, D.constants)
    for idx in range(len(regular)):
        assert all(s == 0 or is_power_of(s, base) for s in regular.profile(idx))
    return ProcessedFamily(regular, tuple(reports))


def process_family(F: WeightedFamily, constants: FragmentConstants = DEFAULT_CONSTANTS) -> ProcessedFamily:
    """preprocess_weights followed by regularize_profiles; reports run from input to output weight."""
    first = preprocess_weights(F, constants)
    second = regularize_profiles(first.family)
    reports = tuple(
        WeightReport(
            a.index,
            a.weight_before,
            b.weight_after,
            tuple(sorted(set(a.dropped) | set(b.dropped))),
            b.weight_after >= Fraction(1, constants.base**4) if a.weight_before >= 1 else None,
        )
        for a, b in zip(first.reports, second.reports, strict=True)
    )
    logger.info("processed %d members with tau=%d", len(F), first.family.tau)
    return ProcessedFamily(second.family, reports)
