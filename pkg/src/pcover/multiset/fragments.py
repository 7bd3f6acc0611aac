"""Multiset fragments: dyadic processing, feasibility and the cover U(W)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..domain import DEFAULT_CONSTANTS, DEFAULT_GUARDS, FragmentConstants, Guards
from ..fragments.engine import Classification
from ..fragments.profiles import Profile, members_with_profile, partial_profile
from ..fragments.weights import WeightReport, bucket_floor, dyadic_exponent
from ..utils.errors import ConsistencyError, ParameterError, ProfileMismatchError
from ..utils.rationals import floor_log, is_power_of
from .family import MultisetFamily, MultisetMember
from .multiset import Multiset

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class DyadicMultisetFamily:
    """Members stored as bucket multisets S_0..S_tau, each copy in S_j weighing base^-j."""

    k: int
    buckets: tuple[tuple[Multiset, ...], ...]
    tau: int
    constants: FragmentConstants = DEFAULT_CONSTANTS

    def __len__(self) -> int:
        return len(self.buckets)

    def scale(self, j: int) -> Fraction:
        return Fraction(self.constants.base) ** (-j)

    def multiset(self, idx: int) -> Multiset:
        total = Multiset()
        for bucket in self.buckets[idx]:
            total = total + bucket
        return total

    def low(self, idx: int, b: int) -> Multiset:
        """S_0 + ... + S_b."""
        total = Multiset()
        for bucket in self.buckets[idx][: b + 1]:
            total = total + bucket
        return total

    def profile(self, idx: int) -> tuple[int, ...]:
        return tuple(len(bucket) for bucket in self.buckets[idx])

    def weight_of(self, idx: int, W: Multiset) -> Fraction:
        """lambda^S(S & W)."""
        return sum(
            (self.scale(j) * len(bucket & W) for j, bucket in enumerate(self.buckets[idx])),
            Fraction(0),
        )

    def uncapped_weight_of(self, idx: int, W: Multiset) -> Fraction:
        """sum_x W(x) lambda^S(x)."""
        return sum(
            (self.scale(j) * W.count(x) for j, bucket in enumerate(self.buckets[idx]) for x in bucket.support()),
            Fraction(0),
        )

    def total_weight(self, idx: int) -> Fraction:
        return self.weight_of(idx, self.multiset(idx))

    def to_family(self) -> MultisetFamily:
        members = []
        for idx, buckets in enumerate(self.buckets):
            weights = {x: self.scale(j) for j, bucket in enumerate(buckets) for x in bucket.support()}
            members.append(MultisetMember(self.multiset(idx), weights))
        return MultisetFamily(self.k, tuple(members))


@dataclass(frozen=True, slots=True)
class ProcessedMultisetFamily:
    family: DyadicMultisetFamily
    reports: tuple[WeightReport, ...]


def _drop_copies(bucket: Multiset, count: int) -> Multiset:
    """Remove count copies in ascending element order."""
    return Multiset.from_elements(bucket.expanded()[count:])


def process_multiset_family(
    F: MultisetFamily, constants: FragmentConstants = DEFAULT_CONSTANTS
) -> ProcessedMultisetFamily:
    """Cap at 1, round onto base^-j, then remove copies in ascending element order until legal.

    There is no scale cutoff: tau is the largest scale observed.
    """
    base = constants.base
    raw: list[dict[int, dict[int, int]]] = []
    tau = 0
    for member in F.members:
        by_scale: dict[int, dict[int, int]] = {}
        for x, c in member.multiset.items:
            j = dyadic_exponent(member.weight(x), base)
            if j is None:
                continue
            by_scale.setdefault(j, {})[x] = c
            tau = max(tau, j)
        raw.append(by_scale)

    scale = [Fraction(base) ** (-j) for j in range(tau + 1)]
    buckets: list[tuple[Multiset, ...]] = []
    reports: list[WeightReport] = []
    for idx, (member, by_scale) in enumerate(zip(F.members, raw, strict=True)):
        parts = [Multiset.of(by_scale.get(j, {})) for j in range(tau + 1)]
        before = member.total()
        weight = sum((scale[j] * len(part) for j, part in enumerate(parts)), Fraction(0))
        # remove one copy at a time in ascending element order until the weight drops below 2
        for x in member.multiset.expanded():
            if weight < 2:
                break
            for j, part in enumerate(parts):
                if x in part:
                    parts[j] = part - Multiset.of({x: 1})
                    weight -= scale[j]
                    break
        for j, part in enumerate(parts):
            size = len(part)
            if size == 0:
                continue
            if size < bucket_floor(j, base):
                parts[j] = Multiset()
                continue
            parts[j] = _drop_copies(part, size - base ** floor_log(size, base))
        after = sum((scale[j] * len(part) for j, part in enumerate(parts)), Fraction(0))
        kept = Multiset()
        for part in parts:
            kept = kept + part
        dropped = (member.multiset - kept).support()
        guarantee = after >= Fraction(1, base**4) if before >= 1 else None
        if guarantee is False:
            logger.warning("multiset member %d kept weight %s below %s", idx, after, Fraction(1, base**4))
        buckets.append(tuple(parts))
        reports.append(WeightReport(idx, before, after, dropped, guarantee))

    D = DyadicMultisetFamily(F.k, tuple(buckets), tau, constants)
    for idx in range(len(D)):
        assert all(s == 0 or is_power_of(s, base) for s in D.profile(idx))
    logger.info("processed %d multiset members with tau=%d", len(F), tau)
    return ProcessedMultisetFamily(D, tuple(reports))


@dataclass(frozen=True, slots=True)
class MultiFragmentResult:
    T: Multiset
    b: int
    witness: int
    s_b: Profile

    @property
    def t(self) -> int:
        return len(self.T)

    def to_dict(self) -> dict[str, Any]:
        return {
            "T": {str(x): c for x, c in self.T.items},
            "b": self.b,
            "t": self.t,
            "witness": self.witness,
            "s_b": list(self.s_b),
        }


def _feasible(D: DyadicMultisetFamily, idx: int, Z: Multiset, b: int, t: int) -> bool:
    buckets = D.buckets[idx]
    low = buckets[: b + 1]
    if not all(bucket <= Z for bucket in low):
        return False
    n_b = sum(len(bucket) for bucket in low)
    high = range(b + 1, D.tau + 1)
    upper = sum((D.scale(j) * len(buckets[j]) for j in high), Fraction(0))
    captured = sum((D.scale(j) * len(buckets[j] & Z) for j in high), Fraction(0))
    return captured >= D.constants.capture * (upper - D.scale(b) * (n_b - t))


def is_feasible_multi(D: DyadicMultisetFamily, idx: int, Z: Multiset, b: int, s_b: Profile, t: int) -> bool:
    if len(s_b) != b + 1:
        raise ParameterError(f"partial profile of length {len(s_b)} does not match index b={b}")
    if partial_profile(D, idx, b) != tuple(s_b):
        raise ProfileMismatchError(f"member {idx} has partial profile {partial_profile(D, idx, b)}, not {tuple(s_b)}")
    return _feasible(D, idx, Z, b, t)


def feasible_witnesses_multi(D: DyadicMultisetFamily, Z: Multiset, b: int, s_b: Profile, t: int) -> list[int]:
    return [idx for idx in members_with_profile(D, tuple(s_b)) if _feasible(D, idx, Z, b, t)]


def is_fragment_multi(D: DyadicMultisetFamily, U: Multiset, S: int, W: Multiset, b: int) -> tuple[bool, int | None]:
    if not U <= D.multiset(S) - W:
        raise ParameterError("U must lie inside S \\ W")
    s_b = partial_profile(D, S, b)
    for idx in members_with_profile(D, s_b):
        if _feasible(D, idx, W + U, b, len(U)):
            return True, idx
    return False, None


def minimum_fragment_multi(
    D: DyadicMultisetFamily, S: int, W: Multiset, guards: Guards = DEFAULT_GUARDS
) -> MultiFragmentResult:
    """Smallest index b, then smallest |T|, then T with the lexicographically smallest sorted copies."""
    free = D.multiset(S) - W
    guards.check("fragment_search", len(free))
    for b in range(-1, D.tau + 1):
        s_b = partial_profile(D, S, b)
        peers = members_with_profile(D, s_b)
        region = Multiset()
        for idx in peers:
            region = region | D.low(idx, b)
        region = (region - W) & free
        for k in range(min(len(region), sum(s_b)) + 1):
            for U in region.sub_multisets_of_size(k):
                Z = W + U
                for idx in peers:
                    if _feasible(D, idx, Z, b, k):
                        return MultiFragmentResult(U, b, idx, s_b)
    raise ConsistencyError(f"multiset member {S} has no fragment; S \\ W should be one with index {D.tau}")


def fragments_for_multi(
    D: DyadicMultisetFamily, W: Multiset, guards: Guards = DEFAULT_GUARDS
) -> list[MultiFragmentResult]:
    return [minimum_fragment_multi(D, idx, W, guards) for idx in range(len(D))]


def build_cover_multi(D: DyadicMultisetFamily, W: Multiset, guards: Guards = DEFAULT_GUARDS) -> list[Multiset]:
    """U(W) without repeats, sorted by copies."""
    unique = {r.T for r in fragments_for_multi(D, W, guards)}
    return sorted(unique, key=Multiset.sort_key)


def classify_multi(D: DyadicMultisetFamily, W: Multiset, threshold: Fraction | None = None) -> Classification:
    """Bad when max_S sum_x W(x) lambda^S(x) falls below the threshold; multiplicities of W are not capped."""
    level = D.constants.bad_threshold if threshold is None else threshold
    best = max((D.uncapped_weight_of(idx, W) for idx in range(len(D))), default=Fraction(0))
    return "good" if best >= level else "bad"


def check_multi_fragment_properties(
    D: DyadicMultisetFamily, S: int, W: Multiset, result: MultiFragmentResult
) -> list[str]:
    violations: list[str] = []
    T = result.T
    if not T <= D.multiset(S) - W:
        violations.append(f"T={T} is not inside S \\ W")
    witnesses = feasible_witnesses_multi(D, W + T, result.b, result.s_b, result.t)
    if result.witness not in witnesses:
        violations.append(f"stored witness {result.witness} is not feasible")
    for idx in witnesses:
        S_prime = D.multiset(idx)
        if D.low(idx, result.b) - W != T:
            violations.append(f"witness {idx}: low buckets minus W differ from T")
        for x in T.support():
            if W.count(x) >= S_prime.count(x):
                violations.append(f"witness {idx}: W({x})={W.count(x)} not below S'({x})={S_prime.count(x)}")
    if result.t < D.constants.profile_fraction * sum(result.s_b):
        violations.append(f"t={result.t} below {D.constants.profile_fraction} * n_b={sum(result.s_b)}")
    if classify_multi(D, W) == "bad" and result.b < 0:
        violations.append("bad W with index -1")
    return violations
