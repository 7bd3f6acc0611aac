"""Fragments, feasibility and the cover U(W)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Literal

from ..domain import DEFAULT_GUARDS, Guards
from ..family import Cover, SubsetBits, WeightedFamily
from ..utils.errors import ConsistencyError, GroundSetMismatch, ParameterError, ProfileMismatchError
from .profiles import Profile, members_with_profile, partial_profile
from .weights import DyadicFamily

logger = logging.getLogger(__name__)

Classification = Literal["good", "bad"]


@dataclass(frozen=True, slots=True)
class FragmentResult:
    T: SubsetBits
    b: int
    witness: int
    s_b: Profile

    @property
    def t(self) -> int:
        return len(self.T)

    def to_dict(self) -> dict[str, Any]:
        return {"T": list(self.T.elements()), "b": self.b, "t": self.t, "witness": self.witness, "s_b": list(self.s_b)}


def _mask(D: DyadicFamily, value: SubsetBits | int) -> int:
    if isinstance(value, SubsetBits):
        if value.n != D.ground.n:
            raise GroundSetMismatch(f"subset over {value.n} elements, family over {D.ground.n}")
        return value.mask
    return value


def _feasible(D: DyadicFamily, idx: int, z: int, b: int, t: int) -> bool:
    buckets = D.buckets[idx]
    low = buckets[: b + 1]
    if any(bucket & ~z for bucket in low):
        return False
    n_b = sum(bucket.bit_count() for bucket in low)
    high = range(b + 1, D.tau + 1)
    upper = sum((D.scale(j) * buckets[j].bit_count() for j in high), Fraction(0))
    captured = sum((D.scale(j) * (buckets[j] & z).bit_count() for j in high), Fraction(0))
    return captured >= D.constants.capture * (upper - D.scale(b) * (n_b - t))


def is_feasible(D: DyadicFamily, idx: int, Z: SubsetBits | int, b: int, s_b: Profile, t: int) -> bool:
    """(Z, b, s_b, t)-feasibility of member idx, in exact rationals."""
    if len(s_b) != b + 1:
        raise ParameterError(f"partial profile of length {len(s_b)} does not match index b={b}")
    if partial_profile(D, idx, b) != tuple(s_b):
        raise ProfileMismatchError(f"member {idx} has partial profile {partial_profile(D, idx, b)}, not {tuple(s_b)}")
    return _feasible(D, idx, _mask(D, Z), b, t)


def feasible_witnesses(D: DyadicFamily, Z: SubsetBits | int, b: int, s_b: Profile, t: int) -> list[int]:
    """Every member of F_{s_b} that is (Z, b, s_b, t)-feasible."""
    z = _mask(D, Z)
    return [idx for idx in members_with_profile(D, tuple(s_b)) if _feasible(D, idx, z, b, t)]


def is_fragment(D: DyadicFamily, U: SubsetBits | int, S: int, W: SubsetBits | int, b: int) -> tuple[bool, int | None]:
    """Whether U is an (S, W)-fragment with index b, with the first witness in member order."""
    u, w = _mask(D, U), _mask(D, W)
    if u & ~(D.subset_mask(S) & ~w):
        raise ParameterError("U must lie inside S \\ W")
    s_b = partial_profile(D, S, b)
    for idx in members_with_profile(D, s_b):
        if _feasible(D, idx, w | u, b, u.bit_count()):
            return True, idx
    return False, None


def minimum_fragment(D: DyadicFamily, S: int, W: SubsetBits | int, guards: Guards = DEFAULT_GUARDS) -> FragmentResult:
    """Smallest index b first, then smallest |T|, then the lexicographically smallest T."""
    w = _mask(D, W)
    free = D.subset_mask(S) & ~w
    guards.check("fragment_search", free.bit_count())
    for b in range(-1, D.tau + 1):
        s_b = partial_profile(D, S, b)
        peers = members_with_profile(D, s_b)
        # a minimum-size fragment lies in the low buckets of its witness
        region = 0
        for idx in peers:
            for bucket in D.buckets[idx][: b + 1]:
                region |= bucket
        region &= free
        elems = [i for i in range(D.ground.n) if region >> i & 1]
        for k in range(min(len(elems), sum(s_b)) + 1):
            for combo in combinations(elems, k):
                u = sum(1 << i for i in combo)
                for idx in peers:
                    if _feasible(D, idx, w | u, b, k):
                        return FragmentResult(SubsetBits(u, D.ground.n), b, idx, s_b)
    raise ConsistencyError(f"member {S} has no fragment; S \\ W should be one with index {D.tau}")


def fragments_for(D: DyadicFamily, W: SubsetBits | int, guards: Guards = DEFAULT_GUARDS) -> list[FragmentResult]:
    return [minimum_fragment(D, idx, W, guards) for idx in range(len(D))]


def build_cover(D: DyadicFamily, W: SubsetBits | int, guards: Guards = DEFAULT_GUARDS) -> Cover:
    """U(W) = {T(S, W) : S in F}, deduplicated."""
    return Cover(tuple(r.T for r in fragments_for(D, W, guards))).canonical()


def captured_weight(F: DyadicFamily | WeightedFamily, W: SubsetBits | int) -> Fraction:
    """max over members of the weight they keep inside W."""
    if isinstance(F, DyadicFamily):
        w = _mask(F, W)
        return max((F.weight_of(idx, w) for idx in range(len(F))), default=Fraction(0))
    w = W.mask if isinstance(W, SubsetBits) else W
    return max((m.captured(w) for m in F.members), default=Fraction(0))


def classify_W(F: DyadicFamily | WeightedFamily, W: SubsetBits | int, threshold: Fraction | None = None) -> Classification:
    if threshold is None:
        threshold = F.constants.bad_threshold if isinstance(F, DyadicFamily) else Fraction(1, 10**10)
    return "good" if captured_weight(F, W) >= threshold else "bad"


def check_fragment_properties(
    D: DyadicFamily, S: int, W: SubsetBits | int, result: FragmentResult
) -> list[str]:
    """Violations of the structural properties of a minimum fragment; empty when all hold."""
    w = _mask(D, W)
    t_mask = result.T.mask
    violations: list[str] = []
    if t_mask & ~(D.subset_mask(S) & ~w):
        violations.append(f"T={result.T} is not inside S \\ W")
    witnesses = feasible_witnesses(D, w | t_mask, result.b, result.s_b, result.t)
    if result.witness not in witnesses:
        violations.append(f"stored witness {result.witness} is not feasible")
    for idx in witnesses:
        low = 0
        for bucket in D.buckets[idx][: result.b + 1]:
            low |= bucket
        if low & ~w != t_mask:
            violations.append(f"witness {idx}: low buckets minus W differ from T")
    if result.t < D.constants.profile_fraction * sum(result.s_b):
        violations.append(f"t={result.t} below {D.constants.profile_fraction} * n_b={sum(result.s_b)}")
    if classify_W(D, w) == "bad" and result.b < 0:
        violations.append("bad W with index -1")
    return violations
