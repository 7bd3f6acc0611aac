"""Legal profiles and partial profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .weights import DyadicFamily, bucket_floor

Profile = tuple[int, ...]


def legal_values(j: int, n: int | None = None, base: int = 100) -> list[int]:
    """Nonzero legal values of s_j: powers of base in [floor_j, 2 base^j), capped at n when given."""
    floor = bucket_floor(j, base)
    values = [base**k for k in range(j + 1) if base**k >= floor]
    if n is not None:
        values = [v for v in values if v <= n]
    return values


def is_legal(profile: Profile, base: int = 100) -> bool:
    """Each nonzero s_j is a power of base inside its legal range; zeros are unconstrained."""
    return all(s == 0 or s in legal_values(j, base=base) for j, s in enumerate(profile))


def enumerate_legal_partial_profiles(b: int, n: int | None = None, base: int = 100) -> list[Profile]:
    """All legal (s_0..s_b) including the all-zero one; b = -1 gives the single empty profile."""
    options = [[0, *legal_values(j, n, base)] for j in range(b + 1)]
    return [tuple(choice) for choice in product(*options)]


def partial_profile(D: DyadicFamily, idx: int, b: int) -> Profile:
    return D.profile(idx)[: b + 1]


def members_with_profile(D: DyadicFamily, s_b: Profile) -> list[int]:
    """F_{s_b}: member indices whose first len(s_b) bucket sizes equal s_b."""
    b = len(s_b) - 1
    return [idx for idx in range(len(D)) if partial_profile(D, idx, b) == s_b]


@dataclass(frozen=True, slots=True)
class CoordinateCount:
    j: int
    exact: int
    bound: float

    @property
    def holds(self) -> bool:
        return self.exact <= self.bound + 1


def profile_count_bound(b: int, base: int = 100) -> list[CoordinateCount]:
    """Per coordinate, the exact number of legal s_j values (zero included) against log_base(2 base^4 (j+1)^2)."""
    return [
        CoordinateCount(j, 1 + len(legal_values(j, base=base)), math.log(2 * base**4 * (j + 1) ** 2, base))
        for j in range(b + 1)
    ]
