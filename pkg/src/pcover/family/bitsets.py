"""Ground sets and subsets stored as integer bitmasks."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from itertools import combinations

from ..utils.errors import GroundSetMismatch, ParameterError


@dataclass(frozen=True, slots=True)
class GroundSet:
    """Elements are the ids 0..n-1."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"ground set needs n >= 1, got {self.n}")

    def subset(self, elems: Iterable[int]) -> SubsetBits:
        mask = 0
        for elem in elems:
            if not 0 <= elem < self.n:
                raise ParameterError(f"element {elem} outside ground set of size {self.n}")
            mask |= 1 << elem
        return SubsetBits(mask, self.n)

    @property
    def empty(self) -> SubsetBits:
        return SubsetBits(0, self.n)

    @property
    def full(self) -> SubsetBits:
        return SubsetBits((1 << self.n) - 1, self.n)

    def all_subsets(self) -> Iterator[SubsetBits]:
        for mask in range(1 << self.n):
            yield SubsetBits(mask, self.n)

    def subsets_of_size(self, w: int) -> Iterator[SubsetBits]:
        """All w-subsets in lexicographic order of their sorted element tuples."""
        for combo in combinations(range(self.n), w):
            yield self.subset(combo)


@dataclass(frozen=True, slots=True)
class SubsetBits:
    mask: int
    n: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.n:
            raise ParameterError(f"mask {self.mask:#x} has bits outside a ground set of size {self.n}")

    def elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def __contains__(self, elem: object) -> bool:
        return isinstance(elem, int) and 0 <= elem < self.n and bool(self.mask >> elem & 1)

    def _check(self, other: SubsetBits) -> None:
        if self.n != other.n:
            raise GroundSetMismatch(f"subsets over ground sets of size {self.n} and {other.n}")

    def issubset(self, other: SubsetBits) -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __or__(self, other: SubsetBits) -> SubsetBits:
        self._check(other)
        return SubsetBits(self.mask | other.mask, self.n)

    def __and__(self, other: SubsetBits) -> SubsetBits:
        self._check(other)
        return SubsetBits(self.mask & other.mask, self.n)

    def __sub__(self, other: SubsetBits) -> SubsetBits:
        self._check(other)
        return SubsetBits(self.mask & ~other.mask, self.n)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.elements())) + "}"


def submasks(mask: int) -> Iterator[int]:
    """Every submask of mask, mask itself first and 0 last."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def upset_contains(T: SubsetBits, S: SubsetBits) -> bool:
    """True iff S lies in the upset generated by T, i.e. T is a subset of S."""
    return T.issubset(S)
