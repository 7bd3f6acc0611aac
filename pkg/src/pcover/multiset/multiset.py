"""Multisets over integer element ids."""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations, product

from ..utils.errors import ParameterError


@dataclass(frozen=True, slots=True)
class Multiset:
    """Sorted (element, count) pairs; zero counts are never stored."""

    items: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, counts: Mapping[int, int]) -> Multiset:
        for elem, count in counts.items():
            if count < 0:
                raise ParameterError(f"negative multiplicity {count} for element {elem}")
        return cls(tuple(sorted((int(e), int(c)) for e, c in counts.items() if c > 0)))

    @classmethod
    def from_elements(cls, elems: Sequence[int]) -> Multiset:
        counts: dict[int, int] = {}
        for elem in elems:
            counts[elem] = counts.get(elem, 0) + 1
        return cls.of(counts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def count(self, elem: int) -> int:
        for e, c in self.items:
            if e == elem:
                return c
        return 0

    def support(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.items)

    def expanded(self) -> tuple[int, ...]:
        """Each element repeated by its multiplicity, in ascending order."""
        return tuple(e for e, c in self.items for _ in range(c))

    def __len__(self) -> int:
        return sum(c for _, c in self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __contains__(self, elem: object) -> bool:
        return any(e == elem for e, _ in self.items)

    def _pointwise(self, other: Multiset, op) -> Multiset:
        a, b = self.as_dict(), other.as_dict()
        return Multiset.of({x: op(a.get(x, 0), b.get(x, 0)) for x in a.keys() | b.keys()})

    def __or__(self, other: Multiset) -> Multiset:
        return self._pointwise(other, max)

    def __and__(self, other: Multiset) -> Multiset:
        return self._pointwise(other, min)

    def __add__(self, other: Multiset) -> Multiset:
        return self._pointwise(other, lambda x, y: x + y)

    def __sub__(self, other: Multiset) -> Multiset:
        return self._pointwise(other, lambda x, y: max(x - y, 0))

    def issubset(self, other: Multiset) -> bool:
        b = other.as_dict()
        return all(c <= b.get(e, 0) for e, c in self.items)

    __le__ = issubset

    def sub_multisets(self) -> Iterator[Multiset]:
        """Every T with T <= self, in lexicographic order of count vectors."""
        elems = self.support()
        for counts in product(*(range(c + 1) for _, c in self.items)):
            yield Multiset.of(dict(zip(elems, counts, strict=True)))

    def sub_multisets_of_size(self, k: int) -> Iterator[Multiset]:
        """Size-k sub-multisets, ordered lexicographically by their sorted element sequences."""
        seen: set[tuple[int, ...]] = set()
        for combo in combinations(self.expanded(), k):
            if combo not in seen:
                seen.add(combo)
                yield Multiset.from_elements(combo)

    def sort_key(self) -> tuple[int, ...]:
        return self.expanded()

    def __repr__(self) -> str:
        return "{" + ",".join(f"{e}:{c}" for e, c in self.items) + "}"


def mset_union(a: Multiset, b: Multiset) -> Multiset:
    return a | b


def mset_intersect(a: Multiset, b: Multiset) -> Multiset:
    return a & b


def mset_sum(a: Multiset, b: Multiset) -> Multiset:
    return a + b


def mset_diff(a: Multiset, b: Multiset) -> Multiset:
    return a - b


def mset_subset(a: Multiset, b: Multiset) -> bool:
    return a.issubset(b)


def _colex(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for head in _colex(parts - 1, total - last):
            yield (*head, last)


def enumerate_multisets(support: Sequence[int], N: int) -> Iterator[Multiset]:
    """All multisets of size N over support, by stars and bars in colex order of count vectors."""
    if N < 0:
        raise ParameterError(f"size must be nonnegative, got {N}")
    if not support:
        if N == 0:
            yield Multiset()
        return
    for counts in _colex(len(support), N):
        yield Multiset.of(dict(zip(support, counts, strict=True)))


def count_multisets(k: int, N: int) -> int:
    """|M_N(X)| for |X| = k."""
    return math.comb(N + k - 1, k - 1) if k else int(N == 0)
