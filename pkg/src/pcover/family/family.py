"""Weighted set families, covers and their costs."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy.special import logsumexp

from ..utils.errors import GroundSetMismatch, ParameterError
from ..utils.rationals import Number, to_fraction
from .bitsets import GroundSet, SubsetBits

if TYPE_CHECKING:
    from ..multiset.expoly import ExpPolynomial

CostMode = Literal["plain-p", "poissonized"]


def check_probability(p: Number) -> Fraction:
    value = to_fraction(p)
    if not 0 < value < 1:
        raise ParameterError(f"p must lie in (0, 1), got {value}")
    return value


@dataclass(frozen=True, slots=True)
class Member:
    """A set S with its weight sequence; weights off S are implicitly zero."""

    subset: SubsetBits
    weights: Mapping[int, Fraction] = field(default_factory=dict)

    def weight(self, elem: int) -> Fraction:
        return self.weights.get(elem, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def captured(self, mask: int) -> Fraction:
        """Weight of S inside the given mask."""
        return sum((w for i, w in self.weights.items() if mask >> i & 1), Fraction(0))


@dataclass(frozen=True, slots=True)
class WeightedFamily:
    ground: GroundSet
    members: tuple[Member, ...]
    p: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", check_probability(self.p))
        for idx, member in enumerate(self.members):
            if member.subset.n != self.ground.n:
                raise GroundSetMismatch(f"member {idx} is over a ground set of size {member.subset.n}")
            for elem, weight in member.weights.items():
                if elem not in member.subset:
                    raise ParameterError(f"member {idx}: weight given for element {elem} outside the set")
                if weight < 0:
                    raise ParameterError(f"member {idx}: negative weight {weight} on element {elem}")

    @classmethod
    def from_sets(
        cls,
        n: int,
        sets: Iterable[Iterable[int]],
        p: Number,
        weights: Iterable[Mapping[int, Number]] | None = None,
    ) -> WeightedFamily:
        """Build a family; missing weights default to 1 on every element."""
        ground = GroundSet(n)
        subsets = [ground.subset(s) for s in sets]
        if weights is None:
            weight_maps: list[Mapping[int, Number]] = [{i: 1 for i in s} for s in subsets]
        else:
            weight_maps = list(weights)
        members = tuple(
            Member(subset, {int(i): to_fraction(w) for i, w in wmap.items()})
            for subset, wmap in zip(subsets, weight_maps, strict=True)
        )
        return cls(ground, members, to_fraction(p))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Member]:
        return iter(self.members)

    def subsets(self) -> list[SubsetBits]:
        return [m.subset for m in self.members]

    def with_members(self, members: Sequence[Member]) -> WeightedFamily:
        return WeightedFamily(self.ground, tuple(members), self.p)


@dataclass(frozen=True, slots=True)
class Cover:
    elements: tuple[SubsetBits, ...]
    cost_mode: CostMode = "plain-p"

    def canonical(self) -> Cover:
        """Deduplicated and sorted by bitmask."""
        unique = {e.mask: e for e in self.elements}
        return Cover(tuple(unique[m] for m in sorted(unique)), self.cost_mode)

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(e.mask for e in self.elements))

    def __len__(self) -> int:
        return len(self.elements)


def covers(G: Cover, F: WeightedFamily) -> bool:
    """Every member of F contains some element of G."""
    for element in G.elements:
        if element.n != F.ground.n:
            raise GroundSetMismatch(f"cover element over ground set of size {element.n}, family has {F.ground.n}")
    masks = [e.mask for e in G.elements]
    return all(any(t & ~m.subset.mask == 0 for t in masks) for m in F.members)


def cover_cost(
    G: Cover,
    p: Number | None = None,
    *,
    arithmetic: Literal["exact", "float"] = "exact",
    mu: Mapping[int, Number] | None = None,
    N: int | None = None,
) -> Fraction | float | ExpPolynomial:
    """Sum of p^|T| over the cover, or the Poissonized cost when the cover asks for it."""
    if G.cost_mode == "poissonized":
        if mu is None or N is None:
            raise ParameterError("poissonized covers need mu and N")
        from ..multiset.multiset import Multiset
        from ..multiset.poisson import poissonized_cover_cost

        elements = [Multiset.of({i: 1 for i in e.elements()}) for e in G.elements]
        exact = poissonized_cover_cost(elements, {k: to_fraction(v) for k, v in mu.items()}, N)
        return exact if arithmetic == "exact" else float(exact)
    if p is None:
        raise ParameterError("plain-p covers need p")
    p_exact = check_probability(p)
    if arithmetic == "float":
        return math.exp(log_cover_cost(G, p_exact)) if G.elements else 0.0
    return sum((p_exact ** len(e) for e in G.elements), Fraction(0))


def log_cover_cost(G: Cover, p: Number) -> float:
    """log of the plain cost, computed with logsumexp so tiny p^|T| do not underflow."""
    p_exact = check_probability(p)
    if not G.elements:
        return -math.inf
    sizes = np.array([len(e) for e in G.elements], dtype=float)
    return float(logsumexp(sizes * math.log(p_exact)))
