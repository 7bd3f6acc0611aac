"""Weighted multiset families and the threshold family of a sequence collection."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from ..domain import DEFAULT_GUARDS, Guards
from ..selector.expectations import LambdaCollection
from ..utils.errors import ParameterError
from ..utils.rationals import Number, to_fraction
from .law import multiset_prob
from .multiset import Multiset, count_multisets, enumerate_multisets

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class MultisetMember:
    multiset: Multiset
    weights: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for elem, weight in self.weights.items():
            if weight < 0:
                raise ParameterError(f"negative weight {weight} on element {elem}")

    def weight(self, elem: int) -> Fraction:
        return self.weights.get(elem, Fraction(0))

    def weight_of(self, W: Multiset) -> Fraction:
        """sum_i W(i) lambda^S(i), multiplicities of W uncapped."""
        return sum((c * self.weight(x) for x, c in W.items), Fraction(0))

    def capped_weight_of(self, W: Multiset) -> Fraction:
        """sum_i min(W(i), S(i)) lambda^S(i)."""
        return self.weight_of(W & self.multiset)

    def total(self) -> Fraction:
        return self.weight_of(self.multiset)


@dataclass(frozen=True, slots=True)
class MultisetFamily:
    k: int
    members: tuple[MultisetMember, ...]

    def __post_init__(self) -> None:
        for idx, member in enumerate(self.members):
            if any(not 0 <= x < self.k for x in member.multiset.support()):
                raise ParameterError(f"member {idx} uses an element outside 0..{self.k - 1}")

    @classmethod
    def of(
        cls, k: int, multisets: Sequence[Mapping[int, int]], weights: Sequence[Mapping[int, Number]] | None = None
    ) -> MultisetFamily:
        """Missing weights default to 1 on the support."""
        sets = [Multiset.of(m) for m in multisets]
        if weights is None:
            maps: list[Mapping[int, Number]] = [{x: 1 for x in s.support()} for s in sets]
        else:
            maps = list(weights)
        members = tuple(
            MultisetMember(s, {int(x): to_fraction(v) for x, v in w.items()}) for s, w in zip(sets, maps, strict=True)
        )
        return cls(k, members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[MultisetMember]:
        return iter(self.members)

    def multisets(self) -> list[Multiset]:
        return [m.multiset for m in self.members]

    def sup_weight(self, W: Multiset, capped: bool = False) -> Fraction:
        values = (m.capped_weight_of(W) if capped else m.weight_of(W) for m in self.members)
        return max(values, default=Fraction(0))


def sup_lambda(lam: LambdaCollection, W: Multiset) -> Fraction:
    """max over sequences of sum_x W(x) lambda_x."""
    return max(sum((c * vec[x] for x, c in W.items), Fraction(0)) for vec in lam.vectors)


def expected_sup_multiset(
    lam: LambdaCollection, mu: Sequence[Fraction], size: int, guards: Guards = DEFAULT_GUARDS
) -> Fraction:
    """E sup_lambda sum_x W(x) lambda_x under the law of `size` samples, by exact enumeration."""
    support = tuple(range(len(mu)))
    guards.check("multisets", count_multisets(len(support), size))
    return sum(
        (multiset_prob(W, mu, size) * sup_lambda(lam, W) for W in enumerate_multisets(support, size)),
        Fraction(0),
    )


def threshold_multiset_family(
    lam: LambdaCollection,
    mu: Sequence[Fraction],
    N: int,
    L: Number,
    M: Number | None = None,
    guards: Guards = DEFAULT_GUARDS,
) -> MultisetFamily:
    """Multisets S of size N with sup_lambda sum S(x) lambda_x >= L M, weighted by their first maximizer on supp S.

    M defaults to the exact expectation under the size-N law.
    """
    if lam.n != len(mu):
        raise ParameterError(f"sequences over {lam.n} elements, mu over {len(mu)}")
    M_exact = expected_sup_multiset(lam, mu, N, guards) if M is None else to_fraction(M)
    level = to_fraction(L) * M_exact
    members = []
    for S in enumerate_multisets(tuple(range(len(mu))), N):
        totals = [sum((c * vec[x] for x, c in S.items), Fraction(0)) for vec in lam.vectors]
        best = max(totals)
        if best >= level:
            vec = lam.vectors[totals.index(best)]
            members.append(MultisetMember(S, {x: vec[x] for x in S.support()}))
    logger.info("threshold multiset family at level %s has %d members", level, len(members))
    return MultisetFamily(len(mu), tuple(members))
