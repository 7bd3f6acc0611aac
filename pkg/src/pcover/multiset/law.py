"""The multinomial law of the multiset of N independent samples."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..selector.sampling import make_rng
from ..utils.errors import ParameterError
from ..utils.rationals import Number, to_fraction
from .multiset import Multiset


@dataclass(frozen=True, slots=True)
class MultisetDistribution:
    """mu over elements 0..k-1, N samples, and the multiplier K for the size M = K N law."""

    mu: tuple[Fraction, ...]
    N: int
    K: int = 1

    def __post_init__(self) -> None:
        if not self.mu:
            raise ParameterError("mu must have at least one element")
        if any(m < 0 for m in self.mu):
            raise ParameterError("mu has a negative entry")
        if sum(self.mu) != 1:
            raise ParameterError(f"mu sums to {sum(self.mu)}, not 1")
        if self.N < 1 or self.K < 1:
            raise ParameterError(f"need N >= 1 and K >= 1, got N={self.N} K={self.K}")

    @classmethod
    def of(cls, mu: Iterable[Number], N: int, K: int = 1) -> MultisetDistribution:
        return cls(tuple(to_fraction(m) for m in mu), N, K)

    @property
    def M(self) -> int:
        return self.K * self.N

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(range(len(self.mu)))

    def probabilities(self) -> np.ndarray:
        probs = np.array([float(m) for m in self.mu])
        return probs / probs.sum()


def multiset_prob(W: Multiset, mu: Sequence[Fraction], size: int) -> Fraction:
    """size! prod mu(x)^W(x) / W(x)!, the probability that `size` samples form W."""
    if len(W) != size:
        raise ParameterError(f"multiset of size {len(W)} under a law of size {size}")
    value = Fraction(math.factorial(size))
    for x, c in W.items:
        value *= mu[x] ** c / math.factorial(c)
    return value


def sample_multiset(dist: MultisetDistribution, seed: int, stream: int = 0, size: int | None = None) -> Multiset:
    """N i.i.d. categorical draws aggregated into counts."""
    rng = make_rng(seed, stream)
    draws = rng.choice(len(dist.mu), size=dist.N if size is None else size, p=dist.probabilities())
    return Multiset.from_elements([int(d) for d in draws])


def sample_counts(rng: np.random.Generator, dist: MultisetDistribution, trials: int, size: int | None = None) -> np.ndarray:
    """(trials, k) count matrix; each row is the multiset of `size` categorical draws."""
    draws = rng.choice(len(dist.mu), size=(trials, dist.N if size is None else size), p=dist.probabilities())
    counts = np.zeros((trials, len(dist.mu)), dtype=np.int64)
    np.add.at(counts, (np.arange(trials)[:, None], draws), 1)
    return counts
