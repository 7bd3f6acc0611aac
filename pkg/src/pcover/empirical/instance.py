"""Finite-support empirical processes."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..domain import DEFAULT_GUARDS, Guards
from ..multiset.law import multiset_prob
from ..multiset.multiset import Multiset, count_multisets, enumerate_multisets
from ..utils.errors import ParameterError
from ..utils.rationals import Number, to_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class FiniteEmpiricalInstance:
    """Points of a finite sample space, their law nu, nonnegative functions on them, and N samples."""

    points: tuple[str, ...]
    nu: tuple[Fraction, ...]
    functions: tuple[tuple[Fraction, ...], ...]
    N: int

    def __post_init__(self) -> None:
        if not self.points:
            raise ParameterError("the sample space is empty")
        if len(self.nu) != len(self.points):
            raise ParameterError(f"nu has {len(self.nu)} entries for {len(self.points)} points")
        if any(v <= 0 for v in self.nu):
            raise ParameterError("nu must be positive on every point; drop points of zero mass")
        if sum(self.nu) != 1:
            raise ParameterError(f"nu must sum to 1, sums to {sum(self.nu)}")
        if not self.functions:
            raise ParameterError("at least one function is required")
        for i, f in enumerate(self.functions):
            if len(f) != len(self.points):
                raise ParameterError(f"function {i} has {len(f)} values for {len(self.points)} points")
            if any(v < 0 for v in f):
                raise ParameterError(f"function {i} takes a negative value")
        if self.N < 1:
            raise ParameterError(f"N must be at least 1, got {self.N}")

    @classmethod
    def of(
        cls,
        points: Sequence[Any],
        nu: Sequence[Number],
        functions: Sequence[Sequence[Number]],
        N: int,
    ) -> FiniteEmpiricalInstance:
        return cls(
            tuple(str(p) for p in points),
            tuple(to_fraction(v) for v in nu),
            tuple(tuple(to_fraction(v) for v in f) for f in functions),
            int(N),
        )

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def M(self) -> int:
        return len(self.functions)

    @property
    def U(self) -> Fraction:
        """max_i sup f_i."""
        return max(max(f) for f in self.functions)

    def Z(self, sample: Sequence[int]) -> tuple[Fraction, ...]:
        """(1/N) sum_j f_i(Y_j) for every function."""
        return tuple(sum((f[y] for y in sample), Fraction(0)) / self.N for f in self.functions)

    def sup_Z(self, sample: Sequence[int]) -> Fraction:
        return max(self.Z(sample))

    def sup_Z_counts(self, W: Multiset) -> Fraction:
        """sup Z_f for any sample whose points form W."""
        return max(sum((c * f[y] for y, c in W.items), Fraction(0)) for f in self.functions) / self.N

    def tuple_probability(self, sample: Sequence[int]) -> Fraction:
        prob = Fraction(1)
        for y in sample:
            prob *= self.nu[y]
        return prob

    def scaled(self, c: Number) -> FiniteEmpiricalInstance:
        factor = to_fraction(c)
        return FiniteEmpiricalInstance(
            self.points, self.nu, tuple(tuple(v * factor for v in f) for f in self.functions), self.N
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "points": list(self.points),
            "nu": [str(v) for v in self.nu],
            "functions": [[str(v) for v in f] for f in self.functions],
            "N": self.N,
        }


def expected_sup_Z(instance: FiniteEmpiricalInstance, guards: Guards = DEFAULT_GUARDS) -> Fraction:
    """E sup_i Z_{f_i}, exactly, through the multinomial law of the point counts."""
    guards.check("multisets", count_multisets(instance.size, instance.N))
    return sum(
        (
            multiset_prob(W, instance.nu, instance.N) * instance.sup_Z_counts(W)
            for W in enumerate_multisets(tuple(range(instance.size)), instance.N)
        ),
        Fraction(0),
    )


def normalize(
    instance: FiniteEmpiricalInstance, guards: Guards = DEFAULT_GUARDS
) -> tuple[FiniteEmpiricalInstance, Fraction]:
    """Rescale so that E sup Z_f = 1; returns the rescaled instance and the factor applied."""
    expectation = expected_sup_Z(instance, guards)
    if expectation <= 0:
        raise ParameterError("E sup Z_f is zero; nothing to normalize")
    factor = 1 / expectation
    logger.info("normalizing by %s", factor)
    return instance.scaled(factor), factor
