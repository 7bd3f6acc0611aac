"""Exact numbers of the form sum_k c_k e^k with rational c_k."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering

Scalar = int | Fraction


@lru_cache(maxsize=None)
def e_bounds(terms: int) -> tuple[Fraction, Fraction]:
    """Rational lo < e < hi from the partial sum of 1/i! and its tail bound 1/(m! m)."""
    lo = Fraction(0)
    fact = 1
    for i in range(terms + 1):
        if i:
            fact *= i
        lo += Fraction(1, fact)
    return lo, lo + Fraction(1, fact * terms)


@total_ordering
@dataclass(frozen=True, slots=True)
class ExpPolynomial:
    coeffs: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[int, Scalar]) -> ExpPolynomial:
        return cls(tuple(sorted((int(k), Fraction(c)) for k, c in coeffs.items() if c != 0)))

    @classmethod
    def term(cls, coeff: Scalar, power: int) -> ExpPolynomial:
        return cls.of({power: coeff})

    @classmethod
    def coerce(cls, value: ExpPolynomial | Scalar) -> ExpPolynomial:
        return value if isinstance(value, ExpPolynomial) else cls.of({0: value})

    def __add__(self, other: ExpPolynomial | Scalar) -> ExpPolynomial:
        merged = dict(self.coeffs)
        for k, c in ExpPolynomial.coerce(other).coeffs:
            merged[k] = merged.get(k, Fraction(0)) + c
        return ExpPolynomial.of(merged)

    __radd__ = __add__

    def __neg__(self) -> ExpPolynomial:
        return ExpPolynomial(tuple((k, -c) for k, c in self.coeffs))

    def __sub__(self, other: ExpPolynomial | Scalar) -> ExpPolynomial:
        return self + -ExpPolynomial.coerce(other)

    def __rsub__(self, other: Scalar) -> ExpPolynomial:
        return ExpPolynomial.coerce(other) - self

    def __mul__(self, other: ExpPolynomial | Scalar) -> ExpPolynomial:
        result: dict[int, Fraction] = {}
        for k1, c1 in self.coeffs:
            for k2, c2 in ExpPolynomial.coerce(other).coeffs:
                result[k1 + k2] = result.get(k1 + k2, Fraction(0)) + c1 * c2
        return ExpPolynomial.of(result)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> ExpPolynomial:
        return ExpPolynomial(tuple((k, c / other) for k, c in self.coeffs))

    def __float__(self) -> float:
        return math.fsum(float(c) * math.exp(k) for k, c in self.coeffs)

    def is_rational(self) -> bool:
        return all(k == 0 for k, _ in self.coeffs)

    def sign(self) -> int:
        """Exact sign; e is transcendental, so only the zero polynomial vanishes."""
        if not self.coeffs:
            return 0
        if self.is_rational():
            return 1 if self.coeffs[0][1] > 0 else -1
        approx = float(self)
        scale = math.fsum(abs(float(c)) * math.exp(k) for k, c in self.coeffs)
        if abs(approx) > 1e-9 * scale:
            return 1 if approx > 0 else -1
        terms = 20
        while True:
            lo, hi = self._enclosure(*e_bounds(terms))
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            terms *= 2

    def _enclosure(self, e_lo: Fraction, e_hi: Fraction) -> tuple[Fraction, Fraction]:
        low = high = Fraction(0)
        for k, c in self.coeffs:
            a, b = (e_lo**k, e_hi**k) if k >= 0 else (e_hi**k, e_lo**k)
            if c >= 0:
                low, high = low + c * a, high + c * b
            else:
                low, high = low + c * b, high + c * a
        return low, high

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, ExpPolynomial)):
            return (self - other).sign() == 0
        return NotImplemented

    def __lt__(self, other: ExpPolynomial | Scalar) -> bool:
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in reversed(self.coeffs):
            parts.append(str(c) if k == 0 else f"{c}*e^{k}")
        return " + ".join(parts)
