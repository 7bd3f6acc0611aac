"""Exact rational parsing and formatting."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

Number = int | float | str | Fraction


def to_fraction(value: Number) -> Fraction:
    """Coerce ints, "num/den" or decimal strings and floats to an exact Fraction.

    Floats go through their shortest repr, so 0.1 becomes 1/10 rather than the
    binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def is_power_of(value: int, base: int) -> bool:
    if value < 1:
        return False
    while value % base == 0:
        value //= base
    return value == 1


def floor_log(value: int, base: int) -> int:
    """Largest k with base**k <= value, for value >= 1."""
    if value < 1:
        raise ValueError("floor_log needs value >= 1")
    k = 0
    while base ** (k + 1) <= value:
        k += 1
    return k
