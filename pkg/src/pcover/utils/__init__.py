"""Utility helpers."""

from .errors import (
    BijectionError,
    ConsistencyError,
    GroundSetMismatch,
    GuardError,
    InstanceFormatError,
    ParameterError,
    PCoverError,
    ProfileMismatchError,
    UnprunedCoverError,
)
from .logging import get_logger
from .rationals import to_fraction

__all__ = [
    "BijectionError",
    "ConsistencyError",
    "GroundSetMismatch",
    "GuardError",
    "InstanceFormatError",
    "ParameterError",
    "PCoverError",
    "ProfileMismatchError",
    "UnprunedCoverError",
    "get_logger",
    "to_fraction",
]
