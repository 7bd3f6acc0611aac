"""Custom exceptions."""

from __future__ import annotations


class PCoverError(Exception):
    """Base class for every error raised by pcover."""


class GuardError(PCoverError):
    """Raised when an enumeration or search would exceed a configured guard."""

    def __init__(self, guard: str, limit: int | float, value: int | float) -> None:
        self.guard = guard
        self.limit = limit
        self.value = value
        super().__init__(f"guard '{guard}' exceeded: {value} > limit {limit} (raise it with the matching --guard option)")


class ParameterError(PCoverError, ValueError):
    """Raised for out-of-range parameters."""


class GroundSetMismatch(PCoverError, ValueError):
    """Raised when objects over different ground sets are combined."""


class ProfileMismatchError(PCoverError, ValueError):
    """Raised when a member does not match the requested partial profile."""


class BijectionError(PCoverError, ValueError):
    """Raised when two families are not in the required member-wise bijection."""


class ConsistencyError(PCoverError):
    """Raised when results contradict each other."""


class UnprunedCoverError(PCoverError, ValueError):
    """Raised when a witness event is requested for a cover element with N*mu(x)/G(x) > 1."""


class InstanceFormatError(PCoverError):
    """Raised when an input document is malformed."""

    def __init__(self, message: str, location: str | None = None) -> None:
        self.location = location
        super().__init__(f"{message} (at {location})" if location else message)
