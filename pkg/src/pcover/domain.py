"""Domain configuration types shared across modules."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Any, Literal

from .utils.errors import GuardError, ParameterError

FORMAT_VERSION = "pcover-report/1"

Arithmetic = Literal["exact", "float"]
SelectorMode = Literal["exact-enumeration", "monte-carlo"]


@dataclass(frozen=True, slots=True)
class Guards:
    """Enumeration limits. Every exhaustive routine checks one of these and fails closed."""

    cover_candidates: int = 1 << 16
    fragment_search: int = 20
    expectation_bits: int = 20
    rational_bits: int = 14
    subsets_w: int = 10**6
    multisets: int = 10**6
    tuples: int = 10**6

    def check(self, guard: str, value: int) -> None:
        # the *_bits guards compare n against the exponent, the rest compare counts
        limit = getattr(self, guard)
        if value > limit:
            raise GuardError(guard, limit, value)


@dataclass(frozen=True, slots=True)
class FragmentConstants:
    """Constants of the fragment argument; defaults are the published values."""

    capture: Fraction = Fraction(1, 100)
    profile_fraction: Fraction = Fraction(9, 10)
    base: int = 100
    bad_threshold: Fraction = Fraction(1, 10**10)


@dataclass(frozen=True, slots=True)
class SelectorConfig:
    p: Fraction
    trials: int = 100_000
    seed: int = 0
    mode: SelectorMode = "exact-enumeration"
    arithmetic: Arithmetic = "float"


@dataclass(frozen=True, slots=True)
class InequalityCheck:
    """One link of a verified chain: lhs <= rhs (or lhs >= rhs when relation is '>=')."""

    name: str
    lhs: Any
    rhs: Any
    holds: bool
    relation: str = "<="

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds, "relation": self.relation}


@dataclass(slots=True)
class RunConfig:
    """Full configuration of one CLI run, embedded verbatim in its report."""

    subcommand: str
    family: str | None = None
    lambda_path: str | None = None
    instance: str | None = None
    p: str | None = None
    N: int | None = None
    K: str | None = None
    J: str | None = None
    L: str | None = None
    eps: str | None = None
    W: str | None = None
    seed: int = 0
    trials: int = 100_000
    mode: Arithmetic = "exact"
    out: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def guards(self) -> Guards:
        """Default guards with the --guard overrides collected in extra."""
        overrides = self.extra.get("guards") or {}
        known = {f.name for f in fields(Guards)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ParameterError(f"unknown guard(s) {', '.join(unknown)}; known: {', '.join(sorted(known))}")
        return Guards(**{name: int(value) for name, value in overrides.items()})

    def to_dict(self) -> dict[str, Any]:
        payload = asdict(self)
        payload["format_version"] = FORMAT_VERSION
        return payload


DEFAULT_GUARDS = Guards()
DEFAULT_CONSTANTS = FragmentConstants()
