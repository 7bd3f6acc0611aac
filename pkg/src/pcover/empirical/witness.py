"""Witness events built from cover elements and the bound chain on their probability."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..domain import DEFAULT_GUARDS, Guards, InequalityCheck
from ..multiset.expoly import ExpPolynomial
from ..multiset.law import multiset_prob
from ..multiset.multiset import Multiset, count_multisets, enumerate_multisets
from ..multiset.poisson import is_pruned, poissonized_cost
from ..utils.errors import ParameterError, UnprunedCoverError

logger = logging.getLogger(__name__)

SLACK = 1e-9


@dataclass(frozen=True, slots=True)
class WitnessEvent:
    """H = {sum_i g(X_i) <= t} with g(x) = log(N mu(x) / G(x)) on G and 0 elsewhere.

    Membership is decided exactly: a sample lies in H iff the product of its ratios
    r_x = N mu(x) / G(x) over draws in G is at most prod_x r_x^G(x).
    """

    G: Multiset
    mu: tuple[Fraction, ...]
    N: int
    ratios: dict[int, Fraction] = field(default_factory=dict)

    @property
    def g_tilde(self) -> tuple[float, ...]:
        return tuple(math.log(self.ratios[x]) if x in self.ratios else 0.0 for x in range(len(self.mu)))

    @property
    def t_tilde(self) -> float:
        return math.fsum(c * math.log(self.ratios[x]) for x, c in self.G.items)

    @property
    def level(self) -> Fraction:
        """prod_x r_x^G(x), so that e^t_tilde = level."""
        value = Fraction(1)
        for x, c in self.G.items:
            value *= self.ratios[x] ** c
        return value

    def contains_counts(self, W: Multiset) -> bool:
        value = Fraction(1)
        for x, c in W.items:
            if x in self.ratios:
                value *= self.ratios[x] ** c
        return value <= self.level

    def contains(self, sample: Sequence[int]) -> bool:
        return self.contains_counts(Multiset.from_elements(sample))

    def exported(self) -> tuple[tuple[float, ...], float]:
        """(g, t) = (-N g_tilde, -t_tilde); g >= 0 and H = {Z_g >= t}."""
        return tuple(-self.N * v for v in self.g_tilde), -self.t_tilde

    def exported_contains(self, sample: Sequence[int]) -> bool:
        g, t = self.exported()
        z = math.fsum(g[x] for x in sample) / self.N
        return z >= t - SLACK * max(1.0, abs(t))

    def probability(self, guards: Guards = DEFAULT_GUARDS) -> Fraction:
        """P[H] under mu^N, exactly."""
        guards.check("multisets", count_multisets(len(self.mu), self.N))
        return sum(
            (
                multiset_prob(W, self.mu, self.N)
                for W in enumerate_multisets(tuple(range(len(self.mu))), self.N)
                if self.contains_counts(W)
            ),
            Fraction(0),
        )

    def to_dict(self) -> dict[str, Any]:
        g, t = self.exported()
        return {
            "G": {str(x): c for x, c in self.G.items},
            "g_tilde": list(self.g_tilde),
            "t_tilde": self.t_tilde,
            "g": list(g),
            "t": t,
        }


def witness_from_cover_element(G: Multiset, mu: Sequence[Fraction], N: int) -> WitnessEvent:
    """Refuses unpruned G: containment needs N mu(x) / G(x) <= 1 on G."""
    if not is_pruned(G, mu, N):
        raise UnprunedCoverError(f"cover element {G!r} has N mu(x) / G(x) > 1 somewhere; prune it first")
    if any(mu[x] == 0 for x in G.support()):
        raise ParameterError(f"cover element {G!r} uses a cell of zero mass")
    ratios = {x: N * mu[x] / c for x, c in G.items}
    return WitnessEvent(G, tuple(mu), N, ratios)


def containment_violations(event: WitnessEvent, guards: Guards = DEFAULT_GUARDS) -> list[Multiset]:
    """Count vectors W >= G that fall outside H; empty when containment holds."""
    guards.check("multisets", count_multisets(len(event.mu), event.N))
    return [
        W
        for W in enumerate_multisets(tuple(range(len(event.mu))), event.N)
        if event.G <= W and not event.contains_counts(W)
    ]


@dataclass(slots=True)
class MarkovReport:
    G: Multiset
    N: int
    q0: Fraction
    q1: Fraction
    q2: ExpPolynomial
    q3: ExpPolynomial
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "G": {str(x): c for x, c in self.G.items},
            "N": self.N,
            "P[H]": str(self.q0),
            "markov": str(self.q1),
            "log_step": str(self.q2),
            "poissonized": str(self.q3),
            "checks": [check.to_dict() for check in self.checks],
        }


def markov_chain_check(
    G: Multiset, mu: Sequence[Fraction], N: int, guards: Guards = DEFAULT_GUARDS
) -> MarkovReport:
    """P[H] <= (1+|G|/N)^N prod r^G <= e^|G| prod r^G <= prod (e N mu)^G / G!, all exact."""
    event = witness_from_cover_element(G, mu, N)
    size = len(G)
    q0 = event.probability(guards)
    q1 = Fraction(N + size, N) ** N * event.level
    q2 = ExpPolynomial.term(event.level, size)
    q3 = poissonized_cost(G, event.mu, N)
    report = MarkovReport(G, N, q0, q1, q2, q3)
    report.checks = [
        InequalityCheck("P[H] <= markov", q0, q1, q0 <= q1),
        InequalityCheck("markov <= log step", q1, q2, ExpPolynomial.coerce(q1) <= q2),
        InequalityCheck("log step <= poissonized", q2, q3, q2 <= q3),
    ]
    if not report.holds:
        logger.warning("bound chain fails for G=%r N=%d", G, N)
    return report


def log_step_check(k: int, N: int) -> InequalityCheck:
    """(1 + k/N)^N <= e^k, i.e. N log(1 + k/N) <= k."""
    lhs = Fraction(N + k, N) ** N
    rhs = ExpPolynomial.term(1, k)
    return InequalityCheck(f"N log(1+k/N) <= k at k={k} N={N}", lhs, rhs, ExpPolynomial.coerce(lhs) <= rhs)


def log_step_grid(max_k: int = 10, max_N: int = 10) -> list[InequalityCheck]:
    """Failures of the log step over 1 <= k <= max_k, 1 <= N <= max_N."""
    return [
        check
        for k in range(1, max_k + 1)
        for N in range(1, max_N + 1)
        if not (check := log_step_check(k, N)).holds
    ]
