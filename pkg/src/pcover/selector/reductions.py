"""Numerical checks of the reductions between the selector statements."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

import numpy as np
from scipy.stats import binom

from ..domain import DEFAULT_GUARDS, Guards, InequalityCheck, SelectorConfig
from ..family import WeightedFamily, is_p_small
from ..utils.errors import ConsistencyError, ParameterError
from ..utils.rationals import Number, to_fraction
from .expectations import LambdaCollection, SupEstimate, expected_sup, expected_sup_uniform
from .sampling import make_rng, subsample_batch, uniform_batch

logger = logging.getLogger(__name__)

UNIFORM_THRESHOLD = Fraction(1, 10**11)
SIGMA_SLACK = 4.0


def binomial_tail(n: int, p: Number, k: int) -> Fraction:
    """Exact P(Bin(n, p) >= k)."""
    q = to_fraction(p)
    if not 0 <= q <= 1:
        raise ParameterError(f"p must lie in [0, 1], got {q}")
    return sum((math.comb(n, i) * q**i * (1 - q) ** (n - i) for i in range(max(k, 0), n + 1)), Fraction(0))


def binomial_tail_grid(max_n: int = 50, step: Fraction = Fraction(1, 20)) -> list[InequalityCheck]:
    """P(Bin(n, p) >= floor(np)) >= 1/2 for n <= max_n and p on the step grid; returns failures.

    The scipy survival function is a float cross-check; a disagreement is a failure too.
    """
    failures = []
    p = step
    while p < 1:
        for n in range(1, max_n + 1):
            k = math.floor(n * p)
            tail = binomial_tail(n, p, k)
            check = InequalityCheck(f"P(Bin({n},{p}) >= {k}) >= 1/2", tail, Fraction(1, 2), tail >= Fraction(1, 2), ">=")
            if not check.holds or abs(float(binom.sf(k - 1, n, float(p))) - float(tail)) > 1e-9:
                failures.append(check)
        p += step
    return failures


@dataclass(frozen=True, slots=True)
class UniformReport:
    """E sup over a uniform w-subset against the fixed threshold."""

    n: int
    w: int
    K: Fraction
    estimate: SupEstimate
    vacuous: bool
    threshold: Fraction = UNIFORM_THRESHOLD

    @property
    def above_threshold(self) -> bool:
        return float(self.estimate.value) >= float(self.threshold)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "w": self.w,
            "K": str(self.K),
            "estimate": self.estimate.to_dict(),
            "vacuous": self.vacuous,
            "threshold": str(self.threshold),
            "above_threshold": self.above_threshold,
        }


def verify_uniform_conclusion(
    F: WeightedFamily, K: Number, config: SelectorConfig, guards: Guards = DEFAULT_GUARDS
) -> UniformReport:
    """Estimate E sup_S lambda^S(S & W) over uniform W of size floor(K n p) for a family that is not p-small."""
    n = F.ground.n
    K_exact = to_fraction(K)
    w = math.floor(K_exact * n * F.p)
    if w > n:
        raise ParameterError(f"w = floor(K n p) = {w} exceeds n = {n}")
    vacuous = is_p_small(F, guards=guards).verdict == "p-small"
    if vacuous:
        logger.warning("family is p-small at p=%s; the premise is vacuous", F.p)
    estimate = expected_sup_uniform(F, w, config, guards)
    return UniformReport(n, w, K_exact, estimate, vacuous)


@dataclass(slots=True)
class ReductionReport:
    n: int
    p: Fraction
    K: Fraction
    L_prime: Fraction
    zeta: Fraction | None
    vacuous: bool
    quantities: dict[str, Any] = field(default_factory=dict)
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "p": str(self.p),
            "K": str(self.K),
            "L_prime": str(self.L_prime),
            "zeta": None if self.zeta is None else str(self.zeta),
            "vacuous": self.vacuous,
            "quantities": self.quantities,
            "checks": [check.to_dict() for check in self.checks],
            "holds": self.holds,
        }


def _ge(name: str, lhs: Fraction | float, rhs: Fraction | float, slack: float = 0.0) -> InequalityCheck:
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction) and slack == 0:
        return InequalityCheck(name, lhs, rhs, lhs >= rhs, ">=")
    return InequalityCheck(name, float(lhs), float(rhs), float(lhs) >= float(rhs) - slack, ">=")


def coupled_subsample_gap(
    lam: LambdaCollection, w: int, k: int, trials: int, seed: int
) -> tuple[float, float]:
    """Mean and standard error of sup(W') - (k/w) sup(W) with W uniform of size w and W' a uniform k-subset of W."""
    rng = make_rng(seed, 2)
    outer = uniform_batch(rng, lam.n, w, trials)
    inner = subsample_batch(rng, outer, k)
    weights = lam.as_array().T
    gaps = (inner.astype(float) @ weights).max(axis=1) - (k / w) * (outer.astype(float) @ weights).max(axis=1)
    std_err = float(gaps.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return float(gaps.mean()), std_err


def verify_subsampling_chain(
    F: WeightedFamily, K: Number, config: SelectorConfig, guards: Guards = DEFAULT_GUARDS
) -> ReductionReport:
    """Check, on one instance, each link from E sup over X_p down to E sup over a uniform floor(Knp)-subset."""
    n, p = F.ground.n, F.p
    K_exact = to_fraction(K)
    np_ = n * p
    vacuous = is_p_small(F, guards=guards).verdict == "p-small"
    if not vacuous and np_ < Fraction(1, 2):
        raise ConsistencyError(f"family is not p-small yet n p = {np_} < 1/2")
    report = ReductionReport(n, p, K_exact, 4 * 10**11 * K_exact, None, vacuous)

    k = math.floor(np_)
    tail = binomial_tail(n, p, k)
    report.checks.append(_ge(f"P(|X_p| >= {k}) >= 1/2", tail, Fraction(1, 2)))
    report.checks.append(_ge("1 - exp(-1/2) > 1/4", -math.expm1(-0.5), 0.25))
    report.quantities["binomial_tail"] = str(tail)
    if np_ < Fraction(1, 2):
        logger.warning("n p = %s < 1/2: the size reduction does not apply", np_)
        return report

    lam = LambdaCollection.from_family(F)
    exact = config.mode == "exact-enumeration"
    cfg = replace(config, p=p)
    e_xp = expected_sup(lam, cfg, guards)
    w_small = max(k, 1)
    e_small = expected_sup_uniform(lam, w_small, cfg, guards)
    factor = Fraction(1, 2) if np_ >= 1 else Fraction(1, 4)
    slack = 0.0 if exact else SIGMA_SLACK * math.hypot(e_xp.std_err or 0.0, e_small.std_err or 0.0)
    report.checks.append(
        _ge(f"E sup X_p >= {factor} E sup W'", e_xp.value, factor * e_small.value, slack)
    )
    report.quantities |= {"E_sup_Xp": e_xp.to_dict(), "E_sup_W_small": e_small.to_dict(), "w_small": w_small}

    w = math.floor(K_exact * np_)
    if w < w_small or w > n:
        raise ParameterError(f"need floor(n p) <= floor(K n p) <= n, got {w_small} and {w} with n = {n}")
    zeta = Fraction(w_small, w)
    report.zeta = zeta
    e_big = expected_sup_uniform(lam, w, cfg, guards)
    report.quantities |= {"E_sup_W": e_big.to_dict(), "w": w}
    if exact:
        report.checks.append(_ge("E sup W' >= zeta E sup W", e_small.value, zeta * e_big.value))
    else:
        gap, err = coupled_subsample_gap(lam, w, w_small, config.trials, config.seed)
        report.quantities["coupled_gap"] = {"mean": gap, "std_err": err}
        report.checks.append(_ge("E[sup W' - zeta sup W] >= 0 (coupled)", gap, 0.0, SIGMA_SLACK * err))
    chained = factor * zeta
    lower = Fraction(1) / (4 * K_exact)
    report.quantities |= {"chained_factor": str(chained), "one_over_4K": str(lower)}
    report.checks.append(_ge("factor zeta >= 1/(4K)", chained, lower))
    if exact:
        report.checks.append(_ge("E sup X_p >= factor zeta E sup W", e_xp.value, chained * e_big.value))
        report.checks.append(_ge("E sup X_p >= E sup W / (4K)", e_xp.value, lower * e_big.value))
    return report


def empirical_frequencies(samples: np.ndarray) -> dict[int, float]:
    """Frequency of each subset mask among boolean membership rows."""
    weights = 1 << np.arange(samples.shape[1], dtype=np.int64)
    masks, counts = np.unique(samples.astype(np.int64) @ weights, return_counts=True)
    return {int(m): c / len(samples) for m, c in zip(masks, counts, strict=True)}
