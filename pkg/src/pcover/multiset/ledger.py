"""Cost accounting for multiset covers built from bad W, and the tail-bound conclusion."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from ..domain import DEFAULT_GUARDS, Guards, InequalityCheck, SelectorConfig
from ..fragments.ledger import AjSeries, BucketKey, LedgerBucket, aj_series
from ..fragments.profiles import enumerate_legal_partial_profiles
from ..selector.sampling import make_rng
from ..utils.errors import ParameterError
from ..utils.parallel import ordered_map
from ..utils.rationals import Number, to_fraction
from .expoly import ExpPolynomial
from .family import MultisetFamily
from .fragments import DyadicMultisetFamily, classify_multi, fragments_for_multi
from .law import MultisetDistribution, multiset_prob, sample_counts
from .multiset import Multiset, count_multisets, enumerate_multisets
from .poisson import min_multiset_cover_cost_exact, poissonized_cost

logger = logging.getLogger(__name__)

CHUNK = 1 << 12
E4 = math.exp(4)


@dataclass(slots=True)
class MultisetLedger:
    k: int
    N: int
    K: int
    M: int
    lhs: ExpPolynomial = field(default_factory=ExpPolynomial)
    bad_probability: Fraction = Fraction(0)
    bad_count: int = 0
    total_count: int = 0
    buckets: list[LedgerBucket] = field(default_factory=list)
    global_rhs: ExpPolynomial = field(default_factory=ExpPolynomial)
    series: AjSeries | None = None
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def all_in_range(self) -> bool:
        return all(bucket.in_range for bucket in self.buckets)

    @property
    def bucket_total(self) -> ExpPolynomial:
        total = ExpPolynomial()
        for bucket in self.buckets:
            total = total + bucket.cost
        return total

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "N": self.N,
            "K": self.K,
            "M": self.M,
            "lhs": str(self.lhs),
            "lhs_float": float(self.lhs),
            "bucket_total": str(self.bucket_total),
            "global_rhs": str(self.global_rhs),
            "bad_probability": str(self.bad_probability),
            "bad_count": self.bad_count,
            "total_count": self.total_count,
            "all_in_range": self.all_in_range,
            "buckets": [bucket.to_row() | {"in_range": bucket.in_range} for bucket in self.buckets],
            "series": self.series.to_dict() if self.series else None,
            "checks": [check.to_dict() for check in self.checks],
        }


def factorial_ratio_check(M: int, t: int) -> InequalityCheck:
    """M! / (M+t)! <= M^-t."""
    if M < 1 or t < 0:
        raise ParameterError(f"need M >= 1 and t >= 0, got M={M} t={t}")
    lhs = Fraction(math.factorial(M), math.factorial(M + t))
    rhs = Fraction(1, M**t)
    return InequalityCheck(f"{M}!/({M}+{t})! <= {M}^-{t}", lhs, rhs, lhs <= rhs)


def binomial_factor_check(Z: int, T: int, S_hat: int) -> InequalityCheck:
    """C(Z, T) <= C(S_hat + T, T) <= 2^(S_hat + T), valid when Z <= S_hat + T."""
    if not 0 <= T <= Z <= S_hat + T:
        raise ParameterError(f"need 0 <= T <= Z <= S_hat + T, got Z={Z} T={T} S_hat={S_hat}")
    first = math.comb(Z, T)
    middle = math.comb(S_hat + T, T)
    last = 2 ** (S_hat + T)
    return InequalityCheck(
        f"C({Z},{T}) <= C({S_hat + T},{T}) <= 2^{S_hat + T}",
        first,
        (middle, last),
        first <= middle <= last,
    )


def global_bound_multi(K: int, tau: int, cap: int, fraction: Fraction, base: int = 100) -> ExpPolynomial:
    """Sum over b >= 0, legal s_b ending in a nonzero entry and .9 n_b <= t <= n_b of (e/K)^t 2^(3 n_b)."""
    total = ExpPolynomial()
    for b in range(tau + 1):
        for s_b in enumerate_legal_partial_profiles(b, cap, base):
            if s_b[-1] == 0:
                continue
            n_b = sum(s_b)
            for t in range(math.ceil(fraction * n_b), n_b + 1):
                total = total + ExpPolynomial.term(Fraction(2 ** (3 * n_b), K**t), t)
    return total


def _scan(
    D: DyadicMultisetFamily, W: Multiset, guards: Guards
) -> tuple[set[Multiset], dict[BucketKey, set[Multiset]]] | None:
    if classify_multi(D, W) == "good":
        return None
    cover: set[Multiset] = set()
    split: dict[BucketKey, set[Multiset]] = defaultdict(set)
    for result in fragments_for_multi(D, W, guards):
        cover.add(result.T)
        split[(result.b, result.s_b, result.t)].add(result.T)
    return cover, split


def _cost(us: set[Multiset], dist: MultisetDistribution) -> ExpPolynomial:
    total = ExpPolynomial()
    for U in us:
        total = total + poissonized_cost(U, dist.mu, dist.N)
    return total


def aggregate_bad_cost_multi(
    D: DyadicMultisetFamily,
    dist: MultisetDistribution,
    J0: float | None = None,
    c: float | None = None,
    guards: Guards = DEFAULT_GUARDS,
) -> MultisetLedger:
    """Exact sum over bad W in M_{KN} of P[W] times the Poissonized cost of U(W), split into buckets."""
    if len(dist.mu) != D.k:
        raise ParameterError(f"mu over {len(dist.mu)} elements, family over {D.k}")
    M = dist.M
    total = count_multisets(D.k, M)
    guards.check("multisets", total)
    fraction = D.constants.profile_fraction
    ledger = MultisetLedger(D.k, dist.N, dist.K, M, total_count=total)

    Ws = list(enumerate_multisets(dist.support, M))
    scans = ordered_map(lambda W: _scan(D, W, guards), Ws)

    bucket_sums: dict[BucketKey, ExpPolynomial] = defaultdict(ExpPolynomial)
    for W, scan in zip(Ws, scans, strict=True):
        if scan is None:
            continue
        prob = multiset_prob(W, dist.mu, M)
        if prob == 0:
            continue
        ledger.bad_count += 1
        ledger.bad_probability += prob
        cover, split = scan
        ledger.lhs = ledger.lhs + _cost(cover, dist) * prob
        for key, us in split.items():
            bucket_sums[key] = bucket_sums[key] + _cost(us, dist) * prob

    for key in sorted(bucket_sums):
        b, s_b, t = key
        n_b = sum(s_b)
        bound = ExpPolynomial.term(Fraction(2 ** (3 * n_b), dist.K**t), t)
        in_range = b >= 0 and fraction * n_b <= t <= n_b
        ledger.buckets.append(LedgerBucket(b, s_b, t, bucket_sums[key], bound, in_range))

    cap = max((len(D.multiset(idx)) for idx in range(len(D))), default=0)
    ledger.global_rhs = global_bound_multi(dist.K, D.tau, cap, fraction, D.constants.base)
    ledger.checks = [
        InequalityCheck("lhs <= bucket total", ledger.lhs, ledger.bucket_total, ledger.lhs <= ledger.bucket_total),
        *(
            InequalityCheck(f"bucket b={bk.b} s_b={bk.s_b} t={bk.t}", bk.cost, bk.bound, bk.holds)
            for bk in ledger.buckets
        ),
        InequalityCheck("fragments in range", ledger.all_in_range, True, ledger.all_in_range, relation="=="),
        InequalityCheck("lhs <= global bound", ledger.lhs, ledger.global_rhs, ledger.lhs <= ledger.global_rhs),
    ]
    if J0 is not None:
        ledger.series = aj_series(J0, D.tau, D.constants.base, float(fraction), divisor=E4)
        if c is not None:
            target = J0 ** (-c)
            ledger.checks.append(
                InequalityCheck("exp(sum a_j) - 1 <= J0^-c", ledger.series.exp_bound, target, ledger.series.exp_bound <= target)
            )
    logger.info("multiset ledger over %d W: %d bad, lhs=%s", total, ledger.bad_count, ledger.lhs)
    return ledger


@dataclass(slots=True)
class TailReport:
    N: int
    K: int
    M: int
    min_cover_cost: ExpPolynomial
    vacuous: bool
    expected_sup: float | Fraction
    expected_sup_capped: float | Fraction
    bad_probability: float | Fraction
    exact: bool
    threshold: Fraction
    checks: list[InequalityCheck] = field(default_factory=list)
    conclusions: list[InequalityCheck] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        """Only the unconditional chain; conclusions depend on the premises and on K."""
        return all(check.holds for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        def fmt(value: Any) -> Any:
            return str(value) if isinstance(value, Fraction | ExpPolynomial) else value

        return {
            "N": self.N,
            "K": self.K,
            "M": self.M,
            "min_cover_cost": str(self.min_cover_cost),
            "vacuous": self.vacuous,
            "expected_sup": fmt(self.expected_sup),
            "expected_sup_capped": fmt(self.expected_sup_capped),
            "bad_probability": fmt(self.bad_probability),
            "exact": self.exact,
            "checks": [check.to_dict() for check in self.checks],
            "conclusions": [check.to_dict() for check in self.conclusions],
        }


def _exact_sups(F: MultisetFamily, dist: MultisetDistribution, threshold: Fraction, guards: Guards) -> tuple[Fraction, ...]:
    M = dist.M
    guards.check("multisets", count_multisets(F.k, M))
    e_sup = e_capped = bad = Fraction(0)
    for W in enumerate_multisets(dist.support, M):
        prob = multiset_prob(W, dist.mu, M)
        if prob == 0:
            continue
        sup = F.sup_weight(W)
        e_sup += prob * sup
        e_capped += prob * F.sup_weight(W, capped=True)
        if sup < threshold:
            bad += prob
    return e_sup, e_capped, bad


def _sampled_sups(F: MultisetFamily, dist: MultisetDistribution, threshold: Fraction, config: SelectorConfig) -> tuple[float, ...]:
    lam = np.array([[float(m.weight(x)) for x in range(F.k)] for m in F.members], dtype=float)
    sizes = np.array([[m.multiset.count(x) for x in range(F.k)] for m in F.members], dtype=np.int64)
    rng = make_rng(config.seed, 2)
    sup_sum = capped_sum = bad = 0.0
    done = 0
    while done < config.trials:
        rows = min(CHUNK, config.trials - done)
        counts = sample_counts(rng, dist, rows, dist.M)
        sups = (counts @ lam.T).max(axis=1)
        capped = (np.minimum(counts[:, None, :], sizes[None, :, :]) * lam[None, :, :]).sum(axis=2).max(axis=1)
        sup_sum += float(sups.sum())
        capped_sum += float(capped.sum())
        bad += float((sups < float(threshold)).sum())
        done += rows
    return sup_sum / done, capped_sum / done, bad / done


def verify_tail_conclusion(
    F: MultisetFamily,
    dist: MultisetDistribution,
    config: SelectorConfig | None = None,
    J0: float | None = None,
    c: float | None = None,
    threshold: Number = Fraction(1, 10**10),
    guards: Guards = DEFAULT_GUARDS,
) -> TailReport:
    """E sup_S sum_x W(x) lambda^S(x) under the size KN law, with P[bad] and the lower-bound chain.

    The premise is that no cover of F costs at most 1/2; when the exact oracle finds one the
    report is flagged vacuous.
    """
    if F.k != len(dist.mu):
        raise ParameterError(f"family over {F.k} elements, mu over {len(dist.mu)}")
    if not F.members:
        raise ParameterError("the family is empty; every W is bad and no cover is needed")
    level = to_fraction(threshold)
    cost, _ = min_multiset_cover_cost_exact(F.multisets(), dist.mu, dist.N, guards)
    vacuous = cost <= Fraction(1, 2)
    if vacuous:
        logger.warning("family has a cover of cost %s <= 1/2; the tail conclusion is vacuous", cost)

    exact = config is None or config.mode == "exact-enumeration"
    if exact:
        e_sup, e_capped, bad = _exact_sups(F, dist, level, guards)
    else:
        e_sup, e_capped, bad = _sampled_sups(F, dist, level, config)

    report = TailReport(dist.N, dist.K, dist.M, cost, vacuous, e_sup, e_capped, bad, exact, level)
    good_floor = (1 - bad) * level
    report.checks.append(InequalityCheck("E sup >= P[good] threshold", e_sup, good_floor, e_sup >= good_floor, ">="))
    if J0 is not None and c is not None:
        bad_bound = 2 * J0 ** (-c)
        floor = (1 - bad_bound) * float(level)
        report.conclusions.append(InequalityCheck("P[bad] <= 2 J0^-c", float(bad), bad_bound, float(bad) <= bad_bound))
        report.conclusions.append(
            InequalityCheck("E sup >= (1 - 2 J0^-c) threshold", float(e_sup), floor, float(e_sup) >= floor, ">=")
        )
    target = level / 10
    report.conclusions.append(InequalityCheck("E sup >= threshold / 10", e_sup, target, e_sup >= target, ">="))
    logger.info("tail conclusion: E sup=%s P[bad]=%s vacuous=%s", e_sup, bad, vacuous)
    return report
