"""Cost accounting for covers built from bad W."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from ..domain import DEFAULT_GUARDS, Guards, InequalityCheck
from ..utils.errors import ParameterError
from ..utils.parallel import ordered_map
from .engine import classify_W, fragments_for
from .profiles import Profile, enumerate_legal_partial_profiles, legal_values
from .weights import DyadicFamily, bucket_floor

logger = logging.getLogger(__name__)

BucketKey = tuple[int, Profile, int]


@dataclass(frozen=True, slots=True)
class LedgerBucket:
    b: int
    s_b: Profile
    t: int
    cost: Fraction
    bound: Fraction
    in_range: bool

    @property
    def holds(self) -> bool:
        return self.cost <= self.bound

    def to_row(self) -> dict[str, Any]:
        return {
            "b": self.b,
            "s_b": " ".join(map(str, self.s_b)),
            "t": self.t,
            "bucket_cost": str(self.cost),
            "bound": str(self.bound),
        }


@dataclass(slots=True)
class CostLedger:
    n: int
    w: int
    p: Fraction
    J: Fraction
    J_eff: Fraction
    binom_nw: int
    lhs: Fraction = Fraction(0)
    bad_count: int = 0
    total_count: int = 0
    buckets: list[LedgerBucket] = field(default_factory=list)
    overlap: int = 0
    global_rhs: Fraction = Fraction(0)
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def all_in_range(self) -> bool:
        return all(bucket.in_range for bucket in self.buckets)

    @property
    def bucket_total(self) -> Fraction:
        return sum((bucket.cost for bucket in self.buckets), Fraction(0))

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "w": self.w,
            "p": str(self.p),
            "J": str(self.J),
            "J_eff": str(self.J_eff),
            "binom_nw": self.binom_nw,
            "lhs": str(self.lhs),
            "bucket_total": str(self.bucket_total),
            "overlap": self.overlap,
            "global_rhs": str(self.global_rhs),
            "bad_count": self.bad_count,
            "total_count": self.total_count,
            "all_in_range": self.all_in_range,
            "buckets": [bucket.to_row() | {"in_range": bucket.in_range} for bucket in self.buckets],
            "checks": [check.to_dict() for check in self.checks],
        }


def _in_range(key: BucketKey, fraction: Fraction) -> bool:
    b, s_b, t = key
    n_b = sum(s_b)
    return b >= 0 and fraction * n_b <= t <= n_b


def _scan(D: DyadicFamily, w_mask: int, guards: Guards) -> tuple[set[int], dict[BucketKey, set[int]]] | None:
    """None for good W; otherwise U(W) and its split by (b, s_b, t)."""
    if classify_W(D, w_mask) == "good":
        return None
    cover: set[int] = set()
    split: dict[BucketKey, set[int]] = defaultdict(set)
    for result in fragments_for(D, w_mask, guards):
        cover.add(result.T.mask)
        split[(result.b, result.s_b, result.t)].add(result.T.mask)
    return cover, split


def global_bound(n: int, w: int, J: Fraction, tau: int, fraction: Fraction, base: int = 100) -> Fraction:
    """Sum over b >= 0, legal s_b ending in a nonzero entry and .9 n_b <= t <= n_b of C(n,w) J^-t 2^n_b."""
    total = Fraction(0)
    binom = math.comb(n, w)
    for b in range(tau + 1):
        for s_b in enumerate_legal_partial_profiles(b, n, base):
            if s_b[-1] == 0:
                continue
            n_b = sum(s_b)
            t_low = math.ceil(fraction * n_b)
            for t in range(t_low, n_b + 1):
                total += binom * J ** (-t) * 2**n_b
    return total


def aggregate_bad_cost(D: DyadicFamily, J: Fraction | int, guards: Guards = DEFAULT_GUARDS) -> CostLedger:
    """Exact sum over bad W of the cost of U(W), split into (b, s_b, t) buckets and checked against the counting bound."""
    n, p = D.ground.n, D.p
    J = Fraction(J)
    w = math.floor(J * n * p)
    if w > n:
        raise ParameterError(f"w = floor(J n p) = {w} exceeds n = {n}; lower J")
    if w < 1:
        raise ParameterError(f"w = floor(J n p) = {w}; raise J so that at least one element is selected")
    binom = math.comb(n, w)
    guards.check("subsets_w", binom)
    J_eff = Fraction(w) / (n * p)
    fraction = D.constants.profile_fraction
    ledger = CostLedger(n, w, p, J, J_eff, binom, total_count=binom)

    masks = [sum(1 << i for i in combo) for combo in combinations(range(n), w)]
    scans = ordered_map(lambda mask: _scan(D, mask, guards), masks)

    bucket_sums: dict[BucketKey, Fraction] = defaultdict(Fraction)
    for scan in scans:
        if scan is None:
            continue
        ledger.bad_count += 1
        cover, split = scan
        ledger.lhs += sum((p ** u.bit_count() for u in cover), Fraction(0))
        seen: dict[int, int] = defaultdict(int)
        for key, us in split.items():
            bucket_sums[key] += sum((p ** u.bit_count() for u in us), Fraction(0))
            for u in us:
                seen[u] += 1
        ledger.overlap += sum(count - 1 for count in seen.values())

    for key in sorted(bucket_sums):
        b, s_b, t = key
        bound = binom * J_eff ** (-t) * 2 ** sum(s_b)
        ledger.buckets.append(LedgerBucket(b, s_b, t, bucket_sums[key], bound, _in_range(key, fraction)))

    ledger.global_rhs = global_bound(n, w, J_eff, D.tau, fraction, D.constants.base)
    ledger.checks = [
        InequalityCheck("lhs <= bucket total", ledger.lhs, ledger.bucket_total, ledger.lhs <= ledger.bucket_total),
        *(
            InequalityCheck(f"bucket b={bk.b} s_b={bk.s_b} t={bk.t}", bk.cost, bk.bound, bk.holds)
            for bk in ledger.buckets
        ),
        InequalityCheck("fragments in range", ledger.all_in_range, True, ledger.all_in_range, relation="=="),
        InequalityCheck("lhs <= global bound", ledger.lhs, ledger.global_rhs, ledger.lhs <= ledger.global_rhs),
    ]
    logger.info("ledger over %d W: %d bad, lhs=%s", binom, ledger.bad_count, ledger.lhs)
    return ledger


def binomial_step_check(n: int, w: int, t: int) -> InequalityCheck:
    """C(n, w+t) <= C(n, w) (n/w)^t, the counting step with Jp = w/n."""
    if not 1 <= w <= n or not 0 <= t <= n - w:
        raise ParameterError(f"need 1 <= w <= n and 0 <= t <= n - w, got n={n} w={w} t={t}")
    lhs = Fraction(math.comb(n, w + t))
    rhs = math.comb(n, w) * Fraction(n, w) ** t
    return InequalityCheck(f"C({n},{w}+{t}) <= C({n},{w}) (n/w)^{t}", lhs, rhs, lhs <= rhs)


def binomial_step_grid(max_n: int = 30) -> list[InequalityCheck]:
    """The counting step on every (n, w, t) with n <= max_n; returns only the failures."""
    failures = []
    for n in range(1, max_n + 1):
        for w in range(1, n + 1):
            for t in range(n - w + 1):
                check = binomial_step_check(n, w, t)
                if not check.holds:
                    failures.append(check)
    return failures


@dataclass(frozen=True, slots=True)
class AjSeries:
    J: float
    tau: int
    values: tuple[float, ...]
    tail_sum: float
    product_bound: float
    exp_bound: float
    exact_sum: float | None
    empirical_c: float | None

    @property
    def holds(self) -> bool:
        middle = self.exact_sum is None or self.exact_sum <= self.product_bound * (1 + 1e-12)
        return middle and self.product_bound <= self.exp_bound * (1 + 1e-12)

    def to_dict(self) -> dict[str, Any]:
        return {
            "J": self.J,
            "tau": self.tau,
            "a_j": list(self.values),
            "sum": self.tail_sum,
            "product_bound": self.product_bound,
            "exp_bound": self.exp_bound,
            "exact_sum": self.exact_sum,
            "empirical_c": self.empirical_c,
            "holds": self.holds,
        }


def aj_series(
    J: float, tau: int, base: int = 100, fraction: float = 0.9, divisor: float = 4.0
) -> AjSeries:
    """a_j = log_base(2 base^4 (j+1)^2) (J/divisor)^(-fraction * floor_j) for j = 0..tau.

    The exact profile sum is enumerated for tau <= 3; each nonzero profile is
    counted once, which is Prod_j (1 + sum over legal s_j of (J/divisor)^(-fraction s_j)) - 1.
    """
    if J <= divisor:
        raise ParameterError(f"J must exceed {divisor:g}, got {J}")
    ratio = J / divisor
    values = tuple(
        math.log(2 * base**4 * (j + 1) ** 2, base) * ratio ** (-fraction * float(bucket_floor(j, base)))
        for j in range(tau + 1)
    )
    tail_sum = math.fsum(values)
    product_bound = math.prod(1 + a for a in values) - 1
    exp_bound = math.expm1(tail_sum)
    exact_sum = None
    if tau <= 3:
        exact_sum = math.prod(
            1 + math.fsum(ratio ** (-fraction * v) for v in legal_values(j, base=base)) for j in range(tau + 1)
        ) - 1
    empirical_c = -math.log(exp_bound) / math.log(J) if 0 < exp_bound < 1 else None
    return AjSeries(float(J), tau, values, tail_sum, product_bound, exp_bound, exact_sum, empirical_c)
