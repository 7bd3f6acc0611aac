"""The acceptance battery behind `pcover suite`.

Every battery is a deterministic function of (seed, scale); random instances
come from per-case seeds, so two runs with the same seed emit identical reports.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

import numpy as np

from ..analytics import build_check_table, build_summary
from ..data import InstanceGenerator, family_from_document, instance_from_document, multiset_family_from_document
from ..domain import Guards, InequalityCheck, RunConfig, SelectorConfig
from ..empirical import discretization_error_check, markov_chain_check, prepare_bridge, tail_coverage_check
from ..family import SubsetBits, WeightedFamily, covers, is_p_small, shrink_monotone_check
from ..fragments import (
    aggregate_bad_cost,
    binomial_step_grid,
    build_cover,
    check_fragment_properties,
    fragments_for,
    process_family,
)
from ..multiset import (
    ExpPolynomial,
    Multiset,
    MultisetDistribution,
    build_cover_multi,
    check_multi_fragment_properties,
    enumerate_multisets,
    fragments_for_multi,
    multiset_covers,
    multiset_prob,
    process_multiset_family,
    prune_cover,
    sample_counts,
)
from ..selector import LambdaCollection, binomial_tail_grid, expected_sup, make_rng, verify_subsampling_chain
from ..utils.errors import ParameterError
from .report import Report

logger = logging.getLogger(__name__)

SIGMAS = 4.0
SUITE_STREAM = 200


@dataclass(frozen=True, slots=True)
class SuiteScale:
    families: int
    shrink_pairs: int
    reduction_instances: int
    reduction_trials: int
    law_draws: int
    markov_cases: int
    empirical_instances: int
    stat_repetitions: int
    stat_trials: int


SCALES: dict[str, SuiteScale] = {
    "quick": SuiteScale(20, 50, 10, 20_000, 20_000, 500, 6, 10, 10_000),
    "full": SuiteScale(200, 500, 100, 200_000, 1_000_000, 10_000, 20, 100, 1_000_000),
}


@dataclass(slots=True)
class BatteryResult:
    name: str
    cases: int = 0
    violations: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations

    def as_check(self) -> InequalityCheck:
        return InequalityCheck(f"{self.name} violations", len(self.violations), 0, self.holds)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "cases": self.cases,
            "holds": self.holds,
            "violations": self.violations,
            "details": self.details,
        }


def case_seed(seed: int, battery: int, case: int) -> int:
    return (seed << 24) + (battery << 20) + case


def _random_family(seed: int, case: int, battery: int) -> WeightedFamily:
    gen = InstanceGenerator(
        "random-family",
        n=2 + case % 5,
        members=1 + case % 4,
        seed=case_seed(seed, battery, case),
    )
    return family_from_document(gen.generate())


def _random_multiset_inputs(seed: int, case: int, battery: int):
    gen = InstanceGenerator(
        "random-multiset-family",
        n=1 + case % 3,
        members=1 + case % 3,
        N=1 + case % 3,
        seed=case_seed(seed, battery, case),
    )
    doc = gen.generate()
    return multiset_family_from_document(doc), doc["distribution"]["N"]


def _random_mu(rng: np.random.Generator, k: int) -> tuple[Fraction, ...]:
    raw = [int(v) for v in rng.integers(1, 5, size=k)]
    return tuple(Fraction(v, sum(raw)) for v in raw)


def _all_subsets(n: int):
    for w in range(n + 1):
        for combo in combinations(range(n), w):
            yield SubsetBits(sum(1 << i for i in combo), n)


def battery_fragments(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """Structural properties of every minimum fragment over exhaustive W sweeps, sets and multisets."""
    result = BatteryResult("fragments")
    for case in range(scale.families):
        F = _random_family(seed, case, 1)
        D = process_family(F).family
        for W in _all_subsets(D.ground.n):
            for idx, fragment in enumerate(fragments_for(D, W, guards)):
                result.cases += 1
                result.violations.extend(
                    f"family {case} W={W} member {idx}: {v}" for v in check_fragment_properties(D, idx, W, fragment)
                )
        MF, N = _random_multiset_inputs(seed, case, 1)
        MD = process_multiset_family(MF).family
        for size in range(1, N + 1):
            for W in enumerate_multisets(tuple(range(MF.k)), size):
                for idx, fragment in enumerate(fragments_for_multi(MD, W, guards)):
                    result.cases += 1
                    result.violations.extend(
                        f"multiset family {case} W={W} member {idx}: {v}"
                        for v in check_multi_fragment_properties(MD, idx, W, fragment)
                    )
    return result


def battery_covers(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """U(W) covers the family for every W in the sweep."""
    result = BatteryResult("covers")
    for case in range(scale.families):
        F = _random_family(seed, case, 1)
        D = process_family(F).family
        for W in _all_subsets(D.ground.n):
            result.cases += 1
            if not covers(build_cover(D, W, guards), F):
                result.violations.append(f"family {case}: U(W) misses a member for W={W}")
        MF, N = _random_multiset_inputs(seed, case, 1)
        MD = process_multiset_family(MF).family
        for size in range(1, N + 1):
            for W in enumerate_multisets(tuple(range(MF.k)), size):
                result.cases += 1
                if not multiset_covers(build_cover_multi(MD, W, guards), MF.multisets()):
                    result.violations.append(f"multiset family {case}: U(W) misses a member for W={W}")
    return result


def battery_ledger(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """Exact bad-W cost against the bucketwise bound at J = 2, plus the counting step grid."""
    result = BatteryResult("ledger")
    J = Fraction(2)
    for case in range(scale.families):
        F = _random_family(seed, case, 1)
        ledger = aggregate_bad_cost(process_family(F).family, J, guards)
        result.cases += len(ledger.checks)
        result.violations.extend(f"family {case}: {c.name} ({c.lhs} vs {c.rhs})" for c in ledger.checks if not c.holds)
    failures = binomial_step_grid(30)
    result.details["binomial_step_failures"] = len(failures)
    result.violations.extend(c.name for c in failures)
    return result


def battery_oracles(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """Hand-derivable min cover costs and monotonicity under member-wise shrinking."""
    result = BatteryResult("oracles")
    for n in range(1, 7):
        for p in (Fraction(1, 16), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)):
            result.cases += 1
            F = WeightedFamily.from_sets(n, [[i] for i in range(n)], p)
            cost = is_p_small(F, guards=guards).min_cost
            if cost != min(n * p, Fraction(1)):
                result.violations.append(f"{n} singletons at p={p}: cost {cost}, expected {min(n * p, Fraction(1))}")
    result.cases += 1
    empty_cost = is_p_small(WeightedFamily.from_sets(3, [[]], Fraction(1, 4)), guards=guards).min_cost
    if empty_cost != 1:
        result.violations.append(f"family of the empty set: cost {empty_cost}, expected 1")
    for case in range(scale.shrink_pairs):
        F = _random_family(seed, case, 4)
        rng = make_rng(case_seed(seed, 4, case), SUITE_STREAM)
        shrunk = [[i for i in m.subset.elements() if rng.random() < 0.7] for m in F.members]
        result.cases += 1
        if not shrink_monotone_check(F, WeightedFamily.from_sets(F.ground.n, shrunk, F.p), guards=guards):
            result.violations.append(f"pair {case}: shrunk family p-small but the original is not")
    return result


def battery_reduction(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """Binomial tail grid, the exp(-1/2) constant and the subsampling chain under coupled Monte Carlo."""
    result = BatteryResult("reduction")
    failures = binomial_tail_grid(50)
    result.details["binomial_tail_failures"] = len(failures)
    result.violations.extend(c.name for c in failures)
    result.cases += 1
    if not -math.expm1(-0.5) > 0.25:
        result.violations.append("1 - exp(-1/2) > 1/4")
    for case in range(scale.reduction_instances):
        F = _random_family(seed, case, 5)
        config = SelectorConfig(F.p, scale.reduction_trials, case_seed(seed, 5, case), "monte-carlo")
        report = verify_subsampling_chain(F, 2, config, guards)
        result.cases += len(report.checks)
        result.violations.extend(f"instance {case}: {c.name}" for c in report.checks if not c.holds)
    return result


def battery_law(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """Multinomial law sums to one exactly; sampled frequencies agree within 4 sigma."""
    result = BatteryResult("law")
    for k in range(1, 5):
        mu = _random_mu(make_rng(case_seed(seed, 6, k), SUITE_STREAM), k)
        for N in range(0, 7):
            result.cases += 1
            guards.check("multisets", math.comb(N + k - 1, k - 1))
            total = sum((multiset_prob(W, mu, N) for W in enumerate_multisets(tuple(range(k)), N)), Fraction(0))
            if total != 1:
                result.violations.append(f"k={k} N={N}: law sums to {total}")
    worst = 0.0
    for k in range(1, 4):
        for N in range(1, 5):
            rng = make_rng(case_seed(seed, 6, 10 * k + N), 2)
            dist = MultisetDistribution(_random_mu(make_rng(case_seed(seed, 6, k), SUITE_STREAM), k), N)
            counts = sample_counts(rng, dist, scale.law_draws)
            rows, hits = np.unique(counts, axis=0, return_counts=True)
            observed = {tuple(int(c) for c in row): int(h) for row, h in zip(rows, hits, strict=True)}
            for W in enumerate_multisets(tuple(range(k)), N):
                result.cases += 1
                prob = float(multiset_prob(W, dist.mu, N))
                freq = observed.get(tuple(W.count(x) for x in range(k)), 0) / scale.law_draws
                sigma = math.sqrt(prob * (1 - prob) / scale.law_draws)
                if sigma > 0:
                    worst = max(worst, abs(freq - prob) / sigma)
                if abs(freq - prob) > SIGMAS * sigma + 1e-12:
                    result.violations.append(f"k={k} N={N} W={W}: frequency {freq:.6f} vs {prob:.6f}")
    result.details["worst_sigmas"] = round(worst, 6)
    return result


def battery_markov(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """The chain P[H] <= ... <= Poissonized cost on the worked example and random pruned elements."""
    result = BatteryResult("markov")
    half = Fraction(1, 2)
    example = markov_chain_check(Multiset.of({0: 2}), (half, half), 2, guards)
    expected = (Fraction(1, 4), Fraction(1), ExpPolynomial.term(Fraction(1, 4), 2), ExpPolynomial.term(half, 2))
    result.cases += 1
    if (example.q0, example.q1, example.q2, example.q3) != expected or not example.holds:
        result.violations.append("worked example: G={a:2}, mu=(1/2,1/2), N=2")
    for case in range(scale.markov_cases):
        rng = make_rng(case_seed(seed, 7, case), SUITE_STREAM)
        k = 1 + case % 3
        N = 1 + (case // 3) % 4
        mu = _random_mu(rng, k)
        G = prune_cover(Multiset.of({x: int(c) for x, c in enumerate(rng.integers(0, N + 1, size=k))}), mu, N)
        if not G:
            continue
        result.cases += 1
        report = markov_chain_check(G, mu, N, guards)
        result.violations.extend(f"case {case} G={G}: {c.name}" for c in report.checks if not c.holds)
    return result


def _random_instances(seed: int, scale: SuiteScale, battery: int):
    for case in range(scale.empirical_instances):
        gen = InstanceGenerator(
            "random-empirical",
            n=1 + case % 3,
            N=1 + case % 4,
            M=1 + case % 3,
            seed=case_seed(seed, battery, case),
        )
        yield case, instance_from_document(gen.generate())


def battery_coverage(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """Every tuple above 2L E sup falls in a witness event; the event budget is at most 1/2 when certified."""
    result = BatteryResult("coverage")
    tuples = 0
    for case, instance in _random_instances(seed, scale, 8):
        report = tail_coverage_check(instance, L=1, guards=guards)
        result.cases += 1
        tuples += report.tuples
        result.violations.extend(f"instance {case}: {c.name}" for c in report.checks if not c.holds)
    result.details["tuples"] = tuples
    return result


def battery_discretization(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """The +-eps sup bound on every count vector of the same instances."""
    result = BatteryResult("discretization")
    for case, instance in _random_instances(seed, scale, 8):
        bridge = prepare_bridge(instance, guards=guards)
        report = discretization_error_check(bridge.instance, bridge.partition, bridge.lam, guards)
        result.cases += 1
        if not report.holds:
            result.violations.append(f"instance {case}: {len(report.violations)} count vectors off by more than eps")
    return result


def battery_statistics(seed: int, scale: SuiteScale, guards: Guards) -> BatteryResult:
    """Monte Carlo E sup over X_p against exact enumeration, n = 10."""
    result = BatteryResult("statistics")
    misses = 0
    p = Fraction(1, 4)
    for rep in range(scale.stat_repetitions):
        rng = make_rng(case_seed(seed, 10, rep), SUITE_STREAM)
        lam = LambdaCollection.of([[Fraction(int(v), 4) for v in rng.integers(1, 5, size=10)] for _ in range(3)])
        exact = expected_sup(lam, SelectorConfig(p, arithmetic="float"), guards)
        config = SelectorConfig(p, scale.stat_trials, case_seed(seed, 10, rep), "monte-carlo")
        estimate = expected_sup(lam, config, guards)
        result.cases += 1
        if abs(float(estimate.value) - float(exact.value)) > SIGMAS * (estimate.std_err or 0.0):
            misses += 1
    allowed = scale.stat_repetitions // 100
    result.details |= {"misses": misses, "allowed": allowed}
    if misses > allowed:
        result.violations.append(f"{misses} of {scale.stat_repetitions} estimates outside {SIGMAS:g} sigma")
    return result


BATTERIES: tuple[Callable[[int, SuiteScale, Guards], BatteryResult], ...] = (
    battery_fragments,
    battery_covers,
    battery_ledger,
    battery_oracles,
    battery_reduction,
    battery_law,
    battery_markov,
    battery_coverage,
    battery_discretization,
    battery_statistics,
)


def run_suite(config: RunConfig, provider: Any = None) -> Report:
    """Run every battery at the requested scale."""
    scale_name = config.extra.get("scale") or "quick"
    if scale_name not in SCALES:
        raise ParameterError(f"unknown scale {scale_name!r}; choose from {', '.join(SCALES)}")
    scale = SCALES[scale_name]
    guards = config.guards()
    results = []
    for battery in BATTERIES:
        outcome = battery(config.seed, scale, guards)
        logger.info("%s: %d cases, %d violations", outcome.name, outcome.cases, len(outcome.violations))
        results.append(outcome)
    checks = [r.as_check() for r in results]
    payload = {"scale": scale_name, "seed": config.seed, "batteries": [r.to_dict() for r in results]}
    tables = {"batteries": build_check_table(checks), "summary": build_summary(checks)}
    return Report(config, payload, all(r.holds for r in results), tables)
