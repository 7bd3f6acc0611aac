"""One entry point per subcommand; each turns a RunConfig into a Report."""

from __future__ import annotations

import logging
from collections.abc import Callable
from fractions import Fraction
from typing import Any

from ..analytics import build_bucket_table, build_check_table, build_escape_table, compute_running_trace
from ..data import (
    DocumentProvider,
    InstanceGenerator,
    JsonFileProvider,
    distribution_from_document,
    family_from_document,
    instance_from_document,
    lambda_from_document,
    multiset_family_from_document,
    subset_from_document,
)
from ..domain import DEFAULT_CONSTANTS, RunConfig, SelectorConfig
from ..empirical import (
    containment_violations,
    discretization_error_check,
    markov_chain_check,
    prepare_bridge,
    symmetric_witness_sets,
    tail_coverage_check,
)
from ..family import cover_cost, covers, greedy_cover, is_p_small, log_cover_cost
from ..fragments import (
    aggregate_bad_cost,
    aj_series,
    build_cover,
    check_fragment_properties,
    classify_W,
    fragments_for,
    process_family,
)
from ..multiset import (
    aggregate_bad_cost_multi,
    min_multiset_cover_cost_exact,
    process_multiset_family,
    verify_tail_conclusion,
)
from ..selector import LambdaCollection, expected_sup, expected_sup_uniform, verify_subsampling_chain, verify_uniform_conclusion
from ..utils.errors import ParameterError, PCoverError
from ..utils.rationals import to_fraction
from ..viz import make_ledger_chart, make_trace_chart
from .report import Report
from .suite import run_suite

logger = logging.getLogger(__name__)

Runner = Callable[[RunConfig, DocumentProvider], Report]


def _need(value: Any, flag: str) -> Any:
    if value is None:
        raise ParameterError(f"{flag} is required for this subcommand")
    return value


def _selector(config: RunConfig, p: Fraction) -> SelectorConfig:
    mode = "monte-carlo" if config.extra.get("estimator") == "monte-carlo" else "exact-enumeration"
    return SelectorConfig(p, config.trials, config.seed, mode, config.mode)


def _optional_float(config: RunConfig, key: str) -> float | None:
    value = config.extra.get(key)
    return None if value is None else float(to_fraction(value))


def run_certify(config: RunConfig, provider: DocumentProvider) -> Report:
    """Exact p-smallness certificate, optionally with the greedy upper bound."""
    guards = config.guards()
    F = family_from_document(provider.load(_need(config.family, "--family")), config.p)
    certificate = is_p_small(F, guards=guards)
    valid = certificate.validate(F)
    payload: dict[str, Any] = {
        "n": F.ground.n,
        "members": len(F),
        "p": F.p,
        "certificate": certificate.to_dict(),
        "valid": valid,
    }
    if certificate.witness_cover is not None and certificate.witness_cover.elements:
        payload["log_cost"] = log_cover_cost(certificate.witness_cover, F.p)
    if config.extra.get("greedy"):
        greedy = greedy_cover(F, guards=guards)
        payload["greedy"] = {
            "cover": [list(e.elements()) for e in greedy.elements],
            "cost": cover_cost(greedy, F.p),
            "covers": covers(greedy, F),
        }
    logger.info("certify: %s with cost %s", certificate.verdict, certificate.min_cost)
    return Report(config, payload, holds=valid)


def run_fragment(config: RunConfig, provider: DocumentProvider) -> Report:
    """Minimum fragments of every member for one W, with their structural checks and the cover U(W)."""
    guards = config.guards()
    F = family_from_document(provider.load(_need(config.family, "--family")), config.p or "1/2")
    W = subset_from_document([int(x) for x in _need(config.W, "--W").split(",") if x.strip()], F.ground.n)
    processed = process_family(F, DEFAULT_CONSTANTS)
    D = processed.family
    results = fragments_for(D, W, guards)
    violations = {idx: check_fragment_properties(D, idx, W, r) for idx, r in enumerate(results)}
    violations = {idx: v for idx, v in violations.items() if v}
    cover = build_cover(D, W, guards)
    covered = covers(cover, F)
    payload = {
        "W": W,
        "classification": classify_W(D, W),
        "tau": D.tau,
        "weights": [r.to_dict() for r in processed.reports],
        "fragments": [r.to_dict() for r in results],
        "cover": [list(e.elements()) for e in cover.elements],
        "covers": covered,
        "violations": violations,
    }
    return Report(config, payload, holds=covered and not violations)


def run_ledger(config: RunConfig, provider: DocumentProvider) -> Report:
    """Exact bad-W cost against the bucketwise counting bound, plus the a_j series for J."""
    guards = config.guards()
    F = family_from_document(provider.load(_need(config.family, "--family")), config.p)
    J = to_fraction(_need(config.J, "--J"))
    D = process_family(F).family
    ledger = aggregate_bad_cost(D, J, guards)
    payload: dict[str, Any] = {"ledger": ledger.to_dict()}
    if J > 4:
        series = aj_series(float(J), D.tau, D.constants.base, float(D.constants.profile_fraction))
        payload["series"] = series.to_dict()
    tables = {"buckets": build_bucket_table(ledger.buckets), "checks": build_check_table(ledger.checks)}
    return Report(config, payload, ledger.holds, tables, make_ledger_chart(ledger.buckets))


def _lambda_source(config: RunConfig, provider: DocumentProvider, p: Fraction):
    if config.lambda_path is not None:
        return lambda_from_document(provider.load(config.lambda_path))
    return LambdaCollection.from_family(family_from_document(provider.load(_need(config.family, "--family or --lambda")), p))


def run_estimate(config: RunConfig, provider: DocumentProvider) -> Report:
    """E sup over X_p, and over a uniform w-subset when --w is given; Monte Carlo runs also get a trace."""
    guards = config.guards()
    p = to_fraction(_need(config.p, "--p"))
    selector = _selector(config, p)
    lam = _lambda_source(config, provider, p)
    estimate = expected_sup(lam, selector, guards)
    payload: dict[str, Any] = {"n": lam.n, "sequences": len(lam), "Xp": estimate.to_dict()}
    tables, figure = {}, None
    if estimate.samples is not None:
        trace = compute_running_trace(estimate.samples)
        tables["trace"] = trace
        figure = make_trace_chart(trace, "E sup over X_p")
    w = config.extra.get("w")
    if w is not None:
        payload["uniform"] = {"w": int(w), **expected_sup_uniform(lam, int(w), selector, guards).to_dict()}
    return Report(config, payload, True, tables, figure)


def run_reduce(config: RunConfig, provider: DocumentProvider) -> Report:
    """The chain from X_p down to a uniform floor(K n p)-subset, and the uniform estimate itself."""
    guards = config.guards()
    F = family_from_document(provider.load(_need(config.family, "--family")), config.p)
    K = to_fraction(_need(config.K, "--K"))
    selector = _selector(config, F.p)
    chain = verify_subsampling_chain(F, K, selector, guards)
    uniform = verify_uniform_conclusion(F, K, selector, guards)
    payload = {"chain": chain.to_dict(), "uniform": uniform.to_dict()}
    return Report(config, payload, chain.holds, {"checks": build_check_table(chain.checks)})


def _multiset_inputs(config: RunConfig, provider: DocumentProvider):
    doc = provider.load(_need(config.family, "--family"))
    K = None if config.K is None else int(to_fraction(config.K))
    return multiset_family_from_document(doc), distribution_from_document(doc, config.N, K)


def run_mcertify(config: RunConfig, provider: DocumentProvider) -> Report:
    """Exact Poissonized min cover and, for uncoverable families, the tail conclusion under the KN law."""
    guards = config.guards()
    F, dist = _multiset_inputs(config, provider)
    cost, cover = min_multiset_cover_cost_exact(F.multisets(), dist.mu, dist.N, guards)
    payload: dict[str, Any] = {
        "k": F.k,
        "members": len(F),
        "N": dist.N,
        "K": dist.K,
        "cost": cost,
        "cost_float": float(cost),
        "cover": cover,
        "coverable": cost <= Fraction(1, 2),
    }
    holds = True
    if F.members:
        tail = verify_tail_conclusion(
            F,
            dist,
            _selector(config, Fraction(1, 2)),
            _optional_float(config, "J0"),
            _optional_float(config, "c"),
            guards=guards,
        )
        payload["tail"] = tail.to_dict()
        holds = tail.holds
    return Report(config, payload, holds)


def run_mledger(config: RunConfig, provider: DocumentProvider) -> Report:
    """Probability-weighted bad-W cost of multiset covers against (e/K)^t 2^(3 n_b)."""
    guards = config.guards()
    F, dist = _multiset_inputs(config, provider)
    processed = process_multiset_family(F)
    J0 = None if config.J is None else float(to_fraction(config.J))
    ledger = aggregate_bad_cost_multi(processed.family, dist, J0, _optional_float(config, "c"), guards)
    payload = {"weights": [r.to_dict() for r in processed.reports], "ledger": ledger.to_dict()}
    tables = {"buckets": build_bucket_table(ledger.buckets), "checks": build_check_table(ledger.checks)}
    return Report(config, payload, ledger.holds, tables, make_ledger_chart(ledger.buckets))


def run_bridge(config: RunConfig, provider: DocumentProvider) -> Report:
    """Discretize, cover the threshold family and verify every witness event."""
    guards = config.guards()
    instance = instance_from_document(provider.load(_need(config.instance, "--instance")), config.N)
    L = config.L or "1"
    bridge = prepare_bridge(instance, config.eps, L, guards=guards)
    errors = discretization_error_check(bridge.instance, bridge.partition, bridge.lam, guards)
    markov = [markov_chain_check(event.G, bridge.partition.mu, bridge.instance.N, guards) for event in bridge.events]
    escapes = {repr(event.G): containment_violations(event, guards) for event in bridge.events}
    escapes = {key: v for key, v in escapes.items() if v}
    checks = [check for report in markov for check in report.checks]
    payload = {
        "bridge": bridge.to_dict(),
        "discretization": errors.to_dict(),
        "markov": [report.to_dict() for report in markov],
        "containment_violations": escapes,
    }
    holds = errors.holds and all(r.holds for r in markov) and not escapes
    return Report(config, payload, holds, {"checks": build_check_table(checks)})


def run_coverage(config: RunConfig, provider: DocumentProvider) -> Report:
    """Exhaustive tail coverage by the witness events of the exact min cover."""
    guards = config.guards()
    instance = instance_from_document(provider.load(_need(config.instance, "--instance")), config.N)
    L_tail = config.extra.get("L_tail")
    bridge = prepare_bridge(instance, config.eps, config.L or "1", guards=guards)
    report = tail_coverage_check(instance, L_tail=L_tail, guards=guards, bridge=bridge)
    sets = symmetric_witness_sets(bridge.cover, bridge.partition.mu, bridge.instance.N, _optional_float(config, "c"))
    payload = {"coverage": report.to_dict(), "symmetric_sets": {str(k): v.to_dict() for k, v in sets.items()}}
    tables = {"escapes": build_escape_table(report.escapes), "checks": build_check_table(report.checks)}
    holds = report.holds and all(s.symmetric for s in sets.values())
    return Report(config, payload, holds, tables)


def run_gen(config: RunConfig) -> dict[str, Any]:
    """The generated document itself; gen has no report wrapper."""
    extra = config.extra
    generator = InstanceGenerator(
        kind=_need(extra.get("kind"), "--kind"),
        n=int(extra.get("n", 4)),
        members=int(extra.get("members", 3)),
        N=config.N or 2,
        M=int(extra.get("M", 2)),
        p=to_fraction(config.p or "1/4"),
        L=to_fraction(config.L or "2"),
        seed=config.seed,
    )
    return generator.generate()


RUNNERS: dict[str, Runner] = {
    "certify": run_certify,
    "fragment": run_fragment,
    "ledger": run_ledger,
    "estimate": run_estimate,
    "reduce": run_reduce,
    "mcertify": run_mcertify,
    "mledger": run_mledger,
    "bridge": run_bridge,
    "coverage": run_coverage,
    "suite": run_suite,
}


def execute(config: RunConfig, provider: DocumentProvider | None = None) -> Report:
    """Dispatch a report-producing subcommand."""
    try:
        runner = RUNNERS[config.subcommand]
    except KeyError as err:
        raise ParameterError(f"unknown subcommand {config.subcommand!r}") from err
    try:
        return runner(config, provider or JsonFileProvider())
    except Exception as err:
        if isinstance(err, PCoverError):
            raise
        raise PCoverError(f"{config.subcommand} failed: {err}") from err
