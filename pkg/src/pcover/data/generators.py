"""Deterministic instance generators; every generator is a pure function of its parameters and seed."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

from ..domain import SelectorConfig
from ..empirical.instance import FiniteEmpiricalInstance
from ..family import WeightedFamily
from ..multiset.family import MultisetFamily, MultisetMember
from ..multiset.law import MultisetDistribution
from ..multiset.multiset import Multiset
from ..selector.expectations import LambdaCollection, threshold_family
from ..selector.sampling import make_rng
from ..utils.errors import ParameterError
from .normalization import (
    family_to_document,
    instance_to_document,
    lambda_to_document,
    multiset_family_to_document,
)

logger = logging.getLogger(__name__)

GeneratorKind = Literal[
    "random-family",
    "disjoint-singletons",
    "threshold-from-lambda",
    "random-multiset-family",
    "random-empirical",
]
GENERATOR_KINDS: tuple[str, ...] = GeneratorKind.__args__

# generator streams, kept apart from the selector streams
STREAM = 100


@dataclass(frozen=True, slots=True)
class InstanceGenerator:
    kind: GeneratorKind
    n: int = 4
    members: int = 3
    N: int = 2
    M: int = 2
    p: Fraction = Fraction(1, 4)
    L: Fraction = Fraction(2)
    seed: int = 0

    def generate(self) -> dict[str, Any]:
        if self.kind not in GENERATOR_KINDS:
            raise ParameterError(f"unknown generator kind {self.kind!r}; choose from {', '.join(GENERATOR_KINDS)}")
        if self.n < 1:
            raise ParameterError(f"n must be at least 1, got {self.n}")
        build = {
            "random-family": random_family,
            "disjoint-singletons": disjoint_singletons,
            "threshold-from-lambda": threshold_from_lambda,
            "random-multiset-family": random_multiset_family,
            "random-empirical": random_empirical,
        }[self.kind]
        document = build(self)
        logger.info("generated %s with seed %d", self.kind, self.seed)
        return {"kind": self.kind, "seed": self.seed, **document}


def _rng(gen: InstanceGenerator):
    return make_rng(gen.seed, STREAM + GENERATOR_KINDS.index(gen.kind))


def disjoint_singletons(gen: InstanceGenerator) -> dict[str, Any]:
    """{{0}, {1}, ..., {n-1}} with unit weights."""
    F = WeightedFamily.from_sets(gen.n, [[i] for i in range(gen.n)], gen.p)
    return family_to_document(F)


# buckets 0 to 3; 10^-9 lies past the cutoff for every n below 10^6
WEIGHT_GRID = (
    Fraction(1),
    Fraction(3, 4),
    Fraction(1, 2),
    Fraction(1, 4),
    Fraction(1, 100),
    Fraction(1, 150),
    Fraction(1, 10**4),
    Fraction(1, 10**6),
    Fraction(1, 10**9),
)


def anchored_weights(elems: list[int], drawn: list[Fraction]) -> dict[int, Fraction]:
    """Weights as drawn, with the first element raised so the member weighs at least 1."""
    weights = dict(zip(elems, drawn, strict=True))
    rest = sum(drawn[1:], Fraction(0))
    weights[elems[0]] = max(drawn[0], 1 - rest)
    return weights


def random_family(gen: InstanceGenerator) -> dict[str, Any]:
    """members nonempty random subsets with weights from WEIGHT_GRID, each member weighing at least 1.

    Elements are kept with probability min(1/2, 6/n), so large ground sets give sparse members.
    """
    rng = _rng(gen)
    keep = min(0.5, 6 / gen.n)
    sets, weights = [], []
    for _ in range(gen.members):
        bits = rng.random(gen.n) < keep
        if not bits.any():
            bits[int(rng.integers(gen.n))] = True
        elems = [int(i) for i in bits.nonzero()[0]]
        drawn = [WEIGHT_GRID[int(k)] for k in rng.integers(0, len(WEIGHT_GRID), size=len(elems))]
        sets.append(elems)
        weights.append(anchored_weights(elems, drawn))
    return family_to_document(WeightedFamily.from_sets(gen.n, sets, gen.p, weights))


def _random_lambda(gen: InstanceGenerator) -> LambdaCollection:
    rng = _rng(gen)
    rows = [[Fraction(int(v), 4) for v in rng.integers(0, 5, size=gen.n)] for _ in range(max(1, gen.members))]
    for row in rows:
        if not any(row):
            row[0] = Fraction(1)
    return LambdaCollection.of(rows)


def threshold_from_lambda(gen: InstanceGenerator) -> dict[str, Any]:
    """Random sequences with entries k/4, and their threshold family at level L E sup over X_p."""
    lam = _random_lambda(gen)
    config = SelectorConfig(gen.p, arithmetic="exact")
    F = threshold_family(lam, gen.L, config)
    return {"lambda": lambda_to_document(lam), **family_to_document(F)}


def random_multiset_family(gen: InstanceGenerator) -> dict[str, Any]:
    """members random multisets over n elements with up to 2 copies each, uniform mu and N samples."""
    rng = _rng(gen)
    members = []
    for _ in range(gen.members):
        counts = {int(x): int(c) for x, c in enumerate(rng.integers(0, 3, size=gen.n)) if c}
        if not counts:
            counts = {int(rng.integers(gen.n)): 1}
        S = Multiset.of(counts)
        members.append(MultisetMember(S, {x: Fraction(1) for x in S.support()}))
    dist = MultisetDistribution(tuple(Fraction(1, gen.n) for _ in range(gen.n)), gen.N)
    return multiset_family_to_document(MultisetFamily(gen.n, tuple(members)), dist)


def random_empirical(gen: InstanceGenerator) -> dict[str, Any]:
    """n points with weights proportional to 1..4, M functions with values k/4 and at least one positive value."""
    rng = _rng(gen)
    raw = [int(v) for v in rng.integers(1, 5, size=gen.n)]
    nu = [Fraction(v, sum(raw)) for v in raw]
    functions = []
    for _ in range(gen.M):
        values = [Fraction(int(v), 4) for v in rng.integers(0, 5, size=gen.n)]
        if not any(values):
            values[0] = Fraction(1)
        functions.append(values)
    instance = FiniteEmpiricalInstance.of([f"y{i}" for i in range(gen.n)], nu, functions, gen.N)
    return instance_to_document(instance)
