"""Suprema of selector processes and their expectations."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

import numpy as np
from scipy.stats import norm

from ..domain import DEFAULT_GUARDS, Guards, SelectorConfig
from ..family import Member, SubsetBits, WeightedFamily
from ..utils.errors import ParameterError
from ..utils.rationals import Number, to_fraction
from .sampling import Xp_batch, make_rng, uniform_batch

logger = logging.getLogger(__name__)

CHUNK = 1 << 14
CONFIDENCE = 0.95


@dataclass(frozen=True, slots=True)
class LambdaCollection:
    n: int
    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not self.vectors:
            raise ParameterError("empty collection of sequences")
        for k, vec in enumerate(self.vectors):
            if len(vec) != self.n:
                raise ParameterError(f"sequence {k} has length {len(vec)}, expected {self.n}")
            if any(v < 0 for v in vec):
                raise ParameterError(f"sequence {k} has a negative entry")

    @classmethod
    def of(cls, vectors: Iterable[Sequence[Number]]) -> LambdaCollection:
        rows = tuple(tuple(to_fraction(v) for v in vec) for vec in vectors)
        if not rows:
            raise ParameterError("empty collection of sequences")
        return cls(len(rows[0]), rows)

    @classmethod
    def from_family(cls, F: WeightedFamily) -> LambdaCollection:
        """The weight vectors lambda^S, zero off S."""
        rows = tuple(tuple(m.weight(i) for i in range(F.ground.n)) for m in F.members)
        return cls(F.ground.n, rows)

    def scaled(self, c: Number) -> LambdaCollection:
        factor = to_fraction(c)
        return LambdaCollection(self.n, tuple(tuple(v * factor for v in vec) for vec in self.vectors))

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in vec] for vec in self.vectors], dtype=float)

    def __len__(self) -> int:
        return len(self.vectors)


def _as_collection(source: LambdaCollection | WeightedFamily) -> LambdaCollection:
    return LambdaCollection.from_family(source) if isinstance(source, WeightedFamily) else source


def sup_weighted(source: LambdaCollection | WeightedFamily, A: SubsetBits) -> Fraction:
    """max over sequences of the weight inside A (for a family, max over S of lambda^S(S & A))."""
    if isinstance(source, WeightedFamily):
        if not source.members:
            return Fraction(0)
        return max(m.captured(A.mask) for m in source.members)
    elems = A.elements()
    return max(sum((vec[i] for i in elems), Fraction(0)) for vec in source.vectors)


@dataclass(frozen=True, slots=True)
class SupEstimate:
    value: float | Fraction
    exact: bool
    ci_low: float | None = None
    ci_high: float | None = None
    std_err: float | None = None
    trials: int = 0
    samples: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        value = str(self.value) if isinstance(self.value, Fraction) else self.value
        return {
            "value": value,
            "exact": self.exact,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "std_err": self.std_err,
            "trials": self.trials,
        }


def _bits(masks: np.ndarray, n: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(n)) & 1).astype(float)


def _from_samples(sups: np.ndarray) -> SupEstimate:
    trials = len(sups)
    mean = float(sups.mean())
    std_err = float(sups.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    z = float(norm.ppf(0.5 + CONFIDENCE / 2))
    return SupEstimate(mean, False, mean - z * std_err, mean + z * std_err, std_err, trials, sups)


def _exact_Xp(lam: LambdaCollection, p: Fraction) -> Fraction:
    n = lam.n
    total = Fraction(0)
    q = 1 - p
    for mask in range(1 << n):
        k = mask.bit_count()
        total += p**k * q ** (n - k) * sup_weighted(lam, SubsetBits(mask, n))
    return total


def _float_Xp(lam: LambdaCollection, p: float) -> float:
    n = lam.n
    weights = lam.as_array().T
    total = 0.0
    for start in range(0, 1 << n, CHUNK):
        masks = np.arange(start, min(start + CHUNK, 1 << n), dtype=np.int64)
        bits = _bits(masks, n)
        sizes = bits.sum(axis=1)
        probs = np.exp(sizes * math.log(p) + (n - sizes) * math.log1p(-p))
        total += float(np.dot(probs, (bits @ weights).max(axis=1)))
    return total


def expected_sup(
    source: LambdaCollection | WeightedFamily, config: SelectorConfig, guards: Guards = DEFAULT_GUARDS
) -> SupEstimate:
    """E sup over X_p: exact enumeration of all 2^n outcomes or Monte Carlo with a normal CI."""
    lam = _as_collection(source)
    p = to_fraction(config.p)
    if not 0 < p < 1:
        raise ParameterError(f"p must lie in (0, 1), got {p}")
    if config.mode == "exact-enumeration":
        guards.check("expectation_bits", lam.n)
        if config.arithmetic == "exact":
            if lam.n <= guards.rational_bits:
                return SupEstimate(_exact_Xp(lam, p), True)
            logger.warning("n=%d above rational_bits=%d, enumerating in floats", lam.n, guards.rational_bits)
        return SupEstimate(_float_Xp(lam, float(p)), True)
    rng = make_rng(config.seed, 0)
    members = Xp_batch(rng, lam.n, float(p), config.trials)
    sups = (members.astype(float) @ lam.as_array().T).max(axis=1)
    return _from_samples(sups)


def expected_sup_uniform(
    source: LambdaCollection | WeightedFamily, w: int, config: SelectorConfig, guards: Guards = DEFAULT_GUARDS
) -> SupEstimate:
    """E sup over a uniform W of size w."""
    lam = _as_collection(source)
    n = lam.n
    if not 0 <= w <= n:
        raise ParameterError(f"need 0 <= w <= n, got w={w} n={n}")
    if config.mode == "exact-enumeration":
        count = math.comb(n, w)
        guards.check("subsets_w", count)
        if config.arithmetic == "exact":
            total = Fraction(0)
            for combo in combinations(range(n), w):
                total += sup_weighted(lam, SubsetBits(sum(1 << i for i in combo), n))
            return SupEstimate(total / count, True)
        weights = lam.as_array().T
        sums = 0.0
        combos = combinations(range(n), w)
        while True:
            block = [sum(1 << i for i in c) for _, c in zip(range(CHUNK), combos)]
            if not block:
                break
            bits = _bits(np.array(block, dtype=np.int64), n)
            sums += float((bits @ weights).max(axis=1).sum())
        return SupEstimate(sums / count, True)
    rng = make_rng(config.seed, 1)
    members = uniform_batch(rng, n, w, config.trials)
    sups = (members.astype(float) @ lam.as_array().T).max(axis=1)
    return _from_samples(sups)


def threshold_family(
    lam: LambdaCollection,
    L: Number,
    config: SelectorConfig,
    M: Number | None = None,
    normalize: bool = False,
    guards: Guards = DEFAULT_GUARDS,
) -> WeightedFamily:
    """{S : sup_lambda lambda(S) >= L M} with lambda^S the first maximizing sequence restricted to S.

    M defaults to E sup over X_p. With normalize the attached weights are divided by L M.
    """
    n = lam.n
    guards.check("expectation_bits", n)
    if M is None:
        estimate = expected_sup(lam, config, guards)
        M_exact = estimate.value if isinstance(estimate.value, Fraction) else to_fraction(float(estimate.value))
    else:
        M_exact = to_fraction(M)
    level = to_fraction(L) * M_exact
    if level <= 0:
        raise ParameterError(f"threshold L*M must be positive, got {level}")

    # float screen with a relative margin, then exact comparison on the survivors
    weights = lam.as_array().T
    candidates: list[int] = []
    margin = float(level) * (1 - 1e-9)
    for start in range(0, 1 << n, CHUNK):
        masks = np.arange(start, min(start + CHUNK, 1 << n), dtype=np.int64)
        sups = (_bits(masks, n) @ weights).max(axis=1)
        candidates.extend(int(m) for m in masks[sups >= margin])

    members = []
    for mask in candidates:
        elems = [i for i in range(n) if mask >> i & 1]
        totals = [sum((vec[i] for i in elems), Fraction(0)) for vec in lam.vectors]
        best = max(totals)
        if best < level:
            continue
        vec = lam.vectors[totals.index(best)]
        scale = level if normalize else Fraction(1)
        members.append(Member(SubsetBits(mask, n), {i: vec[i] / scale for i in elems}))
    family = WeightedFamily.from_sets(n, [], config.p).with_members(members)
    logger.info("threshold family at level %s has %d members", level, len(family))
    return family
