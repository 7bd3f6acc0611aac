"""Reproducible random streams and selector samples."""

from __future__ import annotations

import numpy as np

from ..family import SubsetBits
from ..utils.errors import ParameterError


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for the (seed, stream) pair; streams never overlap."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def _mask_of(indices: np.ndarray, n: int) -> SubsetBits:
    mask = 0
    for i in indices.tolist():
        mask |= 1 << int(i)
    return SubsetBits(mask, n)


def sample_Xp(n: int, p: float, seed: int, stream: int = 0) -> SubsetBits:
    """Each element independently with probability p."""
    if not 0 < p < 1:
        raise ParameterError(f"p must lie in (0, 1), got {p}")
    rng = make_rng(seed, stream)
    return _mask_of(np.flatnonzero(rng.random(n) < p), n)


def sample_uniform_w_subset(n: int, w: int, seed: int, stream: int = 0) -> SubsetBits:
    """Uniform w-subset by a partial Fisher-Yates shuffle."""
    if not 0 <= w <= n:
        raise ParameterError(f"need 0 <= w <= n, got w={w} n={n}")
    rng = make_rng(seed, stream)
    items = np.arange(n)
    for i in range(w):
        j = int(rng.integers(i, n))
        items[i], items[j] = items[j], items[i]
    return _mask_of(items[:w], n)


def Xp_batch(rng: np.random.Generator, n: int, p: float, trials: int) -> np.ndarray:
    """Boolean (trials, n) membership matrix of independent X_p draws."""
    return rng.random((trials, n)) < p


def uniform_batch(rng: np.random.Generator, n: int, w: int, trials: int) -> np.ndarray:
    """Boolean (trials, n) membership matrix of uniform w-subsets."""
    order = rng.random((trials, n)).argsort(axis=1)
    members = np.zeros((trials, n), dtype=bool)
    np.put_along_axis(members, order[:, :w], True, axis=1)
    return members


def subsample_batch(rng: np.random.Generator, outer: np.ndarray, k: int) -> np.ndarray:
    """For each row, a uniform k-subset of its True entries (every row must hold at least k)."""
    keys = np.where(outer, rng.random(outer.shape), np.inf)
    order = keys.argsort(axis=1)
    inner = np.zeros_like(outer)
    np.put_along_axis(inner, order[:, :k], True, axis=1)
    return inner
