"""Cell partitions of the sample space by the values of the functions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..domain import DEFAULT_GUARDS, Guards
from ..multiset.law import multiset_prob
from ..multiset.multiset import Multiset, count_multisets, enumerate_multisets
from ..selector.expectations import LambdaCollection
from ..utils.errors import ParameterError
from ..utils.rationals import Number, to_fraction
from .instance import FiniteEmpiricalInstance

logger = logging.getLogger(__name__)

CellKey = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class CellPartition:
    """Nonempty cells I(k_1..k_M) with k_i = floor(f_i(y) / eps), and the pushforward mu of nu."""

    eps: Fraction
    U: Fraction
    cells: tuple[CellKey, ...]
    assignment: tuple[int, ...]
    mu: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.cells)

    def cell_of(self, point: int) -> int:
        return self.assignment[point]

    def push(self, W: Multiset) -> Multiset:
        """Counts of points mapped to counts of cells."""
        counts: dict[int, int] = {}
        for y, c in W.items:
            cell = self.assignment[y]
            counts[cell] = counts.get(cell, 0) + c
        return Multiset.of(counts)

    def members(self, cell: int) -> tuple[int, ...]:
        return tuple(y for y, x in enumerate(self.assignment) if x == cell)

    def to_dict(self) -> dict[str, Any]:
        return {
            "eps": str(self.eps),
            "U": str(self.U),
            "cells": [list(k) for k in self.cells],
            "assignment": list(self.assignment),
            "mu": [str(m) for m in self.mu],
        }


def discretize(instance: FiniteEmpiricalInstance, eps: Number) -> tuple[CellPartition, LambdaCollection]:
    """Only nonempty cells are built; lambda^i on cell (k_1..k_M) is k_i eps."""
    eps = to_fraction(eps)
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    keys = [tuple(math.floor(f[y] / eps) for f in instance.functions) for y in range(instance.size)]
    cells = tuple(sorted(set(keys)))
    index = {key: i for i, key in enumerate(cells)}
    assignment = tuple(index[key] for key in keys)
    mu = [Fraction(0)] * len(cells)
    for y, cell in enumerate(assignment):
        mu[cell] += instance.nu[y]
    partition = CellPartition(eps, instance.U, cells, assignment, tuple(mu))
    lam = LambdaCollection(len(cells), tuple(tuple(key[i] * eps for key in cells) for i in range(instance.M)))
    logger.info("eps=%s gives %d cells for %d points", eps, len(cells), instance.size)
    return partition, lam


def refines(fine: CellPartition, coarse: CellPartition) -> bool:
    """Every fine cell lies inside a single coarse cell."""
    image: dict[int, int] = {}
    for y, cell in enumerate(fine.assignment):
        if image.setdefault(cell, coarse.assignment[y]) != coarse.assignment[y]:
            return False
    return True


@dataclass(slots=True)
class DiscretizationReport:
    eps: Fraction
    max_error: Fraction = Fraction(0)
    violations: list[tuple[Multiset, Fraction]] = field(default_factory=list)
    expected_sup: Fraction = Fraction(0)
    expected_cell_sup: Fraction = Fraction(0)

    @property
    def expected_gap(self) -> Fraction:
        return abs(self.expected_sup - self.expected_cell_sup)

    @property
    def holds(self) -> bool:
        return not self.violations and self.expected_gap <= self.eps

    def to_dict(self) -> dict[str, Any]:
        return {
            "eps": str(self.eps),
            "max_error": str(self.max_error),
            "violations": [{"W": repr(W), "error": str(err)} for W, err in self.violations],
            "expected_sup": str(self.expected_sup),
            "expected_cell_sup": str(self.expected_cell_sup),
            "expected_gap": str(self.expected_gap),
            "holds": self.holds,
        }


def cell_sup(lam: LambdaCollection, cells: Multiset, N: int) -> Fraction:
    """(1/N) sup_i sum_x W(x) lambda^i(x)."""
    return max(sum((c * vec[x] for x, c in cells.items), Fraction(0)) for vec in lam.vectors) / N


def discretization_error_check(
    instance: FiniteEmpiricalInstance,
    partition: CellPartition,
    lam: LambdaCollection,
    guards: Guards = DEFAULT_GUARDS,
) -> DiscretizationReport:
    """|sup Z_f - (1/N) sup sum W lambda| <= eps for every sample, and the same for the expectations.

    Both sides depend on a sample only through its point counts, so every count vector is checked once.
    """
    guards.check("multisets", count_multisets(instance.size, instance.N))
    report = DiscretizationReport(partition.eps)
    for W in enumerate_multisets(tuple(range(instance.size)), instance.N):
        direct = instance.sup_Z_counts(W)
        cells = cell_sup(lam, partition.push(W), instance.N)
        error = abs(direct - cells)
        report.max_error = max(report.max_error, error)
        if error > partition.eps:
            report.violations.append((W, error))
        prob = multiset_prob(W, instance.nu, instance.N)
        report.expected_sup += prob * direct
        report.expected_cell_sup += prob * cells
    if report.violations:
        logger.warning("%d count vectors exceed the eps bound", len(report.violations))
    return report
