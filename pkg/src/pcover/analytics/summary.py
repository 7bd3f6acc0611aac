"""Summary tables for verification reports."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Any

import pandas as pd

from ..domain import InequalityCheck
from ..fragments.ledger import LedgerBucket

CHECK_COLUMNS = ["name", "relation", "lhs", "rhs", "holds"]
BUCKET_COLUMNS = ["b", "s_b", "t", "bucket_cost", "bound"]
ESCAPE_COLUMNS = ["tuple", "sup"]


def _cell(value: Any) -> Any:
    """Exact values as strings, everything else as is."""
    if isinstance(value, bool | int | float | str) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple | list):
        return " ".join(str(_cell(v)) for v in value)
    return str(value)


def build_check_table(checks: Iterable[InequalityCheck]) -> pd.DataFrame:
    """One row per verified inequality."""
    rows = [
        {"name": c.name, "relation": c.relation, "lhs": _cell(c.lhs), "rhs": _cell(c.rhs), "holds": c.holds}
        for c in checks
    ]
    return pd.DataFrame(rows, columns=CHECK_COLUMNS)


def build_bucket_table(buckets: Sequence[LedgerBucket]) -> pd.DataFrame:
    """Ledger buckets in the fixed b,s_b,t,bucket_cost,bound schema."""
    return pd.DataFrame([bucket.to_row() for bucket in buckets], columns=BUCKET_COLUMNS)


def build_escape_table(escapes: Sequence[tuple[tuple[int, ...], Fraction]]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"tuple": " ".join(map(str, t)), "sup": str(sup)} for t, sup in escapes],
        columns=ESCAPE_COLUMNS,
    )


def build_summary(checks: Iterable[InequalityCheck]) -> pd.DataFrame:
    """Counts of passing and failing checks per name prefix (text before the first space)."""
    table = build_check_table(checks)
    if table.empty:
        return pd.DataFrame(columns=["group", "passed", "failed"])
    table["group"] = table["name"].str.split(" ").str[0]
    grouped = table.groupby("group", sort=True)["holds"]
    summary = pd.DataFrame({"passed": grouped.sum(), "failed": grouped.count() - grouped.sum()})
    return summary.reset_index()[["group", "passed", "failed"]]
