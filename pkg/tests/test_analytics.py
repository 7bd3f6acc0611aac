from fractions import Fraction

import numpy as np
import pytest

from pcover.analytics import (
    build_bucket_table,
    build_check_table,
    build_escape_table,
    build_summary,
    compute_running_trace,
)
from pcover.domain import InequalityCheck
from pcover.fragments.ledger import LedgerBucket
from pcover.viz import make_ledger_chart, make_trace_chart, write_figure

CHECKS = [
    InequalityCheck("bucket b=0", Fraction(3, 4), 6, True),
    InequalityCheck("bucket b=1", Fraction(7, 4), 1, False),
    InequalityCheck("lhs <= global", Fraction(1, 2), Fraction(1), True),
]


def test_check_table_keeps_exact_values():
    table = build_check_table(CHECKS)
    assert list(table.columns) == ["name", "relation", "lhs", "rhs", "holds"]
    assert table.loc[0, "lhs"] == "3/4"
    assert table["holds"].tolist() == [True, False, True]


def test_summary_groups_by_prefix():
    summary = build_summary(CHECKS)
    assert summary["group"].tolist() == ["bucket", "lhs"]
    assert summary["passed"].tolist() == [1, 1]
    assert summary["failed"].tolist() == [1, 0]
    assert build_summary([]).empty


def test_bucket_and_escape_tables():
    bucket = LedgerBucket(0, (1,), 1, Fraction(3, 4), Fraction(6), True)
    table = build_bucket_table([bucket])
    assert list(table.columns) == ["b", "s_b", "t", "bucket_cost", "bound"]
    assert build_bucket_table([]).empty
    escapes = build_escape_table([((0, 1), Fraction(5, 2))])
    assert escapes.to_dict("records") == [{"tuple": "0 1", "sup": "5/2"}]


def test_running_trace_is_thinned_and_ends_at_the_last_trial():
    samples = np.random.default_rng(0).random(1000)
    trace = compute_running_trace(samples, points=100)
    assert len(trace) == 100
    assert trace["trial"].iloc[-1] == 1000
    assert trace["mean"].iloc[-1] == pytest.approx(samples.mean())
    assert (trace["ci_low"] <= trace["ci_high"]).all()
    assert compute_running_trace(None).empty


def test_charts(tmp_path):
    bucket = LedgerBucket(0, (1,), 1, Fraction(3, 4), Fraction(6), True)
    assert len(make_ledger_chart([bucket]).data) == 2
    assert len(make_ledger_chart([]).data) == 0
    trace = compute_running_trace(np.ones(10))
    figure = make_trace_chart(trace, exact=1.0)
    assert len(figure.data) == 3
    path = tmp_path / "trace.html"
    write_figure(figure, path)
    assert "pcover-plot" in path.read_text(encoding="utf-8")
