"""Visualization helpers."""

from .charts import make_ledger_chart, make_trace_chart, write_figure

__all__ = ["make_ledger_chart", "make_trace_chart", "write_figure"]
