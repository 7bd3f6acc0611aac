"""Plotly figure builders for ledgers and Monte Carlo traces."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import pandas as pd
import plotly.graph_objects as go

from ..fragments.ledger import LedgerBucket

DIV_ID = "pcover-plot"


def _empty(title: str) -> go.Figure:
    fig = go.Figure()
    fig.add_annotation(text="No data to display", showarrow=False, x=0.5, y=0.5, xref="paper", yref="paper")
    fig.update_layout(title=title, template="plotly_white")
    return fig


def make_ledger_chart(buckets: Sequence[LedgerBucket], title: str = "Bucket cost against bound") -> go.Figure:
    """Grouped bars of bucket cost and bound per (b, s_b, t), on a log axis."""
    if not buckets:
        return _empty(title)
    labels = [f"b={bk.b} s={list(bk.s_b)} t={bk.t}" for bk in buckets]
    fig = go.Figure()
    fig.add_trace(go.Bar(x=labels, y=[float(bk.cost) for bk in buckets], name="cost"))
    fig.add_trace(go.Bar(x=labels, y=[float(bk.bound) for bk in buckets], name="bound"))
    fig.update_layout(
        title=title,
        xaxis_title="Bucket",
        yaxis_title="Value",
        barmode="group",
        template="plotly_white",
    )
    fig.update_yaxes(type="log")
    return fig


def make_trace_chart(trace: pd.DataFrame, title: str = "Running estimate", exact: float | None = None) -> go.Figure:
    """Running mean with its confidence band, and the exact value when known."""
    if trace.empty:
        return _empty(title)
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=trace["trial"], y=trace["ci_high"], mode="lines", line=dict(width=0), showlegend=False))
    fig.add_trace(
        go.Scatter(
            x=trace["trial"],
            y=trace["ci_low"],
            mode="lines",
            line=dict(width=0),
            fill="tonexty",
            name="95% band",
        )
    )
    fig.add_trace(go.Scatter(x=trace["trial"], y=trace["mean"], mode="lines", name="mean"))
    if exact is not None:
        fig.add_hline(y=exact, line_dash="dash", annotation_text="exact")
    fig.update_layout(title=title, xaxis_title="Trials", yaxis_title="Estimate", template="plotly_white")
    return fig


def write_figure(fig: go.Figure, path: str | Path) -> None:
    """HTML with a fixed div id so repeated runs produce the same file."""
    fig.write_html(str(path), include_plotlyjs="cdn", full_html=True, div_id=DIV_ID)
