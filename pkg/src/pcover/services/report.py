"""Reports: a JSON payload as the source of truth plus derived CSV tables."""

from __future__ import annotations

import json
import logging
import math
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd
import plotly.graph_objects as go

from ..domain import FORMAT_VERSION, InequalityCheck, RunConfig
from ..family import SubsetBits
from ..multiset.expoly import ExpPolynomial
from ..multiset.multiset import Multiset
from ..utils.errors import PCoverError
from ..viz import write_figure

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class Report:
    config: RunConfig
    payload: dict[str, Any]
    holds: bool = True
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    figure: go.Figure | None = None

    def to_document(self) -> dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "config": jsonable(self.config.to_dict()),
            "holds": self.holds,
            "result": jsonable(self.payload),
        }


def jsonable(value: Any) -> Any:
    """Exact numbers become "num/den" strings; containers are converted recursively."""
    if value is None or isinstance(value, bool | int | str):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, Fraction | ExpPolynomial):
        return str(value)
    if isinstance(value, Multiset):
        return {str(x): c for x, c in value.items}
    if isinstance(value, SubsetBits):
        return list(value.elements())
    if isinstance(value, InequalityCheck):
        return jsonable(value.to_dict())
    if isinstance(value, np.generic):
        return jsonable(value.item())
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple | set | frozenset):
        items = [jsonable(v) for v in value]
        return sorted(items, key=json.dumps) if isinstance(value, set | frozenset) else items
    if hasattr(value, "to_dict"):
        return jsonable(value.to_dict())
    raise TypeError(f"cannot serialise {type(value).__name__}")


def render_report(report: Report) -> str:
    return json.dumps(report.to_document(), indent=2, sort_keys=True) + "\n"


def table_path(out: str | Path, name: str) -> Path:
    return Path(f"{out}.{name}.csv")


def emit_report(report: Report, out: str | Path | None = None, stream: TextIO | None = None) -> list[Path]:
    """Write the JSON to out (or the stream) and each table next to it as <out>.<table>.csv."""
    text = render_report(report)
    written: list[Path] = []
    try:
        if out is None:
            (stream or sys.stdout).write(text)
            if report.tables:
                logger.info("tables are only written with --out")
        else:
            path = Path(out)
            path.write_text(text, encoding="utf-8")
            written.append(path)
            for name in sorted(report.tables):
                csv_path = table_path(out, name)
                report.tables[name].to_csv(csv_path, index=False)
                written.append(csv_path)
        plot = report.config.extra.get("plot")
        if plot and report.figure is not None:
            write_figure(report.figure, plot)
            written.append(Path(plot))
    except OSError as err:
        raise PCoverError(f"failed to write report: {err}") from err
    return written


def read_report(path: str | Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))
