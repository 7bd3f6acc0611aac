"""Running Monte Carlo traces."""

from __future__ import annotations

import math

import numpy as np
import pandas as pd
from scipy.stats import norm

TRACE_COLUMNS = ["trial", "mean", "ci_low", "ci_high"]


def compute_running_trace(samples: np.ndarray | None, confidence: float = 0.95, points: int = 200) -> pd.DataFrame:
    """Running mean with a normal confidence band, thinned to about `points` rows."""
    if samples is None or len(samples) == 0:
        return pd.DataFrame(columns=TRACE_COLUMNS)
    series = pd.Series(np.asarray(samples, dtype=float))
    mean = series.expanding().mean()
    std = series.expanding().std(ddof=1).fillna(0.0)
    trial = pd.Series(np.arange(1, len(series) + 1))
    half = float(norm.ppf(0.5 + confidence / 2)) * std / np.sqrt(trial)
    frame = pd.DataFrame({"trial": trial, "mean": mean, "ci_low": mean - half, "ci_high": mean + half})
    step = max(1, math.ceil(len(frame) / points))
    keep = frame.iloc[step - 1 :: step]
    if keep.empty or keep["trial"].iloc[-1] != len(frame):
        keep = pd.concat([keep, frame.iloc[[-1]]])
    return keep.reset_index(drop=True)
