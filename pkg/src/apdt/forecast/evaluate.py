"""Forecast accuracy reporting (shared metric definitions)."""

from __future__ import annotations

import io
from typing import Sequence

from .. import metrics
from ..timeutil import to_iso


def evaluate(predicted: Sequence[float], actual: Sequence[float]) -> dict:
    fid = metrics.fidelity_ratios(predicted, actual)
    return {
        "mae": metrics.mae(predicted, actual),
        "rmse": metrics.rmse(predicted, actual),
        "r2": metrics.r2(predicted, actual),
        "per_point_fidelity_mean": sum(fid) / len(fid),
    }


def evaluation_csv(rows: Sequence[tuple[int, float, float]]) -> str:
    """Rows of (timestamp_ms, actual_bps, predicted_bps)."""
    buf = io.StringIO()
    buf.write("timestamp,actual_bps,predicted_bps\n")
    for ts, actual, predicted in rows:
        buf.write(f"{to_iso(ts)},{actual!r},{predicted!r}\n")
    return buf.getvalue()
