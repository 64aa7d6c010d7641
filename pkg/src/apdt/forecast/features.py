"""Hourly aggregation and regression feature construction.

The model grid is hourly: native 10 s bins are re-binned upstream, and a
feature row exists only where the target and both lags (previous hour,
same hour yesterday) exist — gaps drop rows rather than fabricate data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import EmptySeries, InsufficientHistory, SchemaViolation
from ..model import Metric, MetricSeries
from ..timeutil import MS_PER_HOUR, hour_bin, hour_of_day

FEATURE_NAMES = ("intercept", "sin_hour", "cos_hour", "lag_1", "lag_24")
MIN_HISTORY_HOURS = 25


@dataclass(frozen=True)
class HourlyProfile:
    """Hour-of-day means; hours with no samples are None."""

    means: tuple[Optional[float], ...]  # length 24
    sample_counts: tuple[int, ...]

    def argmax_hour(self) -> int:
        best_hour, best = -1, -math.inf
        for h, v in enumerate(self.means):
            if v is not None and v > best:
                best_hour, best = h, v
        return best_hour


@dataclass(frozen=True)
class DesignMatrix:
    X: np.ndarray  # (n, 5)
    y: np.ndarray  # (n,)
    timestamps: tuple[int, ...]
    feature_names: tuple[str, ...] = FEATURE_NAMES

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def p(self) -> int:
        return int(self.X.shape[1])

    def validate(self) -> None:
        if not np.isfinite(self.X).all() or not np.isfinite(self.y).all():
            raise SchemaViolation("design matrix contains non-finite values")

    def validate_for_fit(self) -> None:
        self.validate()
        if self.n < self.p:
            raise InsufficientHistory(f"{self.n} rows < {self.p} features")


def aggregate_hourly(series: MetricSeries) -> HourlyProfile:
    """Hour-of-day means over the whole series window."""
    if series.metric is not Metric.BYTE_RATE:
        raise SchemaViolation(f"hourly profile is defined on BYTE_RATE, got {series.metric.value}")
    if not series.points:
        raise EmptySeries(f"{series.ap_id}: no points")
    sums = [0.0] * 24
    counts = [0] * 24
    weights = series.counts if len(series.counts) == len(series.points) else None
    for i, (ts, v) in enumerate(series.points):
        w = weights[i] if weights else 1
        h = hour_bin(ts)
        sums[h] += v * w
        counts[h] += w
    means = tuple(sums[h] / counts[h] if counts[h] else None for h in range(24))
    return HourlyProfile(means=means, sample_counts=tuple(counts))


def hour_features(ts_ms: int, lag_1: float, lag_24: float) -> list[float]:
    h = hour_of_day(ts_ms)
    angle = 2.0 * math.pi * h / 24.0
    return [1.0, math.sin(angle), math.cos(angle), lag_1, lag_24]


def build_features(series: MetricSeries, now: Optional[int] = None) -> DesignMatrix:
    """One row per hour with target and both lags available, chronological."""
    if series.bin_seconds != 3600:
        raise SchemaViolation(f"features need hourly bins, got {series.bin_seconds}s")
    points = {ts: v for ts, v in series.points if now is None or ts <= now}
    if len(points) < MIN_HISTORY_HOURS:
        raise InsufficientHistory(
            f"{len(points)} hourly points < required {MIN_HISTORY_HOURS}"
        )
    rows, targets, stamps = [], [], []
    for ts in sorted(points):
        lag_1 = points.get(ts - MS_PER_HOUR)
        lag_24 = points.get(ts - 24 * MS_PER_HOUR)
        if lag_1 is None or lag_24 is None:
            continue
        rows.append(hour_features(ts, lag_1, lag_24))
        targets.append(points[ts])
        stamps.append(ts)
    if not rows:
        raise InsufficientHistory("no rows with both lags available")
    dm = DesignMatrix(
        X=np.asarray(rows, dtype=np.float64),
        y=np.asarray(targets, dtype=np.float64),
        timestamps=tuple(stamps),
    )
    dm.validate()
    return dm
