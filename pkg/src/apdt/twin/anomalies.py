"""Staleness and spike detection over the twin's retained series.

Detection is a pure function of store contents: the reference "now" is the
latest snapshot's timestamp, never the wall clock, so two replays of the
same log flag the same anomalies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import NotFound
from ..model import Anomaly, Metric
from .store import TwinStore


@dataclass(frozen=True)
class AnomalyPolicy:
    stale_after_seconds: int = 60
    spike_zscore: float = 4.0
    spike_window_seconds: int = 24 * 3600
    min_trailing_points: int = 2


def detect_anomalies(store: TwinStore, policy: AnomalyPolicy = AnomalyPolicy()) -> list[Anomaly]:
    try:
        snap = store.get_snapshot()
    except NotFound:
        return []
    now = snap.taken_at
    out: list[Anomaly] = []

    stale_ms = policy.stale_after_seconds * 1000
    for ap in snap.aps:
        if now - ap.last_seen > stale_ms:
            out.append(
                Anomaly(
                    ap_id=ap.ap_id,
                    metric=None,
                    detected_at=now,
                    kind="STALE_AP",
                    detail=f"last_seen {(now - ap.last_seen) / 1000.0:.0f}s ago "
                    f"(threshold {policy.stale_after_seconds}s)",
                )
            )

    # Spikes on AP-aggregate byte rate: z-score of the latest native bin
    # against the trailing window (latest bin excluded, stddev must be > 0).
    for ap_id, band, metric in store.series_keys():
        if band is not None or metric is not Metric.BYTE_RATE:
            continue
        series = store.query_series(
            ap_id, metric, (now - policy.spike_window_seconds * 1000, now + 1)
        )
        if len(series.points) < policy.min_trailing_points + 1:
            continue
        *trail, (last_ts, last_v) = series.points
        values = [v for _, v in trail]
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / len(values)
        std = math.sqrt(var)
        if std <= 0.0:
            continue
        z = (last_v - mean) / std
        if z > policy.spike_zscore:
            out.append(
                Anomaly(
                    ap_id=ap_id,
                    metric=metric,
                    detected_at=last_ts,
                    kind="METRIC_SPIKE",
                    detail=f"latest bin z-score {z:.2f} exceeds {policy.spike_zscore}",
                )
            )
    return out
