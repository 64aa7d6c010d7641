"""Iterated hourly prediction and congestion alerting."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import HorizonTooLong, InsufficientHistory
from ..model import BandKind, MetricSeries
from ..timeutil import MS_PER_HOUR, to_iso
from .features import hour_features
from .model import ForecastModel

MAX_HORIZON_HOURS = 24


@dataclass(frozen=True)
class ThresholdPolicy:
    kind: str  # "PERCENTILE" | "ABSOLUTE"
    percentile: float = 80.0
    window_days: int = 7
    absolute_bps: float = 0.0

    @classmethod
    def percentile_policy(cls, p: float = 80.0, window_days: int = 7) -> "ThresholdPolicy":
        return cls(kind="PERCENTILE", percentile=p, window_days=window_days)

    @classmethod
    def absolute(cls, bps: float) -> "ThresholdPolicy":
        return cls(kind="ABSOLUTE", absolute_bps=bps)


@dataclass(frozen=True)
class CongestionAlert:
    ap_id: str
    predicted_for: int
    predicted_bps: float
    threshold_bps: float
    headroom_bps: float  # threshold - predicted; negative when alerting
    model_version: str
    band: Optional[BandKind] = None

    @property
    def alert_id(self) -> str:
        key = f"{self.ap_id}|{self.band.value if self.band else ''}|{self.predicted_for}|{self.model_version}"
        return hashlib.sha256(key.encode()).hexdigest()[:12]

    def to_json(self) -> dict:
        return {
            "alert_id": self.alert_id,
            "ap_id": self.ap_id,
            "band": self.band.value if self.band else None,
            "predicted_for": to_iso(self.predicted_for),
            "predicted_bps": self.predicted_bps,
            "threshold_bps": self.threshold_bps,
            "headroom_bps": self.headroom_bps,
            "model_version": self.model_version,
        }


def predict(
    model: ForecastModel,
    horizon_hours: int,
    series: MetricSeries,
) -> list[tuple[int, float]]:
    """One-step-ahead iterated forecasts for the next `horizon_hours` bins.

    Predicted values substitute for actuals as lag inputs wherever the
    series has no observation; forecasts are floored at zero.
    """
    if horizon_hours < 1:
        raise HorizonTooLong("horizon must be >= 1 hour")
    if horizon_hours > MAX_HORIZON_HOURS:
        raise HorizonTooLong(
            f"horizon {horizon_hours}h exceeds {MAX_HORIZON_HOURS}h (error compounding cap)"
        )
    known = {ts: v for ts, v in series.points}
    if len(known) < 25:
        raise InsufficientHistory(f"{len(known)} hourly points < 25")
    last_ts = max(known)
    beta = np.asarray(model.coefficients)

    out: list[tuple[int, float]] = []
    working = dict(known)
    for k in range(1, horizon_hours + 1):
        ts = last_ts + k * MS_PER_HOUR
        lag_1 = working.get(ts - MS_PER_HOUR)
        lag_24 = working.get(ts - 24 * MS_PER_HOUR)
        if lag_1 is None or lag_24 is None:
            raise InsufficientHistory(f"missing lag for step {k} at {to_iso(ts)}")
        x = np.asarray(hour_features(ts, lag_1, lag_24))
        value = max(0.0, float(x @ beta))
        working[ts] = value
        out.append((ts, value))
    return out


def resolve_threshold(
    policy: ThresholdPolicy, history: Optional[MetricSeries], now: Optional[int] = None
) -> float:
    if policy.kind == "ABSOLUTE":
        return policy.absolute_bps
    if history is None or not history.points:
        raise InsufficientHistory("percentile threshold needs trailing history")
    end = now if now is not None else history.points[-1][0]
    start = end - policy.window_days * 24 * MS_PER_HOUR
    values = [v for ts, v in history.points if start <= ts <= end]
    if not values:
        raise InsufficientHistory("no history inside the percentile window")
    return float(np.percentile(values, policy.percentile))


def detect_congestion(
    forecasts: Sequence[tuple[int, float]],
    threshold_policy: Union[ThresholdPolicy, float],
    *,
    ap_id: str,
    band: Optional[BandKind] = None,
    history: Optional[MetricSeries] = None,
    model_version: str = "",
) -> list[CongestionAlert]:
    """One alert per forecast point strictly above the resolved threshold."""
    if isinstance(threshold_policy, (int, float)):
        threshold = float(threshold_policy)
    else:
        threshold = resolve_threshold(threshold_policy, history)
    alerts = []
    for ts, value in forecasts:
        if value > threshold:
            alerts.append(
                CongestionAlert(
                    ap_id=ap_id,
                    band=band,
                    predicted_for=ts,
                    predicted_bps=value,
                    threshold_bps=threshold,
                    headroom_bps=threshold - value,
                    model_version=model_version,
                )
            )
    return alerts
