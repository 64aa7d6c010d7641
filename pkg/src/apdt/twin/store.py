"""Authoritative time-synchronized twin state: snapshots plus metric series.

Single-writer, multi-reader: `apply_sample` is the only mutating entry
point and is serialized by a lock; readers get immutable snapshot values.
Native series bins are 10 s wide; each bin keeps (sum, count) so coarser
re-binning can weight by population exactly.
"""

from __future__ import annotations

import bisect
import threading
from collections import deque
from dataclasses import dataclass
from typing import Optional

from ..errors import NotFound, OutOfOrderSample, SchemaViolation, UnknownAp, UnsupportedBin
from ..model import (
    AccessPointState,
    BandKind,
    Metric,
    MetricSeries,
    TelemetrySample,
    TwinSnapshot,
)
from ..timeutil import floor_to_bin

NATIVE_BIN_SECONDS = 10
RETENTION_SECONDS = 14 * 86400  # paper-period ring; older data lives in the log
DEFAULT_SNAPSHOT_RING = 17280  # last 48 h of full snapshots at 10 s cadence


@dataclass
class _Bins:
    """One metric series as parallel arrays of (bin start ms, sum, count)."""

    ts: list  # type: list[int]
    sums: list  # type: list[float]
    counts: list  # type: list[int]

    @classmethod
    def empty(cls) -> "_Bins":
        return cls([], [], [])

    def add(self, ts_ms: int, value: float) -> None:
        if self.ts and ts_ms == self.ts[-1]:
            self.sums[-1] += value
            self.counts[-1] += 1
        elif self.ts and ts_ms < self.ts[-1]:
            raise OutOfOrderSample(f"bin {ts_ms} behind series tail {self.ts[-1]}")
        else:
            self.ts.append(ts_ms)
            self.sums.append(value)
            self.counts.append(1)

    def trim_before(self, cutoff_ms: int) -> None:
        i = bisect.bisect_left(self.ts, cutoff_ms)
        if i:
            del self.ts[:i]
            del self.sums[:i]
            del self.counts[:i]


SeriesKey = tuple[str, Optional[BandKind], Metric]


class TwinStore:
    def __init__(
        self,
        log_writer=None,
        retention_seconds: int = RETENTION_SECONDS,
        snapshot_ring: int = DEFAULT_SNAPSHOT_RING,
    ):
        self._lock = threading.RLock()
        self._log_writer = log_writer
        self._retention_ms = retention_seconds * 1000
        self._snapshots: deque[TwinSnapshot] = deque(maxlen=snapshot_ring)
        self._snap_index: deque[int] = deque(maxlen=snapshot_ring)  # taken_at per snapshot
        self._version = 0
        self._series: dict[SeriesKey, _Bins] = {}
        self.counters = {"samples_applied": 0, "samples_rejected": 0}

    # -- write path -------------------------------------------------------

    def apply_sample(self, sample: TelemetrySample) -> int:
        """Validate, durably log, and publish one sample. Returns new version."""
        with self._lock:
            try:
                sample.validate()
                if self._snapshots and sample.taken_at < self._snapshots[-1].taken_at:
                    raise OutOfOrderSample(
                        f"sample at {sample.taken_at} older than head {self._snapshots[-1].taken_at}"
                    )
            except (SchemaViolation, OutOfOrderSample):
                self.counters["samples_rejected"] += 1
                raise

            if self._log_writer is not None:
                self._log_writer.append(sample)

            self._version += 1
            snap = TwinSnapshot(
                version=self._version,
                taken_at=sample.taken_at,
                aps=sample.aps,
                clients=sample.clients,
            )
            self._extend_series(sample)
            self._snapshots.append(snap)
            self._snap_index.append(snap.taken_at)
            self._trim(sample.taken_at)
            self.counters["samples_applied"] += 1
            return self._version

    def _extend_series(self, sample: TelemetrySample) -> None:
        bin_ts = floor_to_bin(sample.taken_at, NATIVE_BIN_SECONDS)
        for ap in sample.aps:
            agg_bytes = 0.0
            agg_clients = 0
            agg_airtime = 0.0
            for r in ap.radios:
                byte_rate = (r.rx_rate_bps + r.tx_rate_bps) / 8.0
                self._bins(ap.ap_id, r.band, Metric.BYTE_RATE).add(bin_ts, byte_rate)
                self._bins(ap.ap_id, r.band, Metric.CLIENT_COUNT).add(bin_ts, float(r.client_count))
                self._bins(ap.ap_id, r.band, Metric.AIRTIME).add(bin_ts, r.airtime_utilization)
                agg_bytes += byte_rate
                agg_clients += r.client_count
                agg_airtime += r.airtime_utilization
            self._bins(ap.ap_id, None, Metric.BYTE_RATE).add(bin_ts, agg_bytes)
            self._bins(ap.ap_id, None, Metric.CLIENT_COUNT).add(bin_ts, float(agg_clients))
            self._bins(ap.ap_id, None, Metric.AIRTIME).add(bin_ts, agg_airtime / len(ap.radios))

    def _bins(self, ap_id: str, band: Optional[BandKind], metric: Metric) -> _Bins:
        key = (ap_id, band, metric)
        b = self._series.get(key)
        if b is None:
            b = _Bins.empty()
            self._series[key] = b
        return b

    def _trim(self, now_ms: int) -> None:
        cutoff = now_ms - self._retention_ms
        if cutoff <= 0:
            return
        for b in self._series.values():
            b.trim_before(cutoff)

    # -- read path --------------------------------------------------------

    def get_snapshot(self, at: Optional[int] = None) -> TwinSnapshot:
        with self._lock:
            if not self._snapshots:
                raise NotFound("store is empty")
            if at is None:
                return self._snapshots[-1]
            idx = bisect.bisect_right(self._snap_index, at) - 1
            if idx < 0:
                raise NotFound(f"no snapshot at or before {at}")
            return self._snapshots[idx]

    @property
    def version(self) -> int:
        with self._lock:
            return self._version

    def known_aps(self) -> list[AccessPointState]:
        with self._lock:
            if not self._snapshots:
                return []
            return list(self._snapshots[-1].aps)

    def query_series(
        self,
        ap_id: str,
        metric: Metric,
        window: tuple[int, int],
        bin_seconds: int = NATIVE_BIN_SECONDS,
        band: Optional[BandKind] = None,
    ) -> MetricSeries:
        """Re-bin native points by arithmetic mean; empty bins are omitted."""
        t0, t1 = window
        if not t0 < t1:
            raise UnsupportedBin(f"window [{t0}, {t1}) is empty")
        if bin_seconds <= 0:
            raise UnsupportedBin("bin_seconds must be positive")
        if bin_seconds % NATIVE_BIN_SECONDS != 0 and NATIVE_BIN_SECONDS % bin_seconds != 0:
            raise UnsupportedBin(
                f"bin {bin_seconds}s is neither a multiple nor divisor of the native "
                f"{NATIVE_BIN_SECONDS}s bin"
            )
        with self._lock:
            if not any(a.ap_id == ap_id for a in self.known_aps()) and (
                (ap_id, band, metric) not in self._series
            ):
                raise UnknownAp(ap_id)
            src = self._series.get((ap_id, band, metric))
            ts = list(src.ts) if src else []
            sums = list(src.sums) if src else []
            counts = list(src.counts) if src else []

        lo = bisect.bisect_left(ts, t0)
        hi = bisect.bisect_left(ts, t1)
        out_ts: list[int] = []
        out_sum: list[float] = []
        out_n: list[int] = []
        step = bin_seconds * 1000
        for i in range(lo, hi):
            t = (ts[i] // step) * step
            if out_ts and t == out_ts[-1]:
                out_sum[-1] += sums[i]
                out_n[-1] += counts[i]
            else:
                out_ts.append(t)
                out_sum.append(sums[i])
                out_n.append(counts[i])
        points = tuple((t, s / n) for t, s, n in zip(out_ts, out_sum, out_n))
        return MetricSeries(
            ap_id=ap_id,
            band=band,
            metric=metric,
            points=points,
            bin_seconds=bin_seconds,
            counts=tuple(out_n),
        )

    def series_keys(self) -> list[SeriesKey]:
        with self._lock:
            return list(self._series.keys())

    def iter_samples(self) -> list[TwinSnapshot]:
        """Retained snapshots, oldest first (the replayable window)."""
        with self._lock:
            return list(self._snapshots)
