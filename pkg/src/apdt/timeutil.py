"""Timestamp helpers.

All timestamps in the system are UTC epoch milliseconds (ints). The wire
format is ISO-8601 UTC with millisecond precision and a trailing ``Z``.
"""

from __future__ import annotations

from datetime import datetime, timezone

MS_PER_HOUR = 3_600_000
MS_PER_DAY = 86_400_000


def now_ms() -> int:
    return int(datetime.now(timezone.utc).timestamp() * 1000)


def to_iso(ts_ms: int) -> str:
    dt = datetime.fromtimestamp(ts_ms / 1000.0, tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{ts_ms % 1000:03d}Z"


def from_iso(text: str) -> int:
    """Parse ISO-8601 UTC (``Z`` or ``+00:00`` suffix) to epoch ms."""
    s = text.strip()
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(round(dt.timestamp() * 1000))


def hour_of_day(ts_ms: int) -> float:
    """Fractional UTC hour in [0, 24)."""
    return (ts_ms % MS_PER_DAY) / MS_PER_HOUR


def hour_bin(ts_ms: int) -> int:
    """Integer UTC hour-of-day of the enclosing hour bin."""
    return int((ts_ms % MS_PER_DAY) // MS_PER_HOUR)


def floor_to_bin(ts_ms: int, bin_seconds: int) -> int:
    step = bin_seconds * 1000
    return (ts_ms // step) * step
