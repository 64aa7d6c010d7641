"""Domain types shared by the twin, emulator, ingester, and simulator.

Instances are immutable values: snapshots handed to callers are safe to
share across threads. Rates are integers (radio rates in bits/s, client
byte rates in bytes/s); airtime is a fraction in [0, 1]; timestamps are
UTC epoch milliseconds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .errors import SchemaViolation
from .timeutil import from_iso, to_iso

MAC_RE = re.compile(r"^([0-9A-F]{2}:){5}[0-9A-F]{2}$")


class BandKind(str, Enum):
    GHZ24 = "GHZ24"
    GHZ5 = "GHZ5"

    def other(self) -> "BandKind":
        return BandKind.GHZ5 if self is BandKind.GHZ24 else BandKind.GHZ24


class Metric(str, Enum):
    BYTE_RATE = "BYTE_RATE"
    CLIENT_COUNT = "CLIENT_COUNT"
    AIRTIME = "AIRTIME"
    LATENCY_MS = "LATENCY_MS"


def normalize_mac(mac: str, what: str = "mac") -> str:
    m = str(mac).upper()
    if not MAC_RE.match(m):
        raise SchemaViolation(f"{what} {mac!r} is not a colon-hex MAC")
    return m


@dataclass(frozen=True)
class RadioState:
    band: BandKind
    channel: int
    airtime_utilization: float
    noise_floor_dbm: float
    client_count: int
    rx_rate_bps: int
    tx_rate_bps: int

    def validate(self, where: str) -> None:
        if not 0.0 <= self.airtime_utilization <= 1.0:
            raise SchemaViolation(f"{where}: airtime_utilization {self.airtime_utilization} outside [0,1]")
        if not self.noise_floor_dbm < 0:
            raise SchemaViolation(f"{where}: noise_floor_dbm must be negative")
        if self.client_count < 0:
            raise SchemaViolation(f"{where}: negative client_count")
        if self.rx_rate_bps < 0 or self.tx_rate_bps < 0:
            raise SchemaViolation(f"{where}: negative radio rate")

    def to_json(self) -> dict:
        return {
            "band": self.band.value,
            "channel": self.channel,
            "airtime_utilization": self.airtime_utilization,
            "noise_floor_dbm": self.noise_floor_dbm,
            "client_count": self.client_count,
            "rx_rate_bps": int(self.rx_rate_bps),
            "tx_rate_bps": int(self.tx_rate_bps),
        }

    @classmethod
    def from_json(cls, d: dict) -> "RadioState":
        return cls(
            band=BandKind(d["band"]),
            channel=int(d["channel"]),
            airtime_utilization=float(d["airtime_utilization"]),
            noise_floor_dbm=float(d["noise_floor_dbm"]),
            client_count=int(d["client_count"]),
            rx_rate_bps=int(d["rx_rate_bps"]),
            tx_rate_bps=int(d["tx_rate_bps"]),
        )


@dataclass(frozen=True)
class AccessPointState:
    ap_id: str
    name: str
    radios: tuple[RadioState, ...]
    location_tag: str
    last_seen: int  # epoch ms

    def radio(self, band: BandKind) -> Optional[RadioState]:
        for r in self.radios:
            if r.band is band:
                return r
        return None

    def validate(self) -> None:
        normalize_mac(self.ap_id, "ap_id")
        if self.ap_id != self.ap_id.upper():
            raise SchemaViolation(f"ap_id {self.ap_id} not uppercased")
        if not 1 <= len(self.radios) <= 2:
            raise SchemaViolation(f"ap {self.ap_id}: radios must have length 1 or 2")
        bands = [r.band for r in self.radios]
        if len(set(bands)) != len(bands):
            raise SchemaViolation(f"ap {self.ap_id}: duplicate radio band")
        for r in self.radios:
            r.validate(f"ap {self.ap_id} radio {r.band.value}")

    def to_json(self) -> dict:
        return {
            "ap_id": self.ap_id,
            "name": self.name,
            "location_tag": self.location_tag,
            "last_seen": to_iso(self.last_seen),
            "radios": [r.to_json() for r in self.radios],
        }

    @classmethod
    def from_json(cls, d: dict) -> "AccessPointState":
        return cls(
            ap_id=str(d["ap_id"]).upper(),
            name=str(d["name"]),
            radios=tuple(RadioState.from_json(r) for r in d["radios"]),
            location_tag=str(d.get("location_tag", "")),
            last_seen=_ts(d["last_seen"]),
        )


@dataclass(frozen=True)
class ClientState:
    client_mac: str
    ap_id: str
    band: BandKind
    snr_db: float
    byte_rate_bps: int  # bytes/s
    connected_since: int  # epoch ms
    capable_5ghz: bool

    def validate(self) -> None:
        normalize_mac(self.client_mac, "client_mac")
        normalize_mac(self.ap_id, "ap_id")
        if self.snr_db < 0:
            raise SchemaViolation(f"client {self.client_mac}: negative snr_db")
        if self.byte_rate_bps < 0:
            raise SchemaViolation(f"client {self.client_mac}: negative byte_rate_bps")
        if self.band is BandKind.GHZ5 and not self.capable_5ghz:
            raise SchemaViolation(f"client {self.client_mac}: on GHZ5 but not capable_5ghz")

    def to_json(self) -> dict:
        return {
            "client_mac": self.client_mac,
            "ap_id": self.ap_id,
            "band": self.band.value,
            "snr_db": self.snr_db,
            "byte_rate_bps": int(self.byte_rate_bps),
            "connected_since": to_iso(self.connected_since),
            "capable_5ghz": self.capable_5ghz,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ClientState":
        return cls(
            client_mac=str(d["client_mac"]).upper(),
            ap_id=str(d["ap_id"]).upper(),
            band=BandKind(d["band"]),
            snr_db=float(d["snr_db"]),
            byte_rate_bps=int(d["byte_rate_bps"]),
            connected_since=_ts(d["connected_since"]),
            capable_5ghz=bool(d["capable_5ghz"]),
        )


@dataclass(frozen=True)
class TelemetrySample:
    """One poll cycle's parsed controller readings (a snapshot candidate)."""

    taken_at: int
    aps: tuple[AccessPointState, ...]
    clients: tuple[ClientState, ...]
    poll_latency_ms: float = 0.0
    source: str = ""
    degraded_aps: frozenset[str] = field(default_factory=frozenset)

    def validate(self) -> None:
        validate_roster(self.aps, self.clients, degraded_aps=self.degraded_aps)

    def to_log_json(self) -> dict:
        return {
            "taken_at": to_iso(self.taken_at),
            "aps": [a.to_json() for a in self.aps],
            "clients": [c.to_json() for c in self.clients],
        }

    @classmethod
    def from_log_json(cls, d: dict) -> "TelemetrySample":
        return cls(
            taken_at=_ts(d["taken_at"]),
            aps=tuple(AccessPointState.from_json(a) for a in d["aps"]),
            clients=tuple(ClientState.from_json(c) for c in d["clients"]),
        )


@dataclass(frozen=True)
class TwinSnapshot:
    version: int
    taken_at: int
    aps: tuple[AccessPointState, ...]
    clients: tuple[ClientState, ...]

    def ap(self, ap_id: str) -> Optional[AccessPointState]:
        for a in self.aps:
            if a.ap_id == ap_id:
                return a
        return None

    def clients_on(self, ap_id: str, band: Optional[BandKind] = None) -> list[ClientState]:
        return [
            c for c in self.clients
            if c.ap_id == ap_id and (band is None or c.band is band)
        ]

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "taken_at": to_iso(self.taken_at),
            "aps": [a.to_json() for a in self.aps],
            "clients": [c.to_json() for c in self.clients],
        }


@dataclass(frozen=True)
class MetricSeries:
    ap_id: str
    metric: Metric
    points: tuple[tuple[int, float], ...]  # (epoch ms aligned to bin, value)
    bin_seconds: int
    band: Optional[BandKind] = None
    counts: tuple[int, ...] = ()  # samples behind each point (bin population)

    def values(self) -> list[float]:
        return [v for _, v in self.points]

    def timestamps(self) -> list[int]:
        return [t for t, _ in self.points]

    def to_json(self) -> dict:
        return {
            "ap_id": self.ap_id,
            "band": self.band.value if self.band else None,
            "metric": self.metric.value,
            "bin_seconds": self.bin_seconds,
            "points": [[to_iso(t), v] for t, v in self.points],
        }


@dataclass(frozen=True)
class Anomaly:
    ap_id: str
    metric: Optional[Metric]
    detected_at: int
    kind: str  # STALE_AP | METRIC_SPIKE | METRIC_FLATLINE
    detail: str

    def to_json(self) -> dict:
        return {
            "ap_id": self.ap_id,
            "metric": self.metric.value if self.metric else None,
            "detected_at": to_iso(self.detected_at),
            "kind": self.kind,
            "detail": self.detail,
        }


def validate_roster(
    aps: Sequence[AccessPointState],
    clients: Sequence[ClientState],
    degraded_aps: frozenset[str] = frozenset(),
) -> None:
    """Check the full set of snapshot invariants, raising SchemaViolation.

    Per-radio client_count consistency is skipped for degraded APs (their
    client lists were dropped by a partial poll but radio aggregates kept).
    """
    seen_aps: set[str] = set()
    for ap in aps:
        ap.validate()
        if ap.ap_id in seen_aps:
            raise SchemaViolation(f"duplicate ap_id {ap.ap_id}")
        seen_aps.add(ap.ap_id)

    seen_macs: set[str] = set()
    assoc: dict[tuple[str, BandKind], int] = {}
    for c in clients:
        c.validate()
        if c.client_mac in seen_macs:
            raise SchemaViolation(f"client {c.client_mac} appears more than once")
        seen_macs.add(c.client_mac)
        if c.ap_id not in seen_aps:
            raise SchemaViolation(f"client {c.client_mac} references unknown ap_id {c.ap_id}")
        assoc[(c.ap_id, c.band)] = assoc.get((c.ap_id, c.band), 0) + 1

    for ap in aps:
        if ap.ap_id in degraded_aps:
            continue
        for r in ap.radios:
            n = assoc.get((ap.ap_id, r.band), 0)
            if n != r.client_count:
                raise SchemaViolation(
                    f"ap {ap.ap_id} {r.band.value}: client_count {r.client_count} "
                    f"!= {n} associated clients"
                )
        for band in (BandKind.GHZ24, BandKind.GHZ5):
            if assoc.get((ap.ap_id, band), 0) > 0 and ap.radio(band) is None:
                raise SchemaViolation(f"clients on ap {ap.ap_id} band {band.value} with no such radio")


def _ts(value) -> int:
    """Accept either epoch ms int or ISO-8601 string."""
    if isinstance(value, (int, float)):
        return int(value)
    return from_iso(str(value))
