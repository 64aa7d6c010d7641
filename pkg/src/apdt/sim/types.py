"""Scenario, engine parameter, and report types for the what-if simulator."""

from __future__ import annotations

import io
import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

from ..errors import SchemaViolation
from ..model import AccessPointState, BandKind, ClientState, TwinSnapshot


class EngineKind(str, Enum):
    ANALYTIC = "ANALYTIC"
    EVENT = "EVENT"


class ArrivalProcess(str, Enum):
    DETERMINISTIC = "DETERMINISTIC"
    POISSON = "POISSON"


class SizeProcess(str, Enum):
    FIXED = "FIXED"
    EXPONENTIAL = "EXPONENTIAL"


@dataclass(frozen=True)
class LatencyModelParams:
    """Analytic latency: floor + per-client cost + contention penalty."""

    beta0_ms: float = 0.4
    beta1_ms_per_client: float = 0.5
    beta2_ms_airtime: float = 20.0

    def validate(self) -> None:
        if min(self.beta0_ms, self.beta1_ms_per_client, self.beta2_ms_airtime) < 0:
            raise SchemaViolation("latency model coefficients must be >= 0")


@dataclass(frozen=True)
class EngineParams:
    packet_mean_bytes: float = 1250.0
    overhead_ms: float = 0.05
    phy_bps_ghz24: float = 100e6
    phy_bps_ghz5: float = 400e6
    arrival_process: ArrivalProcess = ArrivalProcess.POISSON
    size_process: SizeProcess = SizeProcess.FIXED
    warmup_seconds: float = 1.0

    def phy_bps(self, band: BandKind) -> float:
        return self.phy_bps_ghz24 if band is BandKind.GHZ24 else self.phy_bps_ghz5


@dataclass(frozen=True)
class Override:
    kind: str  # add_clients | remove_clients | steer | set_airtime | set_channel
    ap: str
    band: Optional[BandKind] = None
    n: int = 0
    byte_rate_bps: int = 0
    from_band: Optional[BandKind] = None
    to_band: Optional[BandKind] = None
    value: float = 0.0
    channel: int = 0

    def to_json(self) -> dict:
        d = {"kind": self.kind, "ap": self.ap}
        if self.kind == "add_clients":
            d.update(band=self.band.value, n=self.n, byte_rate_bps=self.byte_rate_bps)
        elif self.kind == "remove_clients":
            d.update(n=self.n)
        elif self.kind == "steer":
            d.update(n=self.n, from_band=self.from_band.value, to_band=self.to_band.value)
        elif self.kind == "set_airtime":
            d.update(band=self.band.value, value=self.value)
        elif self.kind == "set_channel":
            d.update(band=self.band.value, channel=self.channel)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Override":
        kind = d.get("kind")
        if kind == "add_clients":
            return cls(kind=kind, ap=d["ap"], band=BandKind(d["band"]), n=int(d["n"]),
                       byte_rate_bps=int(d["byte_rate_bps"]))
        if kind == "remove_clients":
            return cls(kind=kind, ap=d["ap"], n=int(d["n"]))
        if kind == "steer":
            return cls(kind=kind, ap=d["ap"], n=int(d["n"]),
                       from_band=BandKind(d["from_band"]), to_band=BandKind(d["to_band"]))
        if kind == "set_airtime":
            return cls(kind=kind, ap=d["ap"], band=BandKind(d["band"]), value=float(d["value"]))
        if kind == "set_channel":
            return cls(kind=kind, ap=d["ap"], band=BandKind(d["band"]), channel=int(d["channel"]))
        raise SchemaViolation(f"unknown override kind {kind!r}")


def steer_override(ap: str, n: int, from_band: BandKind, to_band: BandKind) -> Override:
    return Override(kind="steer", ap=ap, n=n, from_band=from_band, to_band=to_band)


def add_clients_override(ap: str, band: BandKind, n: int, byte_rate_bps: int) -> Override:
    return Override(kind="add_clients", ap=ap, band=band, n=n, byte_rate_bps=byte_rate_bps)


def remove_clients_override(ap: str, n: int) -> Override:
    return Override(kind="remove_clients", ap=ap, n=n)


def set_airtime_override(ap: str, band: BandKind, value: float) -> Override:
    return Override(kind="set_airtime", ap=ap, band=band, value=value)


@dataclass(frozen=True)
class MediumSpec:
    """Materialized per-(AP, band) simulation input."""

    ap_id: str
    band: BandKind
    airtime_external: float
    channel: int
    client_rates_bps: tuple[int, ...]  # bytes/s per client

    @property
    def n_clients(self) -> int:
        return len(self.client_rates_bps)


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    base_aps: tuple[AccessPointState, ...]
    base_clients: tuple[ClientState, ...]
    overrides: tuple[Override, ...]
    media: tuple[MediumSpec, ...]  # materialized roster; derived, not serialized
    duration_seconds: int = 60
    report_interval_seconds: int = 10
    engine: EngineKind = EngineKind.ANALYTIC
    seed: int = 0
    engine_params: EngineParams = field(default_factory=EngineParams)
    latency_params: LatencyModelParams = field(default_factory=LatencyModelParams)

    def validate(self) -> None:
        if self.duration_seconds <= 0 or self.report_interval_seconds <= 0:
            raise SchemaViolation("duration and report interval must be positive")
        if self.duration_seconds % self.report_interval_seconds != 0:
            raise SchemaViolation("duration must be divisible by report interval")
        self.latency_params.validate()
        for m in self.media:
            if not 0.0 <= m.airtime_external <= 0.95:
                raise SchemaViolation(
                    f"{m.ap_id}/{m.band.value}: airtime_external {m.airtime_external} outside [0, 0.95]"
                )

    def to_json(self) -> dict:
        d = {
            "scenario_id": self.scenario_id,
            "base": {
                "aps": [a.to_json() for a in self.base_aps],
                "clients": [c.to_json() for c in self.base_clients],
            },
            "overrides": [o.to_json() for o in self.overrides],
            "duration_seconds": self.duration_seconds,
            "report_interval_seconds": self.report_interval_seconds,
            "engine": self.engine.value,
            "seed": self.seed,
        }
        if self.engine_params != EngineParams():
            ep = self.engine_params
            d["engine_params"] = {
                "packet_mean_bytes": ep.packet_mean_bytes,
                "overhead_ms": ep.overhead_ms,
                "phy_bps_ghz24": ep.phy_bps_ghz24,
                "phy_bps_ghz5": ep.phy_bps_ghz5,
                "arrival_process": ep.arrival_process.value,
                "size_process": ep.size_process.value,
                "warmup_seconds": ep.warmup_seconds,
            }
        if self.latency_params != LatencyModelParams():
            lp = self.latency_params
            d["latency_params"] = {
                "beta0_ms": lp.beta0_ms,
                "beta1_ms_per_client": lp.beta1_ms_per_client,
                "beta2_ms_airtime": lp.beta2_ms_airtime,
            }
        return d


@dataclass(frozen=True)
class IntervalStats:
    t_seconds: int
    mean_latency_ms: Optional[float]
    p95_latency_ms: Optional[float]
    offered_bps: float  # bits/s
    served_bps: float
    packets_in: int
    packets_served: int
    mean_queue_len: float

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MediumReport:
    ap_id: str
    band: BandKind
    per_interval: tuple[IntervalStats, ...]
    packets_in_total: int
    packets_served_total: int
    final_queue: int

    def to_json(self) -> dict:
        return {
            "ap_id": self.ap_id,
            "band": self.band.value,
            "per_interval": [s.to_json() for s in self.per_interval],
            "packets_in_total": self.packets_in_total,
            "packets_served_total": self.packets_served_total,
            "final_queue": self.final_queue,
        }


@dataclass(frozen=True)
class SimulationReport:
    scenario_id: str
    engine: EngineKind
    seed: int
    per_interval: tuple[IntervalStats, ...]
    per_ap_band: tuple[MediumReport, ...]
    unstable: bool = False

    def mean_latencies(self) -> list[float]:
        return [s.mean_latency_ms for s in self.per_interval]

    def interval_times(self) -> list[int]:
        return [s.t_seconds for s in self.per_interval]

    def medium(self, ap_id: str, band: BandKind) -> Optional[MediumReport]:
        for m in self.per_ap_band:
            if m.ap_id == ap_id and m.band is band:
                return m
        return None

    def to_json(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "engine": self.engine.value,
            "seed": self.seed,
            "unstable": self.unstable,
            "per_interval": [s.to_json() for s in self.per_interval],
            "per_ap_band": [m.to_json() for m in self.per_ap_band],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t_seconds,mean_latency_ms,p95_latency_ms,offered_bps,served_bps\n")
        for s in self.per_interval:
            mean = "" if s.mean_latency_ms is None else repr(s.mean_latency_ms)
            p95 = "" if s.p95_latency_ms is None else repr(s.p95_latency_ms)
            buf.write(f"{s.t_seconds},{mean},{p95},{s.offered_bps!r},{s.served_bps!r}\n")
        return buf.getvalue()

    @classmethod
    def from_json(cls, d: dict) -> "SimulationReport":
        def interval(s: dict) -> IntervalStats:
            return IntervalStats(
                t_seconds=int(s["t_seconds"]),
                mean_latency_ms=s["mean_latency_ms"],
                p95_latency_ms=s["p95_latency_ms"],
                offered_bps=float(s["offered_bps"]),
                served_bps=float(s["served_bps"]),
                packets_in=int(s["packets_in"]),
                packets_served=int(s["packets_served"]),
                mean_queue_len=float(s["mean_queue_len"]),
            )

        return cls(
            scenario_id=str(d["scenario_id"]),
            engine=EngineKind(d["engine"]),
            seed=int(d["seed"]),
            unstable=bool(d.get("unstable", False)),
            per_interval=tuple(interval(s) for s in d["per_interval"]),
            per_ap_band=tuple(
                MediumReport(
                    ap_id=m["ap_id"],
                    band=BandKind(m["band"]),
                    per_interval=tuple(interval(s) for s in m["per_interval"]),
                    packets_in_total=int(m["packets_in_total"]),
                    packets_served_total=int(m["packets_served_total"]),
                    final_queue=int(m["final_queue"]),
                )
                for m in d["per_ap_band"]
            ),
        )


@dataclass(frozen=True)
class FidelityReport:
    pairs: tuple[tuple[int, float, float], ...]  # (t, simulated_ms, real_ms)
    mae_ms: float
    per_point_fidelity: tuple[float, ...]
    mean_fidelity: float
    max_fidelity: float

    def to_json(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "mae_ms": self.mae_ms,
            "per_point_fidelity": list(self.per_point_fidelity),
            "mean_fidelity": self.mean_fidelity,
            "max_fidelity": self.max_fidelity,
        }


def roster_from_snapshot(snapshot: TwinSnapshot) -> tuple[list[AccessPointState], list[ClientState]]:
    return list(snapshot.aps), list(snapshot.clients)
