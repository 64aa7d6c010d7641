"""Scenario construction: live snapshot (or inline roster) plus what-if edits.

Overrides are applied in list order against a working roster; the first
infeasible one aborts the build with its index. The result is a fully
materialized, deterministic set of per-(AP, band) media.
"""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence, Union

from ..errors import OverrideConflict, SchemaViolation, UnknownAp
from ..model import AccessPointState, BandKind, ClientState, TwinSnapshot, validate_roster
from .types import (
    ArrivalProcess,
    EngineKind,
    EngineParams,
    LatencyModelParams,
    MediumSpec,
    Override,
    Scenario,
    SizeProcess,
)

DEFAULT_SYNTH_RATE = 100_000  # bytes/s for synthesized clients


class _WorkingRoster:
    def __init__(self, aps: Sequence[AccessPointState], clients: Sequence[ClientState]):
        self.aps = {a.ap_id: a for a in aps}
        self.clients: list[ClientState] = list(clients)
        self.airtime: dict[tuple[str, BandKind], float] = {}
        self.channel: dict[tuple[str, BandKind], int] = {}
        for a in aps:
            for r in a.radios:
                self.airtime[(a.ap_id, r.band)] = r.airtime_utilization
                self.channel[(a.ap_id, r.band)] = r.channel
        self._synth_counter = 0

    def require_radio(self, ap_id: str, band: BandKind, idx: int) -> None:
        ap = self.aps.get(ap_id)
        if ap is None:
            raise OverrideConflict(idx, f"unknown ap {ap_id}")
        if ap.radio(band) is None:
            raise OverrideConflict(idx, f"ap {ap_id} has no {band.value} radio")

    def on(self, ap_id: str, band: Optional[BandKind] = None) -> list[ClientState]:
        return [
            c for c in self.clients
            if c.ap_id == ap_id and (band is None or c.band is band)
        ]

    def synth_mac(self) -> str:
        # Locally administered OUI 02:DT so synthetic clients never collide
        # with emulator-assigned addresses.
        self._synth_counter += 1
        n = self._synth_counter
        return f"02:DT:00:{(n >> 16) & 0xFF:02X}:{(n >> 8) & 0xFF:02X}:{n & 0xFF:02X}"


def _by_demand(clients: Iterable[ClientState]) -> list[ClientState]:
    return sorted(clients, key=lambda c: (-c.byte_rate_bps, c.client_mac))


def apply_overrides(roster: _WorkingRoster, overrides: Sequence[Override]) -> None:
    for idx, ov in enumerate(overrides):
        if ov.kind == "add_clients":
            roster.require_radio(ov.ap, ov.band, idx)
            if ov.n < 0 or ov.byte_rate_bps < 0:
                raise OverrideConflict(idx, "negative count or rate")
            anchor = roster.aps[ov.ap]
            for _ in range(ov.n):
                roster.clients.append(
                    ClientState(
                        client_mac=roster.synth_mac(),
                        ap_id=ov.ap,
                        band=ov.band,
                        snr_db=30.0,
                        byte_rate_bps=ov.byte_rate_bps,
                        connected_since=anchor.last_seen,
                        capable_5ghz=True,
                    )
                )
        elif ov.kind == "remove_clients":
            if ov.ap not in roster.aps:
                raise OverrideConflict(idx, f"unknown ap {ov.ap}")
            present = _by_demand(roster.on(ov.ap))
            if ov.n > len(present):
                raise OverrideConflict(
                    idx, f"remove {ov.n} clients but only {len(present)} on {ov.ap}"
                )
            doomed = {c.client_mac for c in present[: ov.n]}
            roster.clients = [c for c in roster.clients if c.client_mac not in doomed]
        elif ov.kind == "steer":
            roster.require_radio(ov.ap, ov.from_band, idx)
            roster.require_radio(ov.ap, ov.to_band, idx)
            candidates = roster.on(ov.ap, ov.from_band)
            if ov.to_band is BandKind.GHZ5:
                candidates = [c for c in candidates if c.capable_5ghz]
            candidates = _by_demand(candidates)
            if ov.n > len(candidates):
                raise OverrideConflict(
                    idx,
                    f"steer {ov.n} clients {ov.from_band.value}->{ov.to_band.value} on {ov.ap} "
                    f"but only {len(candidates)} eligible",
                )
            chosen = {c.client_mac for c in candidates[: ov.n]}
            roster.clients = [
                c if c.client_mac not in chosen else
                ClientState(
                    client_mac=c.client_mac,
                    ap_id=c.ap_id,
                    band=ov.to_band,
                    snr_db=c.snr_db,
                    byte_rate_bps=c.byte_rate_bps,
                    connected_since=c.connected_since,
                    capable_5ghz=c.capable_5ghz,
                )
                for c in roster.clients
            ]
        elif ov.kind == "set_airtime":
            roster.require_radio(ov.ap, ov.band, idx)
            if not 0.0 <= ov.value <= 0.95:
                raise OverrideConflict(idx, f"airtime {ov.value} outside [0, 0.95]")
            roster.airtime[(ov.ap, ov.band)] = ov.value
        elif ov.kind == "set_channel":
            roster.require_radio(ov.ap, ov.band, idx)
            roster.channel[(ov.ap, ov.band)] = ov.channel
        else:
            raise OverrideConflict(idx, f"unknown override kind {ov.kind!r}")


def build_scenario(
    base: Union[TwinSnapshot, tuple[Sequence[AccessPointState], Sequence[ClientState]]],
    overrides: Sequence[Override] = (),
    *,
    scenario_id: str = "scenario",
    duration_seconds: int = 60,
    report_interval_seconds: int = 10,
    engine: EngineKind = EngineKind.ANALYTIC,
    seed: int = 0,
    engine_params: EngineParams = EngineParams(),
    latency_params: LatencyModelParams = LatencyModelParams(),
) -> Scenario:
    if isinstance(base, TwinSnapshot):
        aps, clients = list(base.aps), list(base.clients)
    else:
        aps, clients = list(base[0]), list(base[1])
    if not aps:
        raise UnknownAp("scenario base has no APs")

    roster = _WorkingRoster(aps, clients)
    apply_overrides(roster, overrides)

    media = []
    for ap in aps:
        for r in ap.radios:
            on_medium = roster.on(ap.ap_id, r.band)
            media.append(
                MediumSpec(
                    ap_id=ap.ap_id,
                    band=r.band,
                    airtime_external=roster.airtime[(ap.ap_id, r.band)],
                    channel=roster.channel[(ap.ap_id, r.band)],
                    client_rates_bps=tuple(
                        c.byte_rate_bps for c in sorted(on_medium, key=lambda c: c.client_mac)
                    ),
                )
            )

    scenario = Scenario(
        scenario_id=scenario_id,
        base_aps=tuple(aps),
        base_clients=tuple(clients),
        overrides=tuple(overrides),
        media=tuple(media),
        duration_seconds=duration_seconds,
        report_interval_seconds=report_interval_seconds,
        engine=engine,
        seed=seed,
        engine_params=engine_params,
        latency_params=latency_params,
    )
    scenario.validate()
    return scenario


def scenario_from_json(d: dict) -> Scenario:
    """Parse the scenario file schema and materialize it."""
    base = d.get("base") or {}
    aps = [AccessPointState.from_json(a) for a in base.get("aps", [])]
    clients = [ClientState.from_json(c) for c in base.get("clients", [])]
    validate_roster(aps, clients)
    overrides = [Override.from_json(o) for o in d.get("overrides", [])]

    ep = d.get("engine_params") or {}
    engine_params = EngineParams(
        packet_mean_bytes=float(ep.get("packet_mean_bytes", 1250.0)),
        overhead_ms=float(ep.get("overhead_ms", 0.05)),
        phy_bps_ghz24=float(ep.get("phy_bps_ghz24", 100e6)),
        phy_bps_ghz5=float(ep.get("phy_bps_ghz5", 400e6)),
        arrival_process=ArrivalProcess(ep.get("arrival_process", "POISSON")),
        size_process=SizeProcess(ep.get("size_process", "FIXED")),
        warmup_seconds=float(ep.get("warmup_seconds", 1.0)),
    )
    lp = d.get("latency_params") or {}
    latency_params = LatencyModelParams(
        beta0_ms=float(lp.get("beta0_ms", 0.4)),
        beta1_ms_per_client=float(lp.get("beta1_ms_per_client", 0.5)),
        beta2_ms_airtime=float(lp.get("beta2_ms_airtime", 20.0)),
    )
    return build_scenario(
        (aps, clients),
        overrides,
        scenario_id=str(d.get("scenario_id", "scenario")),
        duration_seconds=int(d.get("duration_seconds", 60)),
        report_interval_seconds=int(d.get("report_interval_seconds", 10)),
        engine=EngineKind(d.get("engine", "ANALYTIC")),
        seed=int(d.get("seed", 0)),
        engine_params=engine_params,
        latency_params=latency_params,
    )


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaViolation(f"scenario file {path}: {e}") from e
    return scenario_from_json(d)
