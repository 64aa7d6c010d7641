"""Shared builders for tests: hand-rolled rosters and seeded emulators."""

from __future__ import annotations

import pytest

from apdt.model import (
    AccessPointState,
    BandKind,
    ClientState,
    RadioState,
    TelemetrySample,
)

T0 = 1_740_960_000_000  # 2025-03-03T00:00:00Z

AP1 = "AC:DE:48:00:00:00"
AP2 = "AC:DE:48:00:00:01"
AP3 = "AC:DE:48:00:00:02"


def radio(band=BandKind.GHZ24, channel=1, airtime=0.0, noise=-95.0, clients=0,
          rx=0, tx=0) -> RadioState:
    return RadioState(
        band=band,
        channel=channel,
        airtime_utilization=airtime,
        noise_floor_dbm=noise,
        client_count=clients,
        rx_rate_bps=rx,
        tx_rate_bps=tx,
    )


def ap(ap_id=AP1, name="ap-1", radios=None, last_seen=T0, location="floor2/zone-a"):
    if radios is None:
        radios = (radio(BandKind.GHZ24), radio(BandKind.GHZ5, channel=36, noise=-92.0))
    return AccessPointState(
        ap_id=ap_id, name=name, radios=tuple(radios), location_tag=location, last_seen=last_seen
    )


def client(mac="CA:FE:00:00:00:01", ap_id=AP1, band=BandKind.GHZ24, snr=30.0,
           rate=100_000, since=T0, capable=True) -> ClientState:
    return ClientState(
        client_mac=mac, ap_id=ap_id, band=band, snr_db=snr,
        byte_rate_bps=rate, connected_since=since, capable_5ghz=capable,
    )


def sample_of(aps, clients, taken_at=T0, degraded=frozenset()) -> TelemetrySample:
    return TelemetrySample(
        taken_at=taken_at, aps=tuple(aps), clients=tuple(clients),
        poll_latency_ms=1.0, source="test://", degraded_aps=frozenset(degraded),
    )


def simple_sample(taken_at=T0, n_clients=2, rate=100_000) -> TelemetrySample:
    clients = [
        client(mac=f"CA:FE:00:00:00:{i + 1:02X}", rate=rate)
        for i in range(n_clients)
    ]
    bits = n_clients * rate * 8
    aps = [
        ap(radios=(
            radio(BandKind.GHZ24, clients=n_clients, rx=int(0.6 * bits), tx=int(0.4 * bits)),
            radio(BandKind.GHZ5, channel=36, noise=-92.0),
        ), last_seen=taken_at)
    ]
    return sample_of(aps, clients, taken_at=taken_at)


@pytest.fixture
def seeded_world():
    from apdt.emulator import EmulatedWorld, EmulatorConfig

    return EmulatedWorld(EmulatorConfig(seed=42))


@pytest.fixture
def controller_http():
    """Seeded emulator behind a live HTTP facade; yields (facade, config)."""
    from apdt.emulator import ControllerFacade, EmulatedWorld, EmulatorConfig

    cfg = EmulatorConfig(seed=42)
    facade = ControllerFacade(EmulatedWorld(cfg))
    facade.server.start()
    yield facade, cfg
    facade.server.stop()
