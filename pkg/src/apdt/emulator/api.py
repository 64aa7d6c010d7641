"""Controller-shaped HTTP facade over the emulated world.

Serves the same API family the production controller exposes: AP and
per-AP client listings plus client actuation commands. Airtime is
reported in percent (the ingester converts to a fraction), radio rates
in bits/s, client byte rates in bytes/s.
"""

from __future__ import annotations

import threading
import time
import uuid
from typing import Optional

from ..errors import SchemaViolation, UnknownAp
from ..httpkit import JsonHttpServer, Request
from ..model import AccessPointState, BandKind, ClientState
from ..timeutil import to_iso
from .world import ActuationCommand, EmulatedWorld


def ap_payload(aps: list[AccessPointState]) -> list[dict]:
    out = []
    for a in aps:
        out.append(
            {
                "ap_id": a.ap_id,
                "name": a.name,
                "location_tag": a.location_tag,
                "last_seen": to_iso(a.last_seen),
                "radios": [
                    {
                        "band": r.band.value,
                        "channel": r.channel,
                        "airtime": r.airtime_utilization * 100.0,  # percent on the wire
                        "noise_floor_dbm": r.noise_floor_dbm,
                        "client_count": r.client_count,
                        "rx_rate_bps": r.rx_rate_bps,
                        "tx_rate_bps": r.tx_rate_bps,
                    }
                    for r in a.radios
                ],
            }
        )
    return out


def client_payload(clients: list[ClientState]) -> list[dict]:
    return [
        {
            "client_mac": c.client_mac,
            "band": c.band.value,
            "snr_db": c.snr_db,
            "byte_rate_bps": c.byte_rate_bps,
            "connected_since": to_iso(c.connected_since),
            "capable_5ghz": c.capable_5ghz,
        }
        for c in clients
    ]


class ControllerFacade:
    """Publishes an immutable per-step view of the world and serves it."""

    def __init__(self, world: EmulatedWorld, host: str = "127.0.0.1", port: int = 0,
                 auth_token: Optional[str] = None):
        self.world = world
        self._lock = threading.Lock()
        token = auth_token if auth_token is not None else world.config.auth_token
        self.server = JsonHttpServer(host, port, auth_token=token)
        self._view_aps: list[AccessPointState] = []
        self._view_clients: list[ClientState] = []
        self.publish()

        s = self.server
        s.route("GET", "/controller/v1/aps", self._get_aps)
        s.route("GET", "/controller/v1/aps/{ap_id}/clients", self._get_clients)
        s.route("POST", "/controller/v1/clients/{mac}/disassociate", self._post_disassociate)
        s.route("POST", "/controller/v1/clients/{mac}/steer", self._post_steer)
        s.route("POST", "/controller/v1/clients/{mac}/move", self._post_move)

    # The stepper calls this after each step; handlers read the published copy.
    def publish(self) -> None:
        with self._lock:
            self._view_aps = self.world.ap_states()
            self._view_clients = self.world.client_states()

    def step_and_publish(self, dt_seconds: Optional[float] = None) -> None:
        self.world.step(dt_seconds)
        self.publish()

    @property
    def base_url(self) -> str:
        return self.server.base_url

    # -- handlers ----------------------------------------------------------

    def _get_aps(self, req: Request):
        with self._lock:
            return ap_payload(self._view_aps)

    def _get_clients(self, req: Request):
        ap_id = req.params["ap_id"].upper()
        with self._lock:
            if not any(a.ap_id == ap_id for a in self._view_aps):
                raise UnknownAp(ap_id)
            return client_payload([c for c in self._view_clients if c.ap_id == ap_id])

    def _command(self, req: Request, kind: str) -> dict:
        body = req.json()
        mac = req.params["mac"].upper()
        target_band = None
        target_ap = None
        if kind == "STEER_BAND":
            band_raw = body.get("band")
            if band_raw not in (BandKind.GHZ24.value, BandKind.GHZ5.value):
                raise SchemaViolation(f"steer body needs band GHZ24|GHZ5, got {band_raw!r}")
            target_band = BandKind(band_raw)
        if kind == "MOVE_AP":
            target_ap = body.get("target_ap_id")
            if not target_ap:
                raise SchemaViolation("move body needs target_ap_id")
        cmd = ActuationCommand(
            kind=kind,
            client_mac=mac,
            command_id=str(body.get("command_id") or uuid.uuid4()),
            target_ap_id=target_ap,
            target_band=target_band,
            issued_at=self.world.clock_ms,
        )
        with self._lock:
            result = self.world.handle_command(cmd)
            self._view_aps = self.world.ap_states()
            self._view_clients = self.world.client_states()
        return result.to_json()

    def _post_disassociate(self, req: Request):
        return self._command(req, "DISASSOCIATE")

    def _post_steer(self, req: Request):
        return self._command(req, "STEER_BAND")

    def _post_move(self, req: Request):
        return self._command(req, "MOVE_AP")


class EmulatorService:
    """Wall-clock runner: steps the world at step_seconds / time_compression."""

    def __init__(self, facade: ControllerFacade):
        self.facade = facade
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def start(self) -> None:
        self.facade.server.start()
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def _run(self) -> None:
        cfg = self.facade.world.config
        wall_dt = cfg.step_seconds / cfg.time_compression
        while not self._stop.wait(wall_dt):
            self.facade.step_and_publish()

    def stop(self) -> None:
        self._stop.set()
        if self._thread:
            self._thread.join(timeout=5)
        self.facade.server.stop()
