"""Synthetic campus floor: APs and clients evolving under a diurnal load.

The world is fully determined by (seed, config, command history). Four
independent RNG streams (demand, churn, surge, association) keep paired
experiments comparable: toggling surges or issuing commands never shifts
another stream's draw sequence.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from ..errors import (
    ConfigError,
    IncapableClient,
    SchemaViolation,
    UnknownClient,
    UnknownTargetAp,
)
from ..model import AccessPointState, BandKind, ClientState, RadioState, TelemetrySample
from ..timeutil import hour_of_day, to_iso
from .profile import WorkloadProfile, workload_rate

# 2025-03-03T00:00:00Z — fixed epoch so seeded runs are reproducible anywhere.
DEFAULT_START_MS = 1_740_960_000_000


@dataclass(frozen=True)
class InjectedSurge:
    start_offset_s: float
    duration_min: float
    multiplier: float
    ap_index: int = 0


@dataclass(frozen=True)
class EmulatorConfig:
    profile: WorkloadProfile = field(default_factory=WorkloadProfile)
    seed: int = 42
    ap_count: int = 3
    roster: int = 60
    capable_5ghz_fraction: float = 0.7
    ghz5_camp_probability: float = 0.5
    churn_per_client_per_hour: float = 0.0
    step_seconds: int = 10
    time_compression: float = 60.0
    start_time_ms: int = DEFAULT_START_MS
    capacity_ghz24_bps: float = 100e6  # bits/s
    capacity_ghz5_bps: float = 400e6
    airtime_cap: float = 0.95
    reassoc_mean_delay_s: float = 5.0
    sticky_clients: bool = False
    injected_surges: tuple[InjectedSurge, ...] = ()
    auth_token: str = "emulator-token"
    bind_host: str = "127.0.0.1"
    bind_port: int = 0

    def validate(self) -> None:
        self.profile.validate()
        if self.ap_count < 1 or self.roster < 0:
            raise ConfigError("need at least one AP and a non-negative roster")
        if self.step_seconds <= 0 or self.time_compression <= 0:
            raise ConfigError("step_seconds and time_compression must be positive")
        if not 0.0 <= self.capable_5ghz_fraction <= 1.0:
            raise ConfigError("capable_5ghz_fraction must be in [0,1]")


@dataclass(frozen=True)
class ActuationCommand:
    kind: str  # DISASSOCIATE | STEER_BAND | MOVE_AP
    client_mac: str
    command_id: str
    target_ap_id: Optional[str] = None
    target_band: Optional[BandKind] = None
    issued_at: int = 0


@dataclass(frozen=True)
class CommandResult:
    command_id: str
    accepted: bool
    applied_at: int
    reason: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "command_id": self.command_id,
            "accepted": self.accepted,
            "applied_at": to_iso(self.applied_at),
            "reason": self.reason,
        }


class _Ap:
    __slots__ = ("index", "ap_id", "name", "location_tag", "channels", "noise", "offline_since")

    def __init__(self, index: int, ap_id: str, name: str, location_tag: str,
                 channels: dict, noise: dict):
        self.index = index
        self.ap_id = ap_id
        self.name = name
        self.location_tag = location_tag
        self.channels = channels
        self.noise = noise
        self.offline_since: Optional[int] = None


class _Client:
    __slots__ = ("mac", "ap_index", "band", "capable", "weight", "share", "snr_by_ap",
                 "connected_since", "byte_rate", "home")

    def __init__(self, mac, ap_index, band, capable, weight, snr_by_ap, connected_since):
        self.mac = mac
        self.ap_index = ap_index
        self.band = band
        self.capable = capable
        self.weight = weight
        # Fixed demand share, set once the spawn cohort is known; demand
        # travels with the client across steers and moves.
        self.share = 0.0
        self.snr_by_ap = snr_by_ap
        self.connected_since = connected_since
        self.byte_rate = 0.0
        self.home = (ap_index, band)


class _Surge:
    __slots__ = ("start_ms", "end_ms", "ap_index", "multiplier")

    def __init__(self, start_ms, end_ms, ap_index, multiplier):
        self.start_ms = start_ms
        self.end_ms = end_ms
        self.ap_index = ap_index
        self.multiplier = multiplier


GHZ24_CHANNELS = (1, 6, 11)
GHZ5_CHANNELS = (36, 40, 44, 48, 149, 153)


class EmulatedWorld:
    def __init__(self, config: EmulatorConfig = EmulatorConfig()):
        config.validate()
        self.config = config
        self.clock_ms = config.start_time_ms
        self._start_ms = config.start_time_ms

        self._rng_init = random.Random(f"{config.seed}/init")
        self._rng_demand = random.Random(f"{config.seed}/demand")
        self._rng_churn = random.Random(f"{config.seed}/churn")
        self._rng_surge = random.Random(f"{config.seed}/surge")
        self._rng_assoc = random.Random(f"{config.seed}/assoc")

        self.aps: list[_Ap] = []
        for i in range(config.ap_count):
            self.aps.append(
                _Ap(
                    index=i,
                    ap_id=f"AC:DE:48:00:00:{i:02X}",
                    name=f"ap-floor2-{i + 1}",
                    location_tag=f"floor2/zone-{chr(ord('a') + i)}",
                    channels={
                        BandKind.GHZ24: GHZ24_CHANNELS[i % len(GHZ24_CHANNELS)],
                        BandKind.GHZ5: GHZ5_CHANNELS[i % len(GHZ5_CHANNELS)],
                    },
                    noise={
                        BandKind.GHZ24: round(-95.0 + self._rng_init.uniform(-2.0, 2.0), 1),
                        BandKind.GHZ5: round(-92.0 + self._rng_init.uniform(-2.0, 2.0), 1),
                    },
                )
            )

        self.clients: dict[str, _Client] = {}
        self._mac_counter = 0
        per_ap = config.roster // config.ap_count if config.ap_count else 0
        extras = config.roster - per_ap * config.ap_count
        for i in range(config.ap_count):
            n = per_ap + (1 if i < extras else 0)
            for _ in range(n):
                self._spawn_client(i, rng=self._rng_init)
        # Normalize the initial cohort: shares on each AP sum to 1, and the
        # per-AP scale is remembered so churn arrivals join at the same scale.
        self._nominal_weight_sum = [0.0] * config.ap_count
        for c in self.clients.values():
            self._nominal_weight_sum[c.ap_index] += c.weight
        for c in self.clients.values():
            denom = self._nominal_weight_sum[c.ap_index]
            c.share = c.weight / denom if denom > 0 else 0.0

        self._pending_reassoc: list[tuple[int, str]] = []  # (due_ms, mac)
        self._surges: list[_Surge] = []
        for inj in config.injected_surges:
            start = self._start_ms + int(inj.start_offset_s * 1000)
            self._surges.append(
                _Surge(start, start + int(inj.duration_min * 60_000), inj.ap_index, inj.multiplier)
            )
        self._next_random_surge_ms: Optional[int] = None
        if config.profile.surge_rate_per_day > 0:
            self._next_random_surge_ms = self.clock_ms + self._surge_gap_ms()

        self._command_log: dict[str, CommandResult] = {}
        self.counters = {"steps": 0, "commands": 0, "arrivals": 0, "departures": 0}

        self._redraw_demand()

    # -- construction helpers ------------------------------------------------

    def _spawn_client(self, ap_index: int, rng: random.Random) -> _Client:
        self._mac_counter += 1
        n = self._mac_counter
        mac = f"CA:FE:00:{(n >> 16) & 0xFF:02X}:{(n >> 8) & 0xFF:02X}:{n & 0xFF:02X}"
        capable = rng.random() < self.config.capable_5ghz_fraction
        band = (
            BandKind.GHZ5
            if capable and rng.random() < self.config.ghz5_camp_probability
            else BandKind.GHZ24
        )
        weight = rng.lognormvariate(0.0, 0.5)
        snr_by_ap = tuple(round(rng.uniform(18.0, 42.0), 1) for _ in self.aps)
        client = _Client(mac, ap_index, band, capable, weight, snr_by_ap, self.clock_ms)
        self.clients[mac] = client
        return client

    def _surge_gap_ms(self) -> int:
        rate_per_ms = self.config.profile.surge_rate_per_day / 86_400_000.0
        return max(1, int(self._rng_surge.expovariate(rate_per_ms)))

    # -- stepping -------------------------------------------------------------

    def step(self, dt_seconds: Optional[float] = None) -> None:
        dt = float(dt_seconds if dt_seconds is not None else self.config.step_seconds)
        if dt <= 0:
            raise ConfigError("dt_seconds must be > 0")
        self.clock_ms += int(dt * 1000)
        self.counters["steps"] += 1

        self._process_reassociations()
        if self.config.sticky_clients:
            self._revert_moved_clients()
        if self.config.churn_per_client_per_hour > 0:
            self._churn(dt)
        self._update_surges()
        self._redraw_demand()

    def _process_reassociations(self) -> None:
        due = [(t, mac) for t, mac in self._pending_reassoc if t <= self.clock_ms]
        self._pending_reassoc = [(t, mac) for t, mac in self._pending_reassoc if t > self.clock_ms]
        for _, mac in sorted(due, key=lambda p: (p[0], p[1])):
            client = self.clients.get(mac)
            if client is None or client.ap_index >= 0:
                continue
            target = self._best_ap_for(client)
            band = self._camp_band(client, self._rng_assoc)
            client.ap_index = target
            client.band = band
            client.home = (target, band)
            client.connected_since = self.clock_ms

    def _revert_moved_clients(self) -> None:
        for mac in sorted(self.clients):
            c = self.clients[mac]
            if c.ap_index >= 0 and (c.ap_index, c.band) != c.home:
                c.ap_index, c.band = c.home
                c.connected_since = self.clock_ms

    def _churn(self, dt: float) -> None:
        p_leave = self.config.churn_per_client_per_hour * dt / 3600.0
        for mac in sorted(self.clients):
            if self._rng_churn.random() < p_leave:
                del self.clients[mac]
                self.counters["departures"] += 1
        lam = self.config.roster * self.config.churn_per_client_per_hour * dt / 3600.0
        for _ in range(_poisson(self._rng_churn, lam)):
            ap_index = self._rng_churn.randrange(self.config.ap_count)
            spawned = self._spawn_client(ap_index, rng=self._rng_churn)
            denom = self._nominal_weight_sum[ap_index]
            spawned.share = spawned.weight / denom if denom > 0 else 0.0
            self.counters["arrivals"] += 1

    def _update_surges(self) -> None:
        if self._next_random_surge_ms is not None and self.clock_ms >= self._next_random_surge_ms:
            while self._next_random_surge_ms <= self.clock_ms:
                ap_index = self._rng_surge.randrange(self.config.ap_count)
                dur = int(self.config.profile.surge_duration_min * 60_000)
                self._surges.append(
                    _Surge(
                        self._next_random_surge_ms,
                        self._next_random_surge_ms + dur,
                        ap_index,
                        self.config.profile.surge_multiplier,
                    )
                )
                self._next_random_surge_ms += self._surge_gap_ms()
        self._surges = [s for s in self._surges if s.end_ms > self.clock_ms]

    def surge_multiplier(self, ap_index: int) -> float:
        mult = 1.0
        for s in self._surges:
            if s.ap_index == ap_index and s.start_ms <= self.clock_ms < s.end_ms:
                mult *= s.multiplier
        return mult

    def _redraw_demand(self) -> None:
        hour = hour_of_day(self.clock_ms)
        rate = workload_rate(hour, self.config.profile)
        cv = self.config.profile.noise_cv
        sigma = math.sqrt(math.log(1.0 + cv * cv)) if cv > 0 else 0.0
        for mac in sorted(self.clients):
            c = self.clients[mac]
            if c.ap_index < 0:
                c.byte_rate = 0.0
                continue
            mean = rate * c.share * self.surge_multiplier(c.ap_index)
            if cv > 0:
                z = self._rng_demand.gauss(0.0, 1.0)
                c.byte_rate = mean * math.exp(sigma * z - 0.5 * sigma * sigma)
            else:
                c.byte_rate = mean

    # -- association policy ----------------------------------------------------

    def _best_ap_for(self, client: _Client) -> int:
        load = [0] * len(self.aps)
        for c in self.clients.values():
            if c.ap_index >= 0:
                load[c.ap_index] += 1
        ranked = sorted(
            range(len(self.aps)),
            key=lambda i: (-client.snr_by_ap[i], load[i], self.aps[i].ap_id),
        )
        return ranked[0]

    def _camp_band(self, client: _Client, rng: random.Random) -> BandKind:
        if client.capable and rng.random() < self.config.ghz5_camp_probability:
            return BandKind.GHZ5
        return BandKind.GHZ24

    # -- actuation --------------------------------------------------------------

    def handle_command(self, cmd: ActuationCommand) -> CommandResult:
        cached = self._command_log.get(cmd.command_id)
        if cached is not None:
            return cached
        self.counters["commands"] += 1

        client = self.clients.get(cmd.client_mac)
        if client is None or client.ap_index < 0:
            raise UnknownClient(f"client {cmd.client_mac} not associated")

        if cmd.kind == "DISASSOCIATE":
            client.ap_index = -1
            client.byte_rate = 0.0
            delay_ms = int(self._rng_assoc.expovariate(1.0 / self.config.reassoc_mean_delay_s) * 1000)
            self._pending_reassoc.append((self.clock_ms + max(1, delay_ms), client.mac))
        elif cmd.kind == "STEER_BAND":
            if cmd.target_band is None:
                raise SchemaViolation("STEER_BAND requires target_band")
            if cmd.target_band is BandKind.GHZ5 and not client.capable:
                raise IncapableClient(f"client {cmd.client_mac} is 2.4 GHz only")
            client.band = cmd.target_band
            if not self.config.sticky_clients:
                client.home = (client.ap_index, client.band)
            client.connected_since = self.clock_ms
        elif cmd.kind == "MOVE_AP":
            if cmd.target_ap_id is None:
                raise SchemaViolation("MOVE_AP requires target_ap_id")
            target = next((a for a in self.aps if a.ap_id == cmd.target_ap_id.upper()), None)
            if target is None:
                raise UnknownTargetAp(cmd.target_ap_id)
            client.ap_index = target.index
            if not self.config.sticky_clients:
                client.home = (client.ap_index, client.band)
            client.connected_since = self.clock_ms
        else:
            raise SchemaViolation(f"unknown command kind {cmd.kind!r}")

        result = CommandResult(command_id=cmd.command_id, accepted=True, applied_at=self.clock_ms)
        self._command_log[cmd.command_id] = result
        return result

    # -- observation ------------------------------------------------------------

    def set_ap_offline(self, ap_id: str, offline: bool = True) -> None:
        for ap in self.aps:
            if ap.ap_id == ap_id:
                ap.offline_since = self.clock_ms if offline else None
                return
        raise UnknownTargetAp(ap_id)

    def radio_byte_rate(self, ap_index: int, band: BandKind) -> float:
        """Exact (pre-rounding) offered load on one radio, bytes/s."""
        return sum(
            c.byte_rate
            for c in self.clients.values()
            if c.ap_index == ap_index and c.band is band
        )

    def clients_on(self, ap_id: str, band: Optional[BandKind] = None) -> list[str]:
        idx = next((a.index for a in self.aps if a.ap_id == ap_id), None)
        return sorted(
            mac
            for mac, c in self.clients.items()
            if c.ap_index == idx and (band is None or c.band is band)
        )

    def ap_states(self) -> list[AccessPointState]:
        out = []
        for ap in self.aps:
            radios = []
            for band in (BandKind.GHZ24, BandKind.GHZ5):
                offered_bytes = self.radio_byte_rate(ap.index, band)
                offered_bits = offered_bytes * 8.0
                capacity = (
                    self.config.capacity_ghz24_bps
                    if band is BandKind.GHZ24
                    else self.config.capacity_ghz5_bps
                )
                count = sum(
                    1 for c in self.clients.values()
                    if c.ap_index == ap.index and c.band is band
                )
                radios.append(
                    RadioState(
                        band=band,
                        channel=ap.channels[band],
                        airtime_utilization=min(self.config.airtime_cap, offered_bits / capacity),
                        noise_floor_dbm=ap.noise[band],
                        client_count=count,
                        rx_rate_bps=int(round(0.6 * offered_bits)),
                        tx_rate_bps=int(round(0.4 * offered_bits)),
                    )
                )
            out.append(
                AccessPointState(
                    ap_id=ap.ap_id,
                    name=ap.name,
                    radios=tuple(radios),
                    location_tag=ap.location_tag,
                    last_seen=ap.offline_since if ap.offline_since is not None else self.clock_ms,
                )
            )
        return out

    def client_states(self) -> list[ClientState]:
        out = []
        for mac in sorted(self.clients):
            c = self.clients[mac]
            if c.ap_index < 0:
                continue
            out.append(
                ClientState(
                    client_mac=c.mac,
                    ap_id=self.aps[c.ap_index].ap_id,
                    band=c.band,
                    snr_db=c.snr_by_ap[c.ap_index],
                    byte_rate_bps=int(round(c.byte_rate)),
                    connected_since=c.connected_since,
                    capable_5ghz=c.capable,
                )
            )
        return out

    def sample(self) -> TelemetrySample:
        """Direct twin feed bypassing HTTP (offline fixture generation)."""
        return TelemetrySample(
            taken_at=self.clock_ms,
            aps=tuple(self.ap_states()),
            clients=tuple(self.client_states()),
            poll_latency_ms=0.0,
            source="emulator://direct",
        )


def _poisson(rng: random.Random, lam: float) -> int:
    """Knuth's method; lam is small (churn per step)."""
    if lam <= 0:
        return 0
    l_exp = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= l_exp:
            return k
        k += 1
