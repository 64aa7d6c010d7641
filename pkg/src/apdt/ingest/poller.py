"""Periodic controller polling into the twin store.

One poller per controller; HTTP fetches within a cycle run concurrently
but the sink handoff is the single-writer path into the store. The loop
is self-healing: a failed cycle is counted and skipped, never fatal.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..controller import ControllerClient
from ..errors import ApdtError, AuthRejected, ConfigError, ControllerUnreachable
from ..model import ClientState, TelemetrySample
from ..timeutil import now_ms
from ..twin.store import TwinStore
from .parse import parse_ap_payload, parse_client_payload

log = logging.getLogger(__name__)


@dataclass
class PollerConfig:
    base_url: str
    auth_token: Optional[str] = None
    interval_seconds: float = 10.0
    timeout_ms: int = 2000
    max_retries: int = 2
    backoff_ms: int = 500
    # "controller": stamp samples with the controller's own clock (max AP
    # last_seen), which is the twin's time axis under emulator compression.
    # "wall": stamp with local wall time.
    clock: str = "controller"

    def validate(self) -> None:
        if self.interval_seconds <= 0:
            raise ConfigError("interval_seconds must be > 0")
        if self.timeout_ms <= 0 or self.timeout_ms >= self.interval_seconds * 1000:
            raise ConfigError("timeout_ms must be positive and below the poll interval")
        if self.clock not in ("controller", "wall"):
            raise ConfigError(f"unknown clock mode {self.clock!r}")

    def make_client(self) -> ControllerClient:
        return ControllerClient(
            self.base_url,
            auth_token=self.auth_token,
            timeout_ms=self.timeout_ms,
            max_retries=self.max_retries,
            backoff_ms=self.backoff_ms,
        )


def poll_once(config: PollerConfig, client: Optional[ControllerClient] = None) -> TelemetrySample:
    """One full cycle: AP listing, then every AP's client listing."""
    config.validate()
    client = client or config.make_client()
    started = time.monotonic()

    aps = parse_ap_payload(client.get_aps_raw())

    clients: list[ClientState] = []
    degraded: set[str] = set()

    def fetch(ap_id: str) -> list[ClientState]:
        return parse_client_payload(client.get_clients_raw(ap_id), ap_id)

    if aps:
        with ThreadPoolExecutor(max_workers=min(8, len(aps))) as pool:
            futures = {ap.ap_id: pool.submit(fetch, ap.ap_id) for ap in aps}
        for ap_id, fut in futures.items():
            try:
                clients.extend(fut.result())
            except AuthRejected:
                raise
            except ApdtError as e:
                log.warning("client listing for %s failed: %s", ap_id, e.detail)
                degraded.add(ap_id)

    latency_ms = (time.monotonic() - started) * 1000.0
    if config.clock == "controller":
        seen = [a.last_seen for a in aps if a.last_seen > 0]
        taken_at = max(seen) if seen else now_ms()
    else:
        taken_at = now_ms()
    aps = [
        a if a.last_seen > 0 else _with_last_seen(a, taken_at)
        for a in aps
    ]
    return TelemetrySample(
        taken_at=taken_at,
        aps=tuple(aps),
        clients=tuple(clients),
        poll_latency_ms=latency_ms,
        source=config.base_url,
        degraded_aps=frozenset(degraded),
    )


def _with_last_seen(ap, ts):
    from dataclasses import replace

    return replace(ap, last_seen=ts)


@dataclass
class Poller:
    """Service loop wrapper with liveness counters."""

    config: PollerConfig
    store: TwinStore
    on_sample: Optional[Callable[[TelemetrySample, int], None]] = None
    counters: dict = field(default_factory=lambda: {
        "polls_ok": 0, "polls_failed": 0, "polls_skipped": 0, "samples_rejected": 0,
    })

    def __post_init__(self):
        self.config.validate()
        self._client = self.config.make_client()
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def tick(self) -> Optional[int]:
        """One poll+apply cycle; returns the new store version or None."""
        try:
            sample = poll_once(self.config, self._client)
        except (ControllerUnreachable, AuthRejected, ApdtError) as e:
            self.counters["polls_failed"] += 1
            log.warning("poll failed: %s", getattr(e, "detail", e))
            return None
        self.counters["polls_ok"] += 1
        try:
            version = self.store.apply_sample(sample)
        except ApdtError as e:
            self.counters["samples_rejected"] += 1
            log.warning("sample rejected: %s", getattr(e, "detail", e))
            return None
        if self.on_sample is not None:
            self.on_sample(sample, version)
        return version

    def run(self) -> None:
        """Blocking loop; never raises. Overlap-free by construction: ticks
        that would start late are skipped and counted."""
        interval = self.config.interval_seconds
        next_tick = time.monotonic()
        while not self._stop.is_set():
            self.tick()
            next_tick += interval
            now = time.monotonic()
            while next_tick <= now:
                next_tick += interval
                self.counters["polls_skipped"] += 1
            if self._stop.wait(timeout=max(0.0, next_tick - now)):
                break

    def start(self) -> None:
        self._thread = threading.Thread(target=self.run, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread:
            self._thread.join(timeout=5)


def run_poller(config: PollerConfig, sink: TwinStore) -> None:
    """Blocking service entry point (the CLI uses Poller directly)."""
    Poller(config, sink).run()
