#!/usr/bin/env python3
"""Regenerate the checked-in fixtures (deterministic, seeded).

Run from the repo root: python scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from apdt.emulator.api import ap_payload
from apdt.emulator.profile import WorkloadProfile
from apdt.emulator.world import EmulatedWorld, EmulatorConfig
from apdt.model import BandKind
from apdt.timeutil import to_iso
from apdt.twin.logio import HEADER

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")

TABLE1_REAL = [(10, 14.0), (20, 12.0), (30, 10.5), (40, 9.5), (50, 9.25), (60, 9.0)]


def write_table1_real() -> None:
    path = os.path.join(FIXTURES, "table1_real.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t_seconds,latency_ms\n")
        for t, ms in TABLE1_REAL:
            fh.write(f"{t},{ms}\n")
    print(f"wrote {path}")


def write_table1_scenario() -> None:
    """One AP, 18 clients on the 2.4 GHz radio, zero external airtime."""
    taken = "2025-03-03T12:00:00.000Z"
    clients = [
        {
            "client_mac": f"CA:FE:00:00:01:{i:02X}",
            "ap_id": "AC:DE:48:00:00:00",
            "band": "GHZ24",
            "snr_db": 30.0,
            "byte_rate_bps": 100000,
            "connected_since": taken,
            "capable_5ghz": False,
        }
        for i in range(18)
    ]
    scenario = {
        "scenario_id": "table1-reference",
        "base": {
            "aps": [
                {
                    "ap_id": "AC:DE:48:00:00:00",
                    "name": "ap-floor2-1",
                    "location_tag": "floor2/zone-a",
                    "last_seen": taken,
                    "radios": [
                        {
                            "band": "GHZ24",
                            "channel": 1,
                            "airtime_utilization": 0.0,
                            "noise_floor_dbm": -95.0,
                            "client_count": 18,
                            "rx_rate_bps": 8640000,
                            "tx_rate_bps": 5760000,
                        },
                        {
                            "band": "GHZ5",
                            "channel": 36,
                            "airtime_utilization": 0.0,
                            "noise_floor_dbm": -92.0,
                            "client_count": 0,
                            "rx_rate_bps": 0,
                            "tx_rate_bps": 0,
                        },
                    ],
                }
            ],
            "clients": clients,
        },
        "overrides": [],
        "duration_seconds": 60,
        "report_interval_seconds": 10,
        "engine": "ANALYTIC",
        "seed": 0,
    }
    path = os.path.join(FIXTURES, "table1_scenario.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario, fh, indent=2)
    print(f"wrote {path}")


def write_aps_snapshot() -> None:
    """Raw controller AP payload captured from the seeded emulator."""
    world = EmulatedWorld(EmulatorConfig(seed=42))
    world.step()
    payload = ap_payload(world.ap_states())
    path = os.path.join(FIXTURES, "aps_snapshot.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
    print(f"wrote {path}")


def write_two_week_log() -> None:
    """14 days of hourly telemetry from a small seeded roster (336 records)."""
    cfg = EmulatorConfig(
        profile=WorkloadProfile(noise_cv=0.15),
        seed=1234,
        roster=12,
    )
    world = EmulatedWorld(cfg)
    path = os.path.join(FIXTURES, "two_week.jsonl")
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(HEADER, separators=(",", ":")) + "\n")
        for _ in range(14 * 24):
            world.step(3600)
            fh.write(json.dumps(world.sample().to_log_json(), separators=(",", ":")) + "\n")
            n += 1
    print(f"wrote {path} ({n} records)")


def main() -> None:
    os.makedirs(FIXTURES, exist_ok=True)
    write_table1_real()
    write_table1_scenario()
    write_aps_snapshot()
    write_two_week_log()


if __name__ == "__main__":
    main()
