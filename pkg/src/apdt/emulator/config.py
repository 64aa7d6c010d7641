"""Emulator config file (JSON) loading."""

from __future__ import annotations

import json

from ..errors import ConfigError
from .profile import WorkloadProfile
from .world import DEFAULT_START_MS, EmulatorConfig, InjectedSurge

PROFILE_FIELDS = (
    "base_bps", "peak_bps", "peak_hour", "sigma_hours", "noise_cv",
    "surge_rate_per_day", "surge_multiplier", "surge_duration_min",
)


def config_from_json(d: dict) -> EmulatorConfig:
    prof_in = d.get("profile") or {}
    unknown = set(prof_in) - set(PROFILE_FIELDS)
    if unknown:
        raise ConfigError(f"unknown profile fields: {sorted(unknown)}")
    profile = WorkloadProfile(**{k: float(v) for k, v in prof_in.items()})

    surges = tuple(
        InjectedSurge(
            start_offset_s=float(s["start_offset_s"]),
            duration_min=float(s["duration_min"]),
            multiplier=float(s["multiplier"]),
            ap_index=int(s.get("ap_index", 0)),
        )
        for s in d.get("injected_surges", [])
    )

    cfg = EmulatorConfig(
        profile=profile,
        seed=int(d.get("seed", 42)),
        ap_count=int(d.get("ap_count", 3)),
        roster=int(d.get("roster", 60)),
        capable_5ghz_fraction=float(d.get("capable_5ghz_fraction", 0.7)),
        ghz5_camp_probability=float(d.get("ghz5_camp_probability", 0.5)),
        churn_per_client_per_hour=float(d.get("churn_per_client_per_hour", 0.0)),
        step_seconds=int(d.get("step_seconds", 10)),
        time_compression=float(d.get("time_compression", 60.0)),
        start_time_ms=int(d.get("start_time_ms", DEFAULT_START_MS)),
        capacity_ghz24_bps=float(d.get("capacity_ghz24_bps", 100e6)),
        capacity_ghz5_bps=float(d.get("capacity_ghz5_bps", 400e6)),
        airtime_cap=float(d.get("airtime_cap", 0.95)),
        reassoc_mean_delay_s=float(d.get("reassoc_mean_delay_s", 5.0)),
        sticky_clients=bool(d.get("sticky_clients", False)),
        injected_surges=surges,
        auth_token=str(d.get("auth_token", "emulator-token")),
        bind_host=str(d.get("bind_host", "127.0.0.1")),
        bind_port=int(d.get("bind_port", 0)),
    )
    cfg.validate()
    return cfg


def load_config(path: str) -> EmulatorConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            return config_from_json(json.load(fh))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
