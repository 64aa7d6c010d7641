"""Diurnal workload model: a Gaussian bump over the 24-hour circle.

Expected offered load per AP peaks mid-afternoon and decays symmetrically
with circular hour distance, reproducing the noon-to-evening traffic bump
at desk scale. All constants are config-overridable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ConfigError


@dataclass(frozen=True)
class WorkloadProfile:
    base_bps: float = 2e5  # bytes/s trough
    peak_bps: float = 2e6  # bytes/s crest
    peak_hour: float = 15.0
    sigma_hours: float = 3.0
    noise_cv: float = 0.2
    surge_rate_per_day: float = 0.0
    surge_multiplier: float = 3.0
    surge_duration_min: float = 30.0

    def validate(self) -> None:
        if not all(map(math.isfinite, (
            self.base_bps, self.peak_bps, self.peak_hour, self.sigma_hours,
            self.noise_cv, self.surge_rate_per_day, self.surge_multiplier,
            self.surge_duration_min,
        ))):
            raise ConfigError("workload profile fields must be finite")
        if self.peak_bps < self.base_bps:
            raise ConfigError("peak_bps must be >= base_bps")
        if not 0.0 <= self.peak_hour < 24.0:
            raise ConfigError("peak_hour must be in [0, 24)")
        if self.sigma_hours <= 0:
            raise ConfigError("sigma_hours must be > 0")
        if self.noise_cv < 0 or self.surge_rate_per_day < 0:
            raise ConfigError("noise_cv and surge_rate_per_day must be >= 0")
        if self.surge_multiplier < 1.0:
            raise ConfigError("surge_multiplier must be >= 1")


def circular_hour_distance(a: float, b: float) -> float:
    """Shortest distance on the 24 h circle, in [0, 12]."""
    d = abs(a - b) % 24.0
    return min(d, 24.0 - d)


def workload_rate(hour: float, profile: WorkloadProfile) -> float:
    """Expected pre-noise offered load (bytes/s) at a fractional hour."""
    profile.validate()
    delta = circular_hour_distance(hour % 24.0, profile.peak_hour)
    bump = math.exp(-(delta * delta) / (2.0 * profile.sigma_hours * profile.sigma_hours))
    return profile.base_bps + (profile.peak_bps - profile.base_bps) * bump
