"""Client-offloading policy knobs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConfigError


@dataclass(frozen=True)
class OffloadPolicy:
    max_moves_per_plan: int = 5
    prefer_band_steer: bool = True
    target_headroom_min_bps: float = 1e6  # bits/s of spare capacity a target must have
    neighbor_set: dict = field(default_factory=dict)  # ap_id -> [ap_id]; empty = all other APs
    capacity_ghz24_bps: float = 100e6
    capacity_ghz5_bps: float = 400e6

    def validate(self) -> None:
        if self.max_moves_per_plan < 1:
            raise ConfigError("max_moves_per_plan must be >= 1")

    def neighbors_of(self, ap_id: str, all_ap_ids: list[str]) -> list[str]:
        if self.neighbor_set:
            return [a for a in self.neighbor_set.get(ap_id, []) if a != ap_id]
        return [a for a in all_ap_ids if a != ap_id]
