"""Recommendation plans: moves, lifecycle state machine, audit trail.

Transitions happen only through `Plan.transition`, which appends exactly
one audit entry per event (including same-state events like a failed
simulation attempt), keeping the audit count equal to the event count by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import InvalidState
from ..forecast.predict import CongestionAlert
from ..model import BandKind
from ..timeutil import now_ms, to_iso

STATES = ("PROPOSED", "SIMULATED", "APPROVED", "APPLIED", "VERIFIED", "ROLLED_BACK", "REJECTED")

_ALLOWED = {
    ("PROPOSED", "SIMULATED"),
    ("SIMULATED", "APPROVED"),
    ("APPROVED", "APPLIED"),
    ("APPLIED", "VERIFIED"),
    ("APPLIED", "ROLLED_BACK"),
    ("PROPOSED", "REJECTED"),
    ("SIMULATED", "REJECTED"),
    ("APPROVED", "REJECTED"),
}


@dataclass(frozen=True)
class Move:
    client_mac: str
    action: str  # STEER_BAND | MOVE_AP
    from_ap_id: str
    from_band: BandKind
    target_band: Optional[BandKind] = None
    target_ap_id: Optional[str] = None
    byte_rate_at_proposal: int = 0

    def target_label(self) -> str:
        if self.action == "STEER_BAND":
            return self.target_band.value
        return self.target_ap_id or ""

    def to_json(self) -> dict:
        return {
            "client_mac": self.client_mac,
            "action": self.action,
            "from_ap_id": self.from_ap_id,
            "from_band": self.from_band.value,
            "target_band": self.target_band.value if self.target_band else None,
            "target_ap_id": self.target_ap_id,
            "byte_rate_at_proposal": self.byte_rate_at_proposal,
        }


@dataclass(frozen=True)
class AuditEntry:
    at: int
    actor: str
    from_state: str
    to_state: str
    note: str

    def to_json(self) -> dict:
        return {
            "at": to_iso(self.at),
            "actor": self.actor,
            "transition": f"{self.from_state}->{self.to_state}",
            "note": self.note,
        }


@dataclass
class Evidence:
    pre_latency_ms: Optional[float] = None
    post_latency_ms: Optional[float] = None
    pre_bps: Optional[float] = None
    post_bps: Optional[float] = None

    @property
    def improves(self) -> bool:
        return (
            self.pre_latency_ms is not None
            and self.post_latency_ms is not None
            and self.post_latency_ms < self.pre_latency_ms
        )

    def to_json(self) -> dict:
        return {
            "pre_latency_ms": self.pre_latency_ms,
            "post_latency_ms": self.post_latency_ms,
            "pre_bps": self.pre_bps,
            "post_bps": self.post_bps,
        }


@dataclass
class MoveOutcome:
    index: int
    command_id: str
    accepted: bool
    reason: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "command_id": self.command_id,
            "accepted": self.accepted,
            "reason": self.reason,
        }


@dataclass
class RecommendationPlan:
    plan_id: str
    trigger: CongestionAlert
    moves: tuple[Move, ...]
    state: str = "PROPOSED"
    evidence: Evidence = field(default_factory=Evidence)
    audit: list[AuditEntry] = field(default_factory=list)
    outcomes: list[MoveOutcome] = field(default_factory=list)
    applied_at_ms: Optional[int] = None
    snapshot_version: int = 0

    @property
    def target_band(self) -> BandKind:
        return self.moves[0].from_band if self.moves else (self.trigger.band or BandKind.GHZ24)

    def transition(self, to_state: str, actor: str, note: str = "") -> None:
        """Move to `to_state` (or record a same-state event) with one audit
        entry; illegal edges raise InvalidState."""
        if to_state != self.state and (self.state, to_state) not in _ALLOWED:
            raise InvalidState(f"plan {self.plan_id}: {self.state} -> {to_state} not allowed")
        self.audit.append(
            AuditEntry(at=now_ms(), actor=actor, from_state=self.state,
                       to_state=to_state, note=note)
        )
        self.state = to_state

    def require_state(self, *states: str) -> None:
        if self.state not in states:
            raise InvalidState(
                f"plan {self.plan_id} is {self.state}, expected {' or '.join(states)}"
            )

    def successful_moves(self) -> list[Move]:
        ok = {o.index for o in self.outcomes if o.accepted}
        return [m for i, m in enumerate(self.moves) if i in ok]

    def to_json(self) -> dict:
        return {
            "plan_id": self.plan_id,
            "state": self.state,
            "trigger": self.trigger.to_json(),
            "moves": [m.to_json() for m in self.moves],
            "evidence": self.evidence.to_json(),
            "audit": [a.to_json() for a in self.audit],
            "outcomes": [o.to_json() for o in self.outcomes],
            "applied_at": to_iso(self.applied_at_ms) if self.applied_at_ms else None,
            "snapshot_version": self.snapshot_version,
        }
