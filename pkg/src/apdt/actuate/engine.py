"""The propose -> simulate -> approve -> apply -> verify loop.

Each operation advances one plan; plans are independent aggregates and a
registry serializes operations per plan and blocks concurrent plans that
touch the same client at apply time.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from typing import Optional

from ..controller import ControllerClient
from ..errors import (
    ApdtError,
    ConflictingPlan,
    ControllerUnreachable,
    InsufficientTelemetry,
    SimulationFailed,
    UnknownAp,
)
from ..forecast.predict import CongestionAlert
from ..model import BandKind, ClientState, Metric, TwinSnapshot
from ..timeutil import from_iso
from ..sim.engine import run_simulation
from ..sim.scenario import build_scenario
from ..sim.types import EngineKind
from ..twin.store import TwinStore
from .plan import Evidence, Move, MoveOutcome, RecommendationPlan
from .policy import OffloadPolicy

SYSTEM_ACTOR = "apdt"


def propose_plan(
    alert: CongestionAlert,
    snapshot: TwinSnapshot,
    policy: OffloadPolicy = OffloadPolicy(),
    plan_id: Optional[str] = None,
) -> RecommendationPlan:
    """Pick up to max_moves_per_plan of the heaviest clients on the alerting
    radio and give each a steer or move target; infeasible clients are
    skipped, and a plan with no feasible moves is born REJECTED."""
    policy.validate()
    ap = snapshot.ap(alert.ap_id)
    if ap is None:
        raise UnknownAp(alert.ap_id)
    band = alert.band or _busier_band(snapshot, alert.ap_id)

    candidates = sorted(
        snapshot.clients_on(alert.ap_id, band),
        key=lambda c: (-c.byte_rate_bps, c.client_mac),
    )

    moves: list[Move] = []
    steered_load_bits = 0.0  # headroom consumed by moves already planned
    moved_load_bits: dict[str, float] = {}
    for client in candidates:
        if len(moves) >= policy.max_moves_per_plan:
            break
        client_bits = client.byte_rate_bps * 8.0
        if (
            policy.prefer_band_steer
            and band is BandKind.GHZ24
            and client.capable_5ghz
            and ap.radio(BandKind.GHZ5) is not None
        ):
            headroom = _radio_headroom(ap, BandKind.GHZ5, policy) - steered_load_bits
            if headroom - client_bits >= policy.target_headroom_min_bps:
                moves.append(
                    Move(
                        client_mac=client.client_mac,
                        action="STEER_BAND",
                        from_ap_id=alert.ap_id,
                        from_band=band,
                        target_band=BandKind.GHZ5,
                        byte_rate_at_proposal=client.byte_rate_bps,
                    )
                )
                steered_load_bits += client_bits
                continue

        target = _best_neighbor(snapshot, alert.ap_id, band, policy, moved_load_bits, client_bits)
        if target is not None:
            moves.append(
                Move(
                    client_mac=client.client_mac,
                    action="MOVE_AP",
                    from_ap_id=alert.ap_id,
                    from_band=band,
                    target_ap_id=target,
                    byte_rate_at_proposal=client.byte_rate_bps,
                )
            )
            moved_load_bits[target] = moved_load_bits.get(target, 0.0) + client_bits

    plan = RecommendationPlan(
        plan_id=plan_id or f"plan-{uuid.uuid4().hex[:12]}",
        trigger=alert,
        moves=tuple(moves),
        snapshot_version=snapshot.version,
    )
    if moves:
        plan.transition("PROPOSED", SYSTEM_ACTOR, f"proposed {len(moves)} moves on {alert.ap_id}/{band.value}")
    else:
        plan.transition("REJECTED", SYSTEM_ACTOR, "no feasible moves")
    return plan


def _busier_band(snapshot: TwinSnapshot, ap_id: str) -> BandKind:
    ap = snapshot.ap(ap_id)
    rates = {
        r.band: r.rx_rate_bps + r.tx_rate_bps
        for r in ap.radios
    }
    return max(rates, key=lambda b: (rates[b], b is BandKind.GHZ24))


def _radio_headroom(ap, band: BandKind, policy: OffloadPolicy) -> float:
    radio = ap.radio(band)
    if radio is None:
        return -1.0
    capacity = policy.capacity_ghz24_bps if band is BandKind.GHZ24 else policy.capacity_ghz5_bps
    return capacity - (radio.rx_rate_bps + radio.tx_rate_bps)


def _best_neighbor(
    snapshot: TwinSnapshot,
    ap_id: str,
    band: BandKind,
    policy: OffloadPolicy,
    moved_load_bits: dict[str, float],
    client_bits: float,
) -> Optional[str]:
    """Neighbor with max same-band headroom; ties broken by client SNR
    estimate (uniform without per-neighbor telemetry) then smallest ap_id."""
    best: Optional[tuple[float, str]] = None
    for nbr_id in policy.neighbors_of(ap_id, [a.ap_id for a in snapshot.aps]):
        nbr = snapshot.ap(nbr_id)
        if nbr is None or nbr.radio(band) is None:
            continue
        headroom = _radio_headroom(nbr, band, policy) - moved_load_bits.get(nbr_id, 0.0)
        if headroom - client_bits < policy.target_headroom_min_bps:
            continue
        key = (-headroom, nbr_id)
        if best is None or key < best:
            best = key
    return best[1] if best else None


def validate_plan(
    plan: RecommendationPlan,
    snapshot: TwinSnapshot,
    actor: str = SYSTEM_ACTOR,
) -> RecommendationPlan:
    """Run baseline and plan-applied ANALYTIC scenarios from the current
    snapshot and record pre/post latency on the alerting radio."""
    plan.require_state("PROPOSED")
    band = plan.target_band
    try:
        current = {c.client_mac: c for c in snapshot.clients}
        for move in plan.moves:
            c = current.get(move.client_mac)
            if c is None or c.ap_id != move.from_ap_id or c.band is not move.from_band:
                raise SimulationFailed(
                    f"client {move.client_mac} no longer on {move.from_ap_id}/{move.from_band.value}"
                )

        baseline = build_scenario(
            snapshot, (), scenario_id=f"{plan.plan_id}-pre", engine=EngineKind.ANALYTIC
        )
        moved_clients = _apply_moves_to_roster(list(snapshot.clients), plan.moves)
        applied = build_scenario(
            (list(snapshot.aps), moved_clients),
            (),
            scenario_id=f"{plan.plan_id}-post",
            engine=EngineKind.ANALYTIC,
        )

        pre_report = run_simulation(baseline)
        post_report = run_simulation(applied)
        pre = pre_report.medium(plan.trigger.ap_id, band)
        post = post_report.medium(plan.trigger.ap_id, band)
        if pre is None or post is None:
            raise SimulationFailed(f"no medium {plan.trigger.ap_id}/{band.value} in report")
    except SimulationFailed as e:
        plan.transition(plan.state, actor, f"simulation failed: {e.detail}")
        raise
    except ApdtError as e:
        plan.transition(plan.state, actor, f"simulation failed: {e.detail}")
        raise SimulationFailed(e.detail) from e

    plan.evidence = Evidence(
        pre_latency_ms=pre.per_interval[0].mean_latency_ms,
        post_latency_ms=post.per_interval[0].mean_latency_ms,
        pre_bps=pre.per_interval[0].offered_bps,
        post_bps=post.per_interval[0].offered_bps,
    )
    plan.transition(
        "SIMULATED",
        actor,
        f"pre {plan.evidence.pre_latency_ms:.3f} ms -> post {plan.evidence.post_latency_ms:.3f} ms",
    )
    return plan


def _apply_moves_to_roster(clients: list[ClientState], moves: tuple[Move, ...]) -> list[ClientState]:
    from dataclasses import replace

    by_mac = {c.client_mac: c for c in clients}
    for move in moves:
        c = by_mac[move.client_mac]
        if move.action == "STEER_BAND":
            by_mac[move.client_mac] = replace(c, band=move.target_band)
        else:
            by_mac[move.client_mac] = replace(c, ap_id=move.target_ap_id)
    return list(by_mac.values())


def approve(
    plan: RecommendationPlan,
    actor: str,
    decision: str = "approve",
    force: bool = False,
) -> RecommendationPlan:
    """Human gate: approval sticks only when simulation showed improvement
    (or `force` is set, which the audit records)."""
    plan.require_state("SIMULATED")
    if decision != "approve":
        plan.transition("REJECTED", actor, "rejected by operator")
        return plan
    if plan.evidence.improves:
        plan.transition("APPROVED", actor, "simulated improvement confirmed")
    elif force:
        plan.transition("APPROVED", actor, "FORCED approval without simulated improvement")
    else:
        plan.transition("REJECTED", actor, "no simulated improvement")
    return plan


def apply_plan(
    plan: RecommendationPlan,
    controller: ControllerClient,
    actor: str = SYSTEM_ACTOR,
) -> RecommendationPlan:
    """Issue commands in move order with idempotency keys plan_id:index.

    Partial failures are recorded per move and the plan still becomes
    APPLIED; only total unreachability before the first command leaves the
    plan APPROVED (retryable).
    """
    plan.require_state("APPROVED")
    outcomes: list[MoveOutcome] = []
    applied_at: Optional[int] = None
    for i, move in enumerate(plan.moves):
        command_id = f"{plan.plan_id}:{i}"
        try:
            if move.action == "STEER_BAND":
                result = controller.steer(move.client_mac, move.target_band.value, command_id)
            else:
                result = controller.move(move.client_mac, move.target_ap_id, command_id)
            outcomes.append(MoveOutcome(index=i, command_id=command_id, accepted=True))
            applied_at = max(applied_at or 0, from_iso(result["applied_at"]))
        except ControllerUnreachable:
            if not outcomes:
                raise  # nothing issued; stay APPROVED and retry later
            outcomes.append(
                MoveOutcome(index=i, command_id=command_id, accepted=False,
                            reason="controller_unreachable")
            )
        except ApdtError as e:
            outcomes.append(
                MoveOutcome(index=i, command_id=command_id, accepted=False, reason=e.code)
            )
    plan.outcomes = outcomes
    plan.applied_at_ms = applied_at
    ok = sum(1 for o in outcomes if o.accepted)
    plan.transition("APPLIED", actor, f"{ok}/{len(outcomes)} moves accepted")
    return plan


def verify_or_rollback(
    plan: RecommendationPlan,
    store: TwinStore,
    controller: Optional[ControllerClient] = None,
    window_seconds: int = 120,
    actor: str = SYSTEM_ACTOR,
) -> RecommendationPlan:
    """Compare the alerting radio around the apply instant: a >= 10% mean
    byte-rate drop (or a client-count drop matching the successful moves)
    verifies the plan; anything else triggers best-effort inverse moves."""
    plan.require_state("APPLIED")
    if plan.applied_at_ms is None:
        raise InsufficientTelemetry("plan has no applied_at timestamp")
    t_apply = plan.applied_at_ms
    w_ms = window_seconds * 1000
    band = plan.target_band
    ap_id = plan.trigger.ap_id

    head = store.get_snapshot()
    if head.taken_at < t_apply + w_ms:
        raise InsufficientTelemetry(
            f"post-apply window incomplete: head at {head.taken_at}, need {t_apply + w_ms}"
        )

    pre = store.query_series(ap_id, Metric.BYTE_RATE, (t_apply - w_ms, t_apply), band=band)
    post = store.query_series(
        ap_id, Metric.BYTE_RATE, (t_apply + 1, t_apply + w_ms + 1), band=band
    )
    if len(pre.points) < 2 or len(post.points) < 2:
        raise InsufficientTelemetry(
            f"need >= 2 bins on each side, have {len(pre.points)}/{len(post.points)}"
        )
    pre_mean = sum(pre.values()) / len(pre.points)
    post_mean = sum(post.values()) / len(post.points)

    n_moved = len(plan.successful_moves())
    count_dropped = False
    try:
        snap_before = store.get_snapshot(at=t_apply - 1)
        before_count = len(snap_before.clients_on(ap_id, band))
        after_count = len(head.clients_on(ap_id, band))
        count_dropped = n_moved > 0 and (before_count - after_count) >= n_moved
    except ApdtError:
        pass

    rate_dropped = pre_mean > 0 and post_mean <= 0.9 * pre_mean
    if rate_dropped or count_dropped:
        plan.transition(
            "VERIFIED",
            actor,
            f"byte rate {pre_mean:.0f}->{post_mean:.0f} B/s, moved {n_moved}",
        )
        return plan

    rolled = 0
    if controller is not None:
        for i, move in enumerate(plan.successful_moves()):
            command_id = f"{plan.plan_id}:rollback:{i}"
            try:
                if move.action == "STEER_BAND":
                    controller.steer(move.client_mac, move.from_band.value, command_id)
                else:
                    controller.move(move.client_mac, move.from_ap_id, command_id)
                rolled += 1
            except ApdtError:
                continue  # best effort; the client may have roamed meanwhile
    plan.transition(
        "ROLLED_BACK",
        actor,
        f"no improvement ({pre_mean:.0f}->{post_mean:.0f} B/s); reverted {rolled} moves",
    )
    return plan


class PlanRegistry:
    """Holds plans, serializes per-plan operations, persists JSON + audit."""

    def __init__(self, directory: Optional[str] = None, on_transition=None):
        self._plans: dict[str, RecommendationPlan] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._mutex = threading.Lock()
        self._dir = directory
        self._on_transition = on_transition
        if directory:
            os.makedirs(directory, exist_ok=True)

    def add(self, plan: RecommendationPlan) -> RecommendationPlan:
        with self._mutex:
            self._plans[plan.plan_id] = plan
            self._locks[plan.plan_id] = threading.Lock()
        self._persist(plan)
        if self._on_transition:
            self._on_transition(plan)
        return plan

    def get(self, plan_id: str) -> RecommendationPlan:
        plan = self._plans.get(plan_id)
        if plan is None:
            from ..errors import NotFound

            raise NotFound(f"plan {plan_id}")
        return plan

    def all(self) -> list[RecommendationPlan]:
        with self._mutex:
            return list(self._plans.values())

    def in_flight_clients(self, exclude: str = "") -> set[str]:
        """Clients with commands on the wire: APPLIED but not yet resolved."""
        busy: set[str] = set()
        for p in self.all():
            if p.plan_id != exclude and p.state == "APPLIED":
                busy.update(m.client_mac for m in p.moves)
        return busy

    def run(self, plan_id: str, op, *args, **kwargs) -> RecommendationPlan:
        """Execute one lifecycle operation under the plan's lock."""
        with self._mutex:
            lock = self._locks.get(plan_id)
        if lock is None:
            from ..errors import NotFound

            raise NotFound(f"plan {plan_id}")
        with lock:
            plan = self.get(plan_id)
            if op is apply_plan:
                conflicts = self.in_flight_clients(exclude=plan_id) & {
                    m.client_mac for m in plan.moves
                }
                if conflicts:
                    raise ConflictingPlan(f"clients busy in other plans: {sorted(conflicts)[:3]}")
            try:
                result = op(plan, *args, **kwargs)
            finally:
                self._persist(plan)
                if self._on_transition:
                    self._on_transition(plan)
            return result

    def _persist(self, plan: RecommendationPlan) -> None:
        if not self._dir:
            return
        path = os.path.join(self._dir, f"{plan.plan_id}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(plan.to_json(), fh, indent=2)
        audit_path = os.path.join(self._dir, f"{plan.plan_id}.audit.jsonl")
        with open(audit_path, "w", encoding="utf-8") as fh:
            for entry in plan.audit:
                fh.write(json.dumps(entry.to_json(), separators=(",", ":")) + "\n")
