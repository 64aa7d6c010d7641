"""Plan lifecycle: proposal policy, simulation gate, apply, verify/rollback."""

import pytest

from apdt.actuate import (
    OffloadPolicy,
    PlanRegistry,
    RecommendationPlan,
    apply_plan,
    approve,
    propose_plan,
    validate_plan,
    verify_or_rollback,
)
from apdt.actuate.plan import Evidence, Move, MoveOutcome
from apdt.errors import ConflictingPlan, InsufficientTelemetry, InvalidState, SimulationFailed
from apdt.forecast import CongestionAlert
from apdt.model import BandKind, TwinSnapshot
from apdt.twin import TwinStore

from conftest import AP1, AP2, AP3, T0, ap, client, radio, sample_of


def hot_snapshot(n_clients=18, capable=18, neighbors=(), neighbor_load_bits=0):
    """One hot 2.4 GHz radio; optional neighbor APs with given load."""
    clients = [
        client(
            mac=f"CA:FE:00:00:05:{i:02X}",
            band=BandKind.GHZ24,
            rate=100_000 + (n_clients - i) * 1_000,  # descending by index
            capable=i < capable,
        )
        for i in range(n_clients)
    ]
    bits = sum(c.byte_rate_bps for c in clients) * 8
    aps = [ap(radios=(
        radio(BandKind.GHZ24, clients=n_clients, rx=int(0.6 * bits), tx=int(0.4 * bits)),
        radio(BandKind.GHZ5, channel=36),
    ))]
    for nbr_id in neighbors:
        aps.append(ap(
            ap_id=nbr_id, name=f"nbr-{nbr_id[-2:]}",
            radios=(
                radio(BandKind.GHZ24, rx=neighbor_load_bits // 2, tx=neighbor_load_bits // 2),
                radio(BandKind.GHZ5, channel=40),
            ),
        ))
    return TwinSnapshot(version=1, taken_at=T0, aps=tuple(aps), clients=tuple(clients))


def alert_for(ap_id=AP1, band=BandKind.GHZ24) -> CongestionAlert:
    return CongestionAlert(
        ap_id=ap_id, band=band, predicted_for=T0 + 3_600_000,
        predicted_bps=3e6, threshold_bps=2e6, headroom_bps=-1e6, model_version="test",
    )


def test_propose_all_steerable():
    snap = hot_snapshot(n_clients=10, capable=10)
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=3))
    assert plan.state == "PROPOSED"
    assert len(plan.moves) == 3
    assert all(m.action == "STEER_BAND" and m.target_band is BandKind.GHZ5 for m in plan.moves)
    # heaviest clients first
    rates = [m.byte_rate_at_proposal for m in plan.moves]
    assert rates == sorted(rates, reverse=True)


def test_propose_falls_back_to_neighbor_move():
    snap = hot_snapshot(n_clients=6, capable=0, neighbors=(AP2,))
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=2))
    assert len(plan.moves) == 2
    assert all(m.action == "MOVE_AP" and m.target_ap_id == AP2 for m in plan.moves)


def test_propose_tie_break_lexicographic():
    # two idle neighbors with byte-identical headroom -> smaller ap_id wins
    snap = hot_snapshot(n_clients=4, capable=0, neighbors=(AP3, AP2))
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=1))
    assert plan.moves[0].target_ap_id == AP2


def test_propose_no_feasible_moves_rejected():
    snap = hot_snapshot(n_clients=4, capable=0)  # no neighbors, no capable clients
    plan = propose_plan(alert_for(), snap)
    assert plan.state == "REJECTED"
    assert plan.moves == ()
    assert "no feasible moves" in plan.audit[-1].note


def test_propose_respects_5ghz_capability():
    snap = hot_snapshot(n_clients=10, capable=2, neighbors=(AP2,))
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=5))
    steers = [m for m in plan.moves if m.action == "STEER_BAND"]
    assert len(steers) == 2  # only the capable pair steered
    assert all(m.action == "MOVE_AP" for m in plan.moves if m not in steers)


def test_validate_reproduces_reference_arithmetic():
    snap = hot_snapshot(n_clients=18, capable=18)
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=3))
    validate_plan(plan, snap)
    assert plan.state == "SIMULATED"
    assert plan.evidence.pre_latency_ms == 9.4
    assert plan.evidence.post_latency_ms == 7.9
    assert plan.evidence.improves


def test_validate_stale_client_fails_simulation():
    snap = hot_snapshot(n_clients=6, capable=6)
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=2))
    gone = tuple(c for c in snap.clients if c.client_mac != plan.moves[0].client_mac)
    ap_states = []
    for a in snap.aps:
        radios = tuple(
            radio(r.band, channel=r.channel, clients=r.client_count - 1
                  if r.band is BandKind.GHZ24 else r.client_count)
            for r in a.radios
        )
        ap_states.append(ap(ap_id=a.ap_id, radios=radios))
    newer = TwinSnapshot(version=2, taken_at=T0 + 10_000, aps=tuple(ap_states), clients=gone)
    with pytest.raises(SimulationFailed):
        validate_plan(plan, newer)
    assert plan.state == "PROPOSED"
    assert "simulation failed" in plan.audit[-1].note


def test_approve_requires_improvement():
    snap = hot_snapshot(n_clients=18, capable=18)
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=3))
    validate_plan(plan, snap)
    approve(plan, "alice", "approve")
    assert plan.state == "APPROVED"
    assert any(e.actor == "alice" for e in plan.audit)


def test_approve_non_improving_rejected():
    plan = RecommendationPlan(plan_id="p1", trigger=alert_for(), moves=(
        Move(client_mac="CA:FE:00:00:05:01", action="STEER_BAND", from_ap_id=AP1,
             from_band=BandKind.GHZ24, target_band=BandKind.GHZ5),
    ))
    plan.transition("SIMULATED", "test")
    plan.evidence = Evidence(pre_latency_ms=5.0, post_latency_ms=5.0)
    approve(plan, "bob", "approve")
    assert plan.state == "REJECTED"
    assert "no simulated improvement" in plan.audit[-1].note


def test_approve_force_flag_audited():
    plan = RecommendationPlan(plan_id="p2", trigger=alert_for(), moves=())
    plan.transition("SIMULATED", "test")
    plan.evidence = Evidence(pre_latency_ms=5.0, post_latency_ms=5.0)
    approve(plan, "carol", "approve", force=True)
    assert plan.state == "APPROVED"
    assert "FORCED" in plan.audit[-1].note


def test_approve_on_proposed_is_invalid_state():
    snap = hot_snapshot()
    plan = propose_plan(alert_for(), snap)
    with pytest.raises(InvalidState):
        approve(plan, "dave", "approve")


def test_audit_entries_equal_transition_events():
    snap = hot_snapshot(n_clients=18, capable=18)
    plan = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=3))
    validate_plan(plan, snap)
    approve(plan, "erin", "approve")
    assert len(plan.audit) == 3  # proposed, simulated, approved
    transitions = [(e.from_state, e.to_state) for e in plan.audit]
    assert transitions == [
        ("PROPOSED", "PROPOSED"), ("PROPOSED", "SIMULATED"), ("SIMULATED", "APPROVED"),
    ]


def _applied_plan(moves, applied_at, plan_id="p-verify") -> RecommendationPlan:
    plan = RecommendationPlan(plan_id=plan_id, trigger=alert_for(), moves=tuple(moves))
    plan.transition("SIMULATED", "test")
    plan.evidence = Evidence(pre_latency_ms=9.4, post_latency_ms=7.9)
    plan.transition("APPROVED", "test")
    plan.transition("APPLIED", "test")
    plan.outcomes = [
        MoveOutcome(index=i, command_id=f"{plan_id}:{i}", accepted=True)
        for i in range(len(moves))
    ]
    plan.applied_at_ms = applied_at
    return plan


def _store_with_rates(rates_by_step, clients_per_step=None):
    """One AP; per-step AP byte rate driven through radio rx/tx."""
    store = TwinStore()
    for k, rate in enumerate(rates_by_step):
        n = clients_per_step[k] if clients_per_step else 2
        clients = [
            client(mac=f"CA:FE:00:00:06:{i:02X}", band=BandKind.GHZ24,
                   rate=rate // n, capable=True)
            for i in range(n)
        ]
        bits = sum(c.byte_rate_bps for c in clients) * 8
        aps = [ap(radios=(
            radio(BandKind.GHZ24, clients=n, rx=int(0.6 * bits), tx=int(0.4 * bits)),
            radio(BandKind.GHZ5, channel=36),
        ), last_seen=T0 + k * 10_000)]
        store.apply_sample(sample_of(aps, clients, taken_at=T0 + k * 10_000))
    return store


STEER = Move(client_mac="CA:FE:00:00:06:00", action="STEER_BAND", from_ap_id=AP1,
             from_band=BandKind.GHZ24, target_band=BandKind.GHZ5)


def test_verify_on_byte_rate_drop():
    # 12 pre bins at ~400 kB/s, 13 post bins at ~200 kB/s (>= 10% drop)
    rates = [400_000] * 13 + [200_000] * 13
    store = _store_with_rates(rates)
    plan = _applied_plan([STEER], applied_at=T0 + 12 * 10_000)
    verify_or_rollback(plan, store, window_seconds=120)
    assert plan.state == "VERIFIED"


def test_rollback_when_no_drop():
    rates = [400_000] * 26
    store = _store_with_rates(rates)
    plan = _applied_plan([STEER], applied_at=T0 + 12 * 10_000)
    verify_or_rollback(plan, store, controller=None, window_seconds=120)
    assert plan.state == "ROLLED_BACK"


def test_verify_insufficient_telemetry():
    rates = [400_000] * 14  # only ~1 bin of post-apply data
    store = _store_with_rates(rates)
    plan = _applied_plan([STEER], applied_at=T0 + 12 * 10_000)
    with pytest.raises(InsufficientTelemetry):
        verify_or_rollback(plan, store, window_seconds=120)
    assert plan.state == "APPLIED"


def test_registry_blocks_conflicting_plans():
    registry = PlanRegistry()
    snap = hot_snapshot(n_clients=18, capable=18)
    a = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=3), plan_id="pa")
    b = propose_plan(alert_for(), snap, OffloadPolicy(max_moves_per_plan=3), plan_id="pb")
    registry.add(a)
    registry.add(b)
    for p in (a, b):
        registry.run(p.plan_id, validate_plan, snap)
        registry.run(p.plan_id, approve, "op", "approve")
    # same top-rate clients in both plans: the second apply must be blocked

    class _NoopController:
        def steer(self, mac, band, command_id=None):
            return {"command_id": command_id, "accepted": True,
                    "applied_at": "2025-03-03T00:00:00.000Z", "reason": None}

        def move(self, mac, target, command_id=None):
            return self.steer(mac, "", command_id)

    registry.run("pa", apply_plan, _NoopController())
    with pytest.raises(ConflictingPlan):
        registry.run("pb", apply_plan, _NoopController())


def test_registry_persists_plan_documents(tmp_path):
    registry = PlanRegistry(directory=str(tmp_path))
    snap = hot_snapshot()
    plan = propose_plan(alert_for(), snap, plan_id="p-persist")
    registry.add(plan)
    registry.run("p-persist", validate_plan, snap)
    import json
    import os

    doc = json.load(open(os.path.join(str(tmp_path), "p-persist.json")))
    assert doc["state"] == "SIMULATED"
    audit_lines = open(os.path.join(str(tmp_path), "p-persist.audit.jsonl")).read().splitlines()
    assert len(audit_lines) == len(plan.audit)


def test_no_path_skips_the_gate():
    plan = RecommendationPlan(plan_id="p3", trigger=alert_for(), moves=())
    with pytest.raises(InvalidState):
        plan.transition("APPLIED", "attacker")
    with pytest.raises(InvalidState):
        plan.transition("APPROVED", "attacker")
    plan.transition("SIMULATED", "ok")
    with pytest.raises(InvalidState):
        plan.transition("APPLIED", "attacker")
