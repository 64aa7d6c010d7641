/**
 * Approval inbox view-model: moves table, simulation evidence, lifecycle
 * timeline, and the client-side mirror of the server's approval gate.
 */

import type { PlanPayload, PlanState } from "./types";

export interface TimelineEntry {
  at: string;
  actor: string;
  from: PlanState;
  to: PlanState;
  note: string;
}

export interface MoveRow {
  clientMac: string;
  action: string;
  from: string;
  target: string;
  byteRateBps: number;
  outcome: "pending" | "accepted" | "failed";
}

export interface PlanView {
  planId: string;
  state: PlanState;
  alertSummary: string;
  moves: MoveRow[];
  preLatencyMs: number | null;
  postLatencyMs: number | null;
  improvementMs: number | null;
  canApprove: boolean;
  approveDisabledReason: string | null;
  timeline: TimelineEntry[];
}

export function buildPlanView(plan: PlanPayload): PlanView {
  const outcomes = new Map(plan.outcomes.map((o) => [o.index, o.accepted]));
  const moves: MoveRow[] = plan.moves.map((move, index) => ({
    clientMac: move.client_mac,
    action: move.action,
    from: `${move.from_ap_id} ${move.from_band}`,
    target: move.action === "STEER_BAND" ? (move.target_band ?? "") : (move.target_ap_id ?? ""),
    byteRateBps: move.byte_rate_at_proposal,
    outcome: !outcomes.has(index) ? "pending" : outcomes.get(index) ? "accepted" : "failed",
  }));

  const pre = plan.evidence.pre_latency_ms;
  const post = plan.evidence.post_latency_ms;
  const improves = pre !== null && post !== null && post < pre;

  let canApprove = false;
  let approveDisabledReason: string | null = null;
  if (plan.state !== "SIMULATED") {
    approveDisabledReason = `plan is ${plan.state}, only SIMULATED plans can be approved`;
  } else if (!improves) {
    approveDisabledReason = "simulation shows no latency improvement";
  } else {
    canApprove = true;
  }

  const timeline: TimelineEntry[] = plan.audit.map((entry) => {
    const [from, to] = entry.transition.split("->") as [PlanState, PlanState];
    return { at: entry.at, actor: entry.actor, from, to, note: entry.note };
  });

  const trigger = plan.trigger;
  const band = trigger.band ? `/${trigger.band}` : "";
  return {
    planId: plan.plan_id,
    state: plan.state,
    alertSummary:
      `${trigger.ap_id}${band} forecast ${Math.round(trigger.predicted_bps)} B/s ` +
      `over threshold ${Math.round(trigger.threshold_bps)} B/s at ${trigger.predicted_for}`,
    moves,
    preLatencyMs: pre,
    postLatencyMs: post,
    improvementMs: improves && pre !== null && post !== null ? pre - post : null,
    canApprove,
    approveDisabledReason,
    timeline,
  };
}

/** Timeline must replay the audit in exact lifecycle order. */
export function timelineIsOrdered(view: PlanView): boolean {
  for (let i = 1; i < view.timeline.length; i += 1) {
    if (view.timeline[i]!.from !== view.timeline[i - 1]!.to) return false;
  }
  return true;
}

/** True when the payload indicates somebody else advanced the plan (409 path). */
export function isStaleConflict(status: number, code: string): boolean {
  return status === 409 && code === "invalid_state";
}
