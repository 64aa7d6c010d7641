/** Gateway API payload shapes (mirrors /api/v1 JSON exactly). */

export type Band = "GHZ24" | "GHZ5";

export interface RadioPayload {
  band: Band;
  channel: number;
  airtime_utilization: number;
  noise_floor_dbm: number;
  client_count: number;
  rx_rate_bps: number;
  tx_rate_bps: number;
}

export interface ApPayload {
  ap_id: string;
  name: string;
  location_tag: string;
  last_seen: string;
  radios: RadioPayload[];
}

export interface ClientPayload {
  client_mac: string;
  ap_id: string;
  band: Band;
  snr_db: number;
  byte_rate_bps: number;
  connected_since: string;
  capable_5ghz: boolean;
}

export interface SnapshotPayload {
  version: number;
  taken_at: string;
  aps: ApPayload[];
  clients: ClientPayload[];
}

export interface SeriesPayload {
  ap_id: string;
  band: Band | null;
  metric: string;
  bin_seconds: number;
  points: [string, number][];
}

export interface AnomalyPayload {
  ap_id: string;
  metric: string | null;
  detected_at: string;
  kind: "STALE_AP" | "METRIC_SPIKE" | "METRIC_FLATLINE";
  detail: string;
}

export interface AlertPayload {
  alert_id: string;
  ap_id: string;
  band: Band | null;
  predicted_for: string;
  predicted_bps: number;
  threshold_bps: number;
  headroom_bps: number;
  model_version: string;
}

export interface IntervalPayload {
  t_seconds: number;
  mean_latency_ms: number | null;
  p95_latency_ms: number | null;
  offered_bps: number;
  served_bps: number;
  packets_in: number;
  packets_served: number;
  mean_queue_len: number;
}

export interface MediumReportPayload {
  ap_id: string;
  band: Band;
  per_interval: IntervalPayload[];
  packets_in_total: number;
  packets_served_total: number;
  final_queue: number;
}

export interface ReportPayload {
  scenario_id: string;
  engine: "ANALYTIC" | "EVENT";
  seed: number;
  unstable: boolean;
  per_interval: IntervalPayload[];
  per_ap_band: MediumReportPayload[];
}

export interface ScenarioResultPayload {
  status: "running" | "done";
  report?: ReportPayload;
}

export interface MovePayload {
  client_mac: string;
  action: "STEER_BAND" | "MOVE_AP";
  from_ap_id: string;
  from_band: Band;
  target_band: Band | null;
  target_ap_id: string | null;
  byte_rate_at_proposal: number;
}

export interface AuditEntryPayload {
  at: string;
  actor: string;
  transition: string; // "FROM->TO"
  note: string;
}

export interface EvidencePayload {
  pre_latency_ms: number | null;
  post_latency_ms: number | null;
  pre_bps: number | null;
  post_bps: number | null;
}

export type PlanState =
  | "PROPOSED"
  | "SIMULATED"
  | "APPROVED"
  | "APPLIED"
  | "VERIFIED"
  | "ROLLED_BACK"
  | "REJECTED";

export interface PlanPayload {
  plan_id: string;
  state: PlanState;
  trigger: AlertPayload;
  moves: MovePayload[];
  evidence: EvidencePayload;
  audit: AuditEntryPayload[];
  outcomes: { index: number; command_id: string; accepted: boolean; reason: string | null }[];
  applied_at: string | null;
  snapshot_version: number;
}

export interface MetaPayload {
  service: string;
  api_version: string;
  store_version: number;
  controller_url: string | null;
  auto_approve: boolean;
  counters: Record<string, number>;
  last_event_sequence: number;
}

export interface ApiEvent {
  sequence: number;
  event_type: "SNAPSHOT_UPDATED" | "ALERT_RAISED" | "PLAN_TRANSITIONED" | "SIM_COMPLETED";
  payload: Record<string, unknown>;
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}
