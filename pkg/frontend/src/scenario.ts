/**
 * What-if scenario composer: form edits map 1:1 onto the server's override
 * vocabulary, and client-side validation mirrors the server rules so most
 * conflicts surface before submit (the server stays authoritative).
 */

import type { Band, ReportPayload, SnapshotPayload } from "./types";

export type OverrideEdit =
  | { kind: "add_clients"; ap: string; band: Band; n: number; byte_rate_bps: number }
  | { kind: "remove_clients"; ap: string; n: number }
  | { kind: "steer"; ap: string; n: number; from_band: Band; to_band: Band }
  | { kind: "set_airtime"; ap: string; band: Band; value: number }
  | { kind: "set_channel"; ap: string; band: Band; channel: number };

export interface ScenarioForm {
  scenarioId: string;
  overrides: OverrideEdit[];
  durationSeconds: number;
  reportIntervalSeconds: number;
  engine: "ANALYTIC" | "EVENT";
  seed: number;
}

export interface ValidationIssue {
  overrideIndex: number | null; // null = form-level issue
  message: string;
}

export function validateScenarioForm(
  form: ScenarioForm,
  snapshot: SnapshotPayload,
): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  if (form.durationSeconds <= 0 || form.reportIntervalSeconds <= 0) {
    issues.push({ overrideIndex: null, message: "duration and interval must be positive" });
  } else if (form.durationSeconds % form.reportIntervalSeconds !== 0) {
    issues.push({
      overrideIndex: null,
      message: "duration must be divisible by the report interval",
    });
  }

  // Track roster deltas so later overrides validate against earlier ones,
  // matching the server's in-order application.
  const onBand = new Map<string, number>();
  const eligible = new Map<string, number>(); // steerable to GHZ5
  const onAp = new Map<string, number>();
  for (const ap of snapshot.aps) {
    for (const radio of ap.radios) onBand.set(`${ap.ap_id}|${radio.band}`, 0);
  }
  for (const client of snapshot.clients) {
    const key = `${client.ap_id}|${client.band}`;
    onBand.set(key, (onBand.get(key) ?? 0) + 1);
    onAp.set(client.ap_id, (onAp.get(client.ap_id) ?? 0) + 1);
    if (client.capable_5ghz) eligible.set(key, (eligible.get(key) ?? 0) + 1);
  }
  const hasRadio = (ap: string, band: Band) => onBand.has(`${ap}|${band}`);

  form.overrides.forEach((edit, index) => {
    const fail = (message: string) => issues.push({ overrideIndex: index, message });
    if (!snapshot.aps.some((a) => a.ap_id === edit.ap)) {
      fail(`unknown AP ${edit.ap}`);
      return;
    }
    switch (edit.kind) {
      case "add_clients": {
        if (!hasRadio(edit.ap, edit.band)) return fail(`AP has no ${edit.band} radio`);
        if (edit.n < 1) return fail("client count must be at least 1");
        if (edit.byte_rate_bps < 0) return fail("byte rate must be non-negative");
        const key = `${edit.ap}|${edit.band}`;
        onBand.set(key, (onBand.get(key) ?? 0) + edit.n);
        eligible.set(key, (eligible.get(key) ?? 0) + edit.n);
        onAp.set(edit.ap, (onAp.get(edit.ap) ?? 0) + edit.n);
        return;
      }
      case "remove_clients": {
        const present = onAp.get(edit.ap) ?? 0;
        if (edit.n > present) return fail(`only ${present} clients on ${edit.ap}`);
        onAp.set(edit.ap, present - edit.n);
        return;
      }
      case "steer": {
        if (!hasRadio(edit.ap, edit.from_band)) return fail(`AP has no ${edit.from_band} radio`);
        if (!hasRadio(edit.ap, edit.to_band)) return fail(`AP has no ${edit.to_band} radio`);
        const key = `${edit.ap}|${edit.from_band}`;
        const pool =
          edit.to_band === "GHZ5" ? (eligible.get(key) ?? 0) : (onBand.get(key) ?? 0);
        if (edit.n > pool) {
          return fail(
            edit.to_band === "GHZ5"
              ? `only ${pool} 5 GHz-capable clients on ${edit.from_band}`
              : `only ${pool} clients on ${edit.from_band}`,
          );
        }
        onBand.set(key, (onBand.get(key) ?? 0) - edit.n);
        if (edit.to_band === "GHZ5") eligible.set(key, pool - edit.n);
        const toKey = `${edit.ap}|${edit.to_band}`;
        onBand.set(toKey, (onBand.get(toKey) ?? 0) + edit.n);
        return;
      }
      case "set_airtime": {
        if (!hasRadio(edit.ap, edit.band)) return fail(`AP has no ${edit.band} radio`);
        if (edit.value < 0 || edit.value > 0.95) return fail("airtime must be in [0, 0.95]");
        return;
      }
      case "set_channel": {
        if (!hasRadio(edit.ap, edit.band)) return fail(`AP has no ${edit.band} radio`);
        return;
      }
    }
  });
  return issues;
}

/** Assemble the scenario document the gateway expects. */
export function buildScenarioRequest(form: ScenarioForm, snapshot: SnapshotPayload): object {
  return {
    scenario_id: form.scenarioId,
    base: { aps: snapshot.aps, clients: snapshot.clients },
    overrides: form.overrides,
    duration_seconds: form.durationSeconds,
    report_interval_seconds: form.reportIntervalSeconds,
    engine: form.engine,
    seed: form.seed,
  };
}

export interface ChartSeries {
  label: string;
  points: { t: number; value: number }[];
}

/** Latency-vs-time chart data: mean always, p95 band for EVENT runs. */
export function reportChart(report: ReportPayload): ChartSeries[] {
  const mean: ChartSeries = { label: "mean latency (ms)", points: [] };
  const p95: ChartSeries = { label: "p95 latency (ms)", points: [] };
  for (const interval of report.per_interval) {
    if (interval.mean_latency_ms !== null) {
      mean.points.push({ t: interval.t_seconds, value: interval.mean_latency_ms });
    }
    if (interval.p95_latency_ms !== null) {
      p95.points.push({ t: interval.t_seconds, value: interval.p95_latency_ms });
    }
  }
  return report.engine === "EVENT" ? [mean, p95] : [mean];
}

/** The reference preset: one AP, 18 clients on 2.4 GHz, zero airtime. */
export function referencePreset(): object {
  const taken = "2025-03-03T12:00:00.000Z";
  const apId = "AC:DE:48:00:00:00";
  return {
    scenario_id: "table1-reference",
    base: {
      aps: [
        {
          ap_id: apId,
          name: "ap-floor2-1",
          location_tag: "floor2/zone-a",
          last_seen: taken,
          radios: [
            {
              band: "GHZ24", channel: 1, airtime_utilization: 0.0,
              noise_floor_dbm: -95.0, client_count: 18,
              rx_rate_bps: 8_640_000, tx_rate_bps: 5_760_000,
            },
            {
              band: "GHZ5", channel: 36, airtime_utilization: 0.0,
              noise_floor_dbm: -92.0, client_count: 0,
              rx_rate_bps: 0, tx_rate_bps: 0,
            },
          ],
        },
      ],
      clients: Array.from({ length: 18 }, (_, i) => ({
        client_mac: `CA:FE:00:00:01:${i.toString(16).padStart(2, "0").toUpperCase()}`,
        ap_id: apId,
        band: "GHZ24",
        snr_db: 30.0,
        byte_rate_bps: 100_000,
        connected_since: taken,
        capable_5ghz: false,
      })),
    },
    overrides: [],
    duration_seconds: 60,
    report_interval_seconds: 10,
    engine: "ANALYTIC",
    seed: 0,
  };
}
