import { describe, expect, it } from "vitest";

import { buildScenarioRequest, referencePreset, reportChart, validateScenarioForm } from "../src/scenario";
import type { ReportPayload, SnapshotPayload } from "../src/types";

const AP = "AC:DE:48:00:00:00";

function snapshot(capableOn24 = 2, totalOn24 = 4): SnapshotPayload {
  return {
    version: 3,
    taken_at: "2025-03-03T10:00:00.000Z",
    aps: [
      {
        ap_id: AP, name: "ap-1", location_tag: "z", last_seen: "2025-03-03T10:00:00.000Z",
        radios: [
          { band: "GHZ24", channel: 6, airtime_utilization: 0.1, noise_floor_dbm: -95,
            client_count: totalOn24, rx_rate_bps: 0, tx_rate_bps: 0 },
          { band: "GHZ5", channel: 44, airtime_utilization: 0.05, noise_floor_dbm: -92,
            client_count: 0, rx_rate_bps: 0, tx_rate_bps: 0 },
        ],
      },
    ],
    clients: Array.from({ length: totalOn24 }, (_, i) => ({
      client_mac: `CA:FE:00:00:00:0${i}`, ap_id: AP, band: "GHZ24" as const,
      snr_db: 30, byte_rate_bps: 50_000, connected_since: "2025-03-03T09:00:00.000Z",
      capable_5ghz: i < capableOn24,
    })),
  };
}

function form(overrides: Parameters<typeof validateScenarioForm>[0]["overrides"]) {
  return {
    scenarioId: "s", overrides, durationSeconds: 60,
    reportIntervalSeconds: 10, engine: "ANALYTIC" as const, seed: 1,
  };
}

describe("validateScenarioForm", () => {
  it("accepts a steer within the capable pool", () => {
    expect(validateScenarioForm(
      form([{ kind: "steer", ap: AP, n: 2, from_band: "GHZ24", to_band: "GHZ5" }]),
      snapshot(),
    )).toEqual([]);
  });

  it("rejects steering beyond the capable-client count before submit", () => {
    const issues = validateScenarioForm(
      form([{ kind: "steer", ap: AP, n: 3, from_band: "GHZ24", to_band: "GHZ5" }]),
      snapshot(2),
    );
    expect(issues).toHaveLength(1);
    expect(issues[0]!.overrideIndex).toBe(0);
    expect(issues[0]!.message).toContain("only 2");
  });

  it("tracks earlier overrides when validating later ones", () => {
    const issues = validateScenarioForm(
      form([
        { kind: "add_clients", ap: AP, band: "GHZ24", n: 3, byte_rate_bps: 1000 },
        { kind: "steer", ap: AP, n: 5, from_band: "GHZ24", to_band: "GHZ5" },
      ]),
      snapshot(2),
    );
    expect(issues).toEqual([]); // 2 capable + 3 synthetic (capable) = 5
  });

  it("rejects removing more clients than exist", () => {
    const issues = validateScenarioForm(
      form([{ kind: "remove_clients", ap: AP, n: 9 }]), snapshot(),
    );
    expect(issues[0]!.message).toContain("only 4 clients");
  });

  it("bounds airtime at 0.95 and flags bad duration", () => {
    const issues = validateScenarioForm(
      form([{ kind: "set_airtime", ap: AP, band: "GHZ24", value: 0.99 }]),
      snapshot(),
    );
    expect(issues[0]!.message).toContain("airtime");
    const formIssues = validateScenarioForm(
      { ...form([]), durationSeconds: 65 }, snapshot(),
    );
    expect(formIssues[0]!.overrideIndex).toBeNull();
  });

  it("flags unknown APs", () => {
    const issues = validateScenarioForm(
      form([{ kind: "remove_clients", ap: "AC:DE:48:00:00:99", n: 1 }]), snapshot(),
    );
    expect(issues[0]!.message).toContain("unknown AP");
  });
});

describe("buildScenarioRequest", () => {
  it("maps 1:1 onto the server scenario schema", () => {
    const snap = snapshot();
    const request = buildScenarioRequest(
      form([{ kind: "steer", ap: AP, n: 1, from_band: "GHZ24", to_band: "GHZ5" }]),
      snap,
    ) as Record<string, unknown>;
    expect(Object.keys(request).sort()).toEqual([
      "base", "duration_seconds", "engine", "overrides",
      "report_interval_seconds", "scenario_id", "seed",
    ]);
    expect((request["overrides"] as unknown[])).toHaveLength(1);
  });
});

describe("reportChart", () => {
  function report(engine: "ANALYTIC" | "EVENT", values: (number | null)[]): ReportPayload {
    return {
      scenario_id: "s", engine, seed: 0, unstable: false,
      per_interval: values.map((v, i) => ({
        t_seconds: (i + 1) * 10, mean_latency_ms: v, p95_latency_ms: v,
        offered_bps: 0, served_bps: 0, packets_in: 0, packets_served: 0, mean_queue_len: 0,
      })),
      per_ap_band: [],
    };
  }

  it("renders the reference run as a flat 9.4 line", () => {
    const chart = reportChart(report("ANALYTIC", [9.4, 9.4, 9.4, 9.4, 9.4, 9.4]));
    expect(chart).toHaveLength(1);
    expect(chart[0]!.points.map((p) => p.value)).toEqual([9.4, 9.4, 9.4, 9.4, 9.4, 9.4]);
    expect(chart[0]!.points.map((p) => p.t)).toEqual([10, 20, 30, 40, 50, 60]);
  });

  it("adds a p95 band for EVENT runs and drops null intervals", () => {
    const chart = reportChart(report("EVENT", [0.15, null, 0.16]));
    expect(chart).toHaveLength(2);
    expect(chart[0]!.points).toHaveLength(2);
  });
});

describe("referencePreset", () => {
  it("matches the shipped reference scenario shape", () => {
    const preset = referencePreset() as {
      base: { aps: unknown[]; clients: unknown[] };
      engine: string;
      duration_seconds: number;
    };
    expect(preset.base.aps).toHaveLength(1);
    expect(preset.base.clients).toHaveLength(18);
    expect(preset.engine).toBe("ANALYTIC");
    expect(preset.duration_seconds).toBe(60);
  });
});
