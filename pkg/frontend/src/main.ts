/**
 * Console bootstrap: fetch /meta, wire the fleet view to the event stream
 * (with a 10 s polling fallback while disconnected), and mount the scenario
 * composer and plan inbox.
 */

import { ApiClient, ApiError } from "./api";
import { renderBanner, renderChart, renderFleet, renderPlan } from "./dom";
import { EventStream } from "./events";
import { buildFleet } from "./fleet";
import { buildPlanView } from "./plans";
import { referencePreset, reportChart } from "./scenario";
import { VersionGate } from "./reconcile";
import type { SeriesPayload } from "./types";

const POLL_FALLBACK_MS = 10_000;

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const bannerHost = document.getElementById("banner")!;
  const fleetHost = document.getElementById("fleet")!;
  const chartHost = document.getElementById("chart")!;
  const plansHost = document.getElementById("plans")!;

  const api = new ApiClient({ baseUrl: "" });
  const versions = new VersionGate();
  let connected = false;

  async function refreshFleet(): Promise<void> {
    try {
      const snapshot = await api.snapshot();
      if (!versions.accept(snapshot.version)) return; // stale response
      const anomalies = await api.anomalies();
      const series: Record<string, SeriesPayload> = {};
      for (const ap of snapshot.aps) {
        series[ap.ap_id] = await api.series(ap.ap_id, "BYTE_RATE", { bin: 10 });
      }
      renderBanner(bannerHost, null);
      renderFleet(fleetHost, buildFleet(snapshot, anomalies, series));
    } catch (error) {
      const detail = error instanceof ApiError ? error.message : "API unreachable — retrying";
      renderBanner(bannerHost, detail);
    }
  }

  async function refreshPlans(): Promise<void> {
    try {
      const plans = await api.plans();
      plansHost.innerHTML = "";
      for (const plan of plans) {
        const slot = document.createElement("div");
        plansHost.appendChild(slot);
        const rerender = (payload: typeof plan) =>
          renderPlan(slot, buildPlanView(payload), {
            onApprove: () => act("approve"),
            onReject: () => act("reject"),
          });
        const act = async (decision: "approve" | "reject") => {
          try {
            rerender(await api.approvePlan(plan.plan_id, operatorName(), decision));
          } catch (error) {
            if (error instanceof ApiError && error.status === 409) {
              rerender(await api.plan(plan.plan_id)); // raced: refresh and explain
              renderBanner(bannerHost, `plan ${plan.plan_id} changed underneath you: ${error.message}`);
            } else {
              renderBanner(bannerHost, String(error));
            }
          }
        };
        rerender(plan);
      }
    } catch (error) {
      renderBanner(bannerHost, String(error));
    }
  }

  document.getElementById("run-reference")?.addEventListener("click", async () => {
    try {
      const { scenario_id } = await api.submitScenario(referencePreset());
      const result = await api.pollScenarioResult(scenario_id);
      if (result.report) renderChart(chartHost, reportChart(result.report));
    } catch (error) {
      renderBanner(bannerHost, String(error));
    }
  });

  const stream = new EventStream({
    baseUrl: "",
    onEvent: (event) => {
      if (event.event_type === "SNAPSHOT_UPDATED") void refreshFleet();
      if (event.event_type === "PLAN_TRANSITIONED") void refreshPlans();
    },
    onStatus: (ok) => {
      connected = ok;
      if (!ok) renderBanner(bannerHost, "event stream down — polling every 10 s");
    },
  });
  void stream.run();
  setInterval(() => {
    if (!connected) {
      void refreshFleet();
      void refreshPlans();
    }
  }, POLL_FALLBACK_MS);

  await api.meta(); // bootstrap check; throws into the banner if unreachable
  await refreshFleet();
  await refreshPlans();
}

function operatorName(): string {
  return localStorage.getItem("apdt_operator") ?? "operator";
}

void start();
