/** Typed gateway client. Every console action goes through these calls. */

import type {
  AlertPayload,
  AnomalyPayload,
  ApiErrorBody,
  MetaPayload,
  PlanPayload,
  ScenarioResultPayload,
  SeriesPayload,
  SnapshotPayload,
} from "./types";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.error}: ${body.detail}`);
    this.code = body.error;
    this.status = status;
  }
}

export interface ApiClientOptions {
  baseUrl: string;
  token?: string;
  fetchImpl?: typeof fetch;
}

export class ApiClient {
  readonly baseUrl: string;
  private readonly token?: string;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ApiClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.token = options.token;
    this.fetchImpl = options.fetchImpl ?? fetch;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        parsed = { error: `http_${response.status}`, detail: response.statusText };
      }
      throw new ApiError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  meta(): Promise<MetaPayload> {
    return this.request("GET", "/meta");
  }

  snapshot(at?: string): Promise<SnapshotPayload> {
    const q = at ? `?at=${encodeURIComponent(at)}` : "";
    return this.request("GET", `/snapshot${q}`);
  }

  series(
    apId: string,
    metric: string,
    opts: { from?: string; to?: string; bin?: number; band?: string } = {},
  ): Promise<SeriesPayload> {
    const params = new URLSearchParams({ metric });
    if (opts.from) params.set("from", opts.from);
    if (opts.to) params.set("to", opts.to);
    if (opts.bin) params.set("bin", String(opts.bin));
    if (opts.band) params.set("band", opts.band);
    return this.request("GET", `/aps/${encodeURIComponent(apId)}/series?${params}`);
  }

  anomalies(): Promise<AnomalyPayload[]> {
    return this.request("GET", "/anomalies");
  }

  alerts(): Promise<AlertPayload[]> {
    return this.request("GET", "/alerts");
  }

  submitScenario(scenario: unknown): Promise<{ scenario_id: string }> {
    return this.request("POST", "/scenarios", scenario);
  }

  scenarioResult(scenarioId: string): Promise<ScenarioResultPayload> {
    return this.request("GET", `/scenarios/${encodeURIComponent(scenarioId)}/result`);
  }

  async pollScenarioResult(
    scenarioId: string,
    { intervalMs = 250, timeoutMs = 30_000 } = {},
  ): Promise<ScenarioResultPayload> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const result = await this.scenarioResult(scenarioId);
      if (result.status === "done") return result;
      if (Date.now() > deadline) throw new Error(`scenario ${scenarioId} still running`);
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }

  plans(): Promise<PlanPayload[]> {
    return this.request("GET", "/plans");
  }

  plan(planId: string): Promise<PlanPayload> {
    return this.request("GET", `/plans/${encodeURIComponent(planId)}`);
  }

  createPlan(alertId: string): Promise<PlanPayload> {
    return this.request("POST", "/plans", { alert_id: alertId });
  }

  simulatePlan(planId: string): Promise<PlanPayload> {
    return this.request("POST", `/plans/${encodeURIComponent(planId)}/simulate`);
  }

  approvePlan(planId: string, actor: string, decision: "approve" | "reject"): Promise<PlanPayload> {
    return this.request("POST", `/plans/${encodeURIComponent(planId)}/approve`, {
      actor,
      decision,
    });
  }

  applyPlan(planId: string): Promise<PlanPayload> {
    return this.request("POST", `/plans/${encodeURIComponent(planId)}/apply`);
  }
}
