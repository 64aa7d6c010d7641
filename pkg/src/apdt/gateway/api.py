"""Operator-facing HTTP API over the wired service."""

from __future__ import annotations

from typing import Optional

from ..errors import SchemaViolation, UnknownAp
from ..httpkit import EventStream, JsonHttpServer, Request
from ..model import BandKind, Metric
from ..sim.scenario import scenario_from_json
from ..timeutil import from_iso
from .app import ApdtService


def _parse_ts(raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return from_iso(raw)
    except ValueError:
        raise SchemaViolation(f"bad timestamp {raw!r}") from None


def _parse_band(raw: Optional[str]) -> Optional[BandKind]:
    if raw is None or raw == "":
        return None
    try:
        return BandKind(raw.upper())
    except ValueError:
        raise SchemaViolation(f"bad band {raw!r} (GHZ24|GHZ5)") from None


def serve_api(
    service: ApdtService,
    host: str = "127.0.0.1",
    port: int = 8080,
    auth_token: Optional[str] = None,
) -> JsonHttpServer:
    """Register all routes and return the (unstarted) server."""
    server = JsonHttpServer(host, port, auth_token=auth_token)

    def get_meta(req: Request):
        return service.meta()

    def get_snapshot(req: Request):
        at = req.q("at")
        snap = service.store.get_snapshot(_parse_ts(at) if at else None)
        return snap.to_json()

    def get_aps(req: Request):
        return [a.to_json() for a in service.store.known_aps()]

    def get_series(req: Request):
        ap_id = req.params["ap_id"].upper()
        metric_raw = req.q("metric", "BYTE_RATE")
        try:
            metric = Metric(metric_raw.upper())
        except ValueError:
            raise SchemaViolation(f"bad metric {metric_raw!r}") from None
        head = service.store.get_snapshot()
        t1 = _parse_ts(req.q("to")) if req.q("to") else head.taken_at + 1
        t0 = _parse_ts(req.q("from")) if req.q("from") else t1 - 3_600_000
        bin_seconds = int(req.q("bin", "10"))
        band = _parse_band(req.q("band"))
        series = service.store.query_series(ap_id, metric, (t0, t1), bin_seconds, band=band)
        return series.to_json()

    def get_anomalies(req: Request):
        return [a.to_json() for a in service.anomalies()]

    def post_scenarios(req: Request):
        scenario = scenario_from_json(req.json())
        scenario_id = service.submit_scenario(scenario)
        return 202, {"scenario_id": scenario_id}

    def get_scenario_result(req: Request):
        entry = service.scenario_result(req.params["scenario_id"])
        if entry["status"] == "running":
            return 202, {"status": "running"}
        if entry["status"] == "failed":
            return 500, {"error": "simulation_failed", "detail": entry["error"]}
        return {"status": "done", "report": entry["report"].to_json()}

    def get_forecasts(req: Request):
        ap_id = (req.q("ap") or "").upper()
        if not ap_id:
            raise SchemaViolation("query parameter ap is required")
        if not any(a.ap_id == ap_id for a in service.store.known_aps()):
            raise UnknownAp(ap_id)
        horizon = int(req.q("horizon", str(service.config.default_horizon_hours)))
        band = _parse_band(req.q("band"))
        model, points = service.forecast(ap_id, horizon, band)
        return {
            "ap_id": ap_id,
            "band": band.value if band else None,
            "model_version": model.model_version,
            "training_r2": model.training_r2,
            "points": [{"timestamp": ts, "predicted_bps": v} for ts, v in points],
        }

    def get_alerts(req: Request):
        alerts = service.compute_alerts()
        return [a.to_json() for a in alerts]

    def post_plans(req: Request):
        body = req.json()
        alert_id = body.get("alert_id")
        if not alert_id:
            raise SchemaViolation("body needs alert_id")
        plan = service.create_plan(alert_id)
        return 201, plan.to_json()

    def get_plans(req: Request):
        return [p.to_json() for p in service.plans.all()]

    def get_plan(req: Request):
        return service.plans.get(req.params["plan_id"]).to_json()

    def post_plan_simulate(req: Request):
        return service.simulate_plan(req.params["plan_id"]).to_json()

    def post_plan_approve(req: Request):
        body = req.json()
        plan = service.approve_plan(
            req.params["plan_id"],
            actor=str(body.get("actor", "operator")),
            decision=str(body.get("decision", "approve")),
            force=bool(body.get("force", False)),
        )
        return plan.to_json()

    def post_plan_apply(req: Request):
        return service.apply_plan(req.params["plan_id"]).to_json()

    def post_plan_verify(req: Request):
        body = req.json()
        window = int(body.get("window_seconds", 120))
        return service.verify_plan(req.params["plan_id"], window).to_json()

    def get_events(req: Request):
        raw = req.headers.get("Last-Event-ID") or req.q("last_event_id") or "0"
        try:
            last_id = int(raw)
        except ValueError:
            last_id = 0
        return EventStream(service.events.sse_stream(last_id))

    server.route("GET", "/api/v1/meta", get_meta)
    server.route("GET", "/api/v1/snapshot", get_snapshot)
    server.route("GET", "/api/v1/aps", get_aps)
    server.route("GET", "/api/v1/aps/{ap_id}/series", get_series)
    server.route("GET", "/api/v1/anomalies", get_anomalies)
    server.route("POST", "/api/v1/scenarios", post_scenarios)
    server.route("GET", "/api/v1/scenarios/{scenario_id}/result", get_scenario_result)
    server.route("GET", "/api/v1/forecasts", get_forecasts)
    server.route("GET", "/api/v1/alerts", get_alerts)
    server.route("POST", "/api/v1/plans", post_plans)
    server.route("GET", "/api/v1/plans", get_plans)
    server.route("GET", "/api/v1/plans/{plan_id}", get_plan)
    server.route("POST", "/api/v1/plans/{plan_id}/simulate", post_plan_simulate)
    server.route("POST", "/api/v1/plans/{plan_id}/approve", post_plan_approve)
    server.route("POST", "/api/v1/plans/{plan_id}/apply", post_plan_apply)
    server.route("POST", "/api/v1/plans/{plan_id}/verify", post_plan_verify)
    server.route("GET", "/api/v1/events", get_events)
    return server
