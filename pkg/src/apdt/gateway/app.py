"""Service wiring: store, poller, forecaster, simulator, actuator, events.

The gateway owns no domain state of its own; it funnels reads to the
twin's published snapshots and mutations into each module's single-writer
path.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from ..actuate.engine import (
    PlanRegistry,
    apply_plan,
    approve,
    propose_plan,
    validate_plan,
    verify_or_rollback,
)
from ..actuate.policy import OffloadPolicy
from ..controller import ControllerClient
from ..errors import InsufficientHistory, NotFound, UnknownAp
from ..forecast.features import build_features
from ..forecast.model import ForecastModel, fit_ols
from ..forecast.predict import CongestionAlert, ThresholdPolicy, detect_congestion, predict
from ..ingest.poller import Poller, PollerConfig
from ..model import BandKind, Metric, TelemetrySample
from ..sim.engine import run_simulation
from ..sim.types import Scenario, SimulationReport
from ..timeutil import MS_PER_HOUR
from ..twin.anomalies import AnomalyPolicy, detect_anomalies
from ..twin.logio import LogWriter
from ..twin.store import TwinStore
from .events import EventBus

FORECAST_WINDOW_DAYS = 14


@dataclass
class ServiceConfig:
    controller_url: Optional[str] = None
    controller_token: Optional[str] = None
    poll_interval_seconds: float = 10.0
    log_path: Optional[str] = None
    plans_dir: Optional[str] = None
    auto_approve: bool = False
    threshold: ThresholdPolicy = field(default_factory=ThresholdPolicy.percentile_policy)
    offload: OffloadPolicy = field(default_factory=OffloadPolicy)
    anomaly: AnomalyPolicy = field(default_factory=AnomalyPolicy)
    default_horizon_hours: int = 4


class ApdtService:
    def __init__(self, config: ServiceConfig = ServiceConfig(), store: Optional[TwinStore] = None):
        self.config = config
        writer = LogWriter(config.log_path) if config.log_path else None
        self.store = store if store is not None else TwinStore(log_writer=writer)
        self.events = EventBus()
        self.plans = PlanRegistry(config.plans_dir, on_transition=self._plan_event)
        self.alerts: dict[str, CongestionAlert] = {}
        self._alerts_published: set[str] = set()
        self._models: dict[tuple[str, Optional[BandKind]], tuple[int, ForecastModel]] = {}
        self._scenarios: dict[str, dict] = {}
        self._lock = threading.Lock()

        self.controller: Optional[ControllerClient] = None
        self.poller: Optional[Poller] = None
        if config.controller_url:
            self.controller = ControllerClient(
                config.controller_url, auth_token=config.controller_token
            )
            self.poller = Poller(
                PollerConfig(
                    base_url=config.controller_url,
                    auth_token=config.controller_token,
                    interval_seconds=config.poll_interval_seconds,
                ),
                self.store,
                on_sample=self._sample_event,
            )

    # -- event hooks -------------------------------------------------------

    def _sample_event(self, sample: TelemetrySample, version: int) -> None:
        self.events.publish(
            "SNAPSHOT_UPDATED",
            {"version": version, "taken_at": sample.taken_at,
             "aps": len(sample.aps), "clients": len(sample.clients)},
        )

    def _plan_event(self, plan) -> None:
        self.events.publish(
            "PLAN_TRANSITIONED",
            {"plan_id": plan.plan_id, "state": plan.state,
             "audit_entries": len(plan.audit)},
        )

    # -- forecasting -------------------------------------------------------

    def hourly_series(self, ap_id: str, band: Optional[BandKind] = None):
        head = self.store.get_snapshot()
        window = (head.taken_at - FORECAST_WINDOW_DAYS * 24 * MS_PER_HOUR, head.taken_at + 1)
        return self.store.query_series(ap_id, Metric.BYTE_RATE, window, 3600, band=band)

    def model_for(self, ap_id: str, band: Optional[BandKind] = None) -> ForecastModel:
        series = self.hourly_series(ap_id, band)
        if not series.points:
            raise InsufficientHistory(f"no byte-rate history for {ap_id}")
        key = (ap_id, band)
        tail = series.points[-1][0]
        cached = self._models.get(key)
        if cached and cached[0] == tail:
            return cached[1]
        model = fit_ols(build_features(series), ap_id=ap_id)
        self._models[key] = (tail, model)
        return model

    def forecast(self, ap_id: str, horizon_hours: int, band: Optional[BandKind] = None):
        model = self.model_for(ap_id, band)
        series = self.hourly_series(ap_id, band)
        return model, predict(model, horizon_hours, series)

    def compute_alerts(self, horizon_hours: Optional[int] = None) -> list[CongestionAlert]:
        """Refresh congestion alerts for every known (ap, band)."""
        horizon = horizon_hours or self.config.default_horizon_hours
        found: list[CongestionAlert] = []
        for ap in self.store.known_aps():
            for radio in ap.radios:
                try:
                    model, points = self.forecast(ap.ap_id, horizon, radio.band)
                except (InsufficientHistory, NotFound):
                    continue
                history = self.hourly_series(ap.ap_id, radio.band)
                found.extend(
                    detect_congestion(
                        points,
                        self.config.threshold,
                        ap_id=ap.ap_id,
                        band=radio.band,
                        history=history,
                        model_version=model.model_version,
                    )
                )
        with self._lock:
            for alert in found:
                self.alerts[alert.alert_id] = alert
                if alert.alert_id not in self._alerts_published:
                    self._alerts_published.add(alert.alert_id)
                    self.events.publish("ALERT_RAISED", alert.to_json())
        return found

    def get_alert(self, alert_id: str) -> CongestionAlert:
        alert = self.alerts.get(alert_id)
        if alert is None:
            raise NotFound(f"alert {alert_id}")
        return alert

    # -- simulation --------------------------------------------------------

    def submit_scenario(self, scenario: Scenario) -> str:
        scenario_id = scenario.scenario_id or f"scn-{uuid.uuid4().hex[:8]}"
        with self._lock:
            self._scenarios[scenario_id] = {"status": "running", "report": None}

        def run():
            try:
                report = run_simulation(scenario)
                with self._lock:
                    self._scenarios[scenario_id] = {"status": "done", "report": report}
                self.events.publish(
                    "SIM_COMPLETED", {"scenario_id": scenario_id, "engine": scenario.engine.value}
                )
            except Exception as e:  # surfaced on result fetch
                with self._lock:
                    self._scenarios[scenario_id] = {"status": "failed", "error": str(e)}

        threading.Thread(target=run, daemon=True).start()
        return scenario_id

    def scenario_result(self, scenario_id: str) -> dict:
        with self._lock:
            entry = self._scenarios.get(scenario_id)
        if entry is None:
            raise NotFound(f"scenario {scenario_id}")
        return entry

    # -- plan lifecycle ----------------------------------------------------

    def create_plan(self, alert_id: str):
        alert = self.get_alert(alert_id)
        snapshot = self.store.get_snapshot()
        plan = propose_plan(alert, snapshot, self.config.offload)
        return self.plans.add(plan)

    def simulate_plan(self, plan_id: str):
        snapshot = self.store.get_snapshot()
        plan = self.plans.run(plan_id, validate_plan, snapshot)
        if self.config.auto_approve and plan.state == "SIMULATED":
            plan = self.plans.run(plan_id, approve, "auto-approve", "approve")
        return plan

    def approve_plan(self, plan_id: str, actor: str, decision: str = "approve", force: bool = False):
        return self.plans.run(plan_id, approve, actor, decision, force)

    def apply_plan(self, plan_id: str):
        if self.controller is None:
            raise NotFound("no controller configured")
        return self.plans.run(plan_id, apply_plan, self.controller)

    def verify_plan(self, plan_id: str, window_seconds: int = 120):
        return self.plans.run(
            plan_id, verify_or_rollback, self.store, self.controller, window_seconds
        )

    # -- misc ---------------------------------------------------------------

    def anomalies(self):
        return detect_anomalies(self.store, self.config.anomaly)

    def meta(self) -> dict:
        counters = dict(self.store.counters)
        if self.poller:
            counters.update(self.poller.counters)
        return {
            "service": "apdt",
            "api_version": "v1",
            "store_version": self.store.version,
            "controller_url": self.config.controller_url,
            "auto_approve": self.config.auto_approve,
            "counters": counters,
            "last_event_sequence": self.events.last_sequence,
        }

    def start_poller(self) -> None:
        if self.poller:
            self.poller.start()

    def stop(self) -> None:
        if self.poller:
            self.poller.stop()
