"""Command-line tool: every operator workflow, online (API) or offline."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Optional

import requests

from ..errors import ApdtError
from ..sim.engine import run_simulation
from ..sim.fidelity import compare_with_trace
from ..sim.io import load_report, load_trace, save_report
from ..sim.scenario import load_scenario
from ..sim.types import EngineKind
from ..timeutil import to_iso
from ..twin.anomalies import detect_anomalies
from ..twin.logio import replay_log

DEFAULT_API = "http://127.0.0.1:8080"


class CliError(Exception):
    pass


class Api:
    def __init__(self, base_url: str, token: Optional[str] = None):
        self.base = base_url.rstrip("/")
        self.session = requests.Session()
        if token:
            self.session.headers["Authorization"] = f"Bearer {token}"

    def call(self, method: str, path: str, body: Optional[dict] = None) -> object:
        try:
            resp = self.session.request(method, f"{self.base}/api/v1{path}", json=body, timeout=30)
        except requests.RequestException as e:
            raise CliError(f"API unreachable at {self.base}: {e}") from e
        if resp.status_code >= 400:
            try:
                err = resp.json()
                raise CliError(f"{err.get('error', resp.status_code)}: {err.get('detail', '')}")
            except ValueError:
                raise CliError(f"HTTP {resp.status_code}: {resp.text[:200]}") from None
        return resp.json()


def _emit(args, obj, human: str = "") -> None:
    if args.json:
        print(json.dumps(obj, indent=2, default=_default))
    else:
        print(human if human else json.dumps(obj, indent=2, default=_default))


def _default(o):
    if dataclasses.is_dataclass(o):
        return dataclasses.asdict(o)
    return str(o)


# -- online commands -----------------------------------------------------


def cmd_status(args) -> int:
    api = Api(args.api, args.token)
    meta = api.call("GET", "/meta")
    try:
        snap = api.call("GET", "/snapshot")
        summary = (
            f"store v{snap['version']} @ {snap['taken_at']}: "
            f"{len(snap['aps'])} APs, {len(snap['clients'])} clients"
        )
    except CliError:
        snap = None
        summary = "store empty"
    _emit(args, {"meta": meta, "snapshot_summary": summary},
          f"{summary}\ncounters: {meta['counters']}")
    return 0


def cmd_snapshot(args) -> int:
    api = Api(args.api, args.token)
    path = f"/snapshot?at={args.at}" if args.at else "/snapshot"
    snap = api.call("GET", path)
    _emit(args, snap)
    return 0


def cmd_series(args) -> int:
    api = Api(args.api, args.token)
    q = f"/aps/{args.ap}/series?metric={args.metric}&bin={args.bin}"
    if getattr(args, "from"):
        q += f"&from={getattr(args, 'from')}"
    if args.to:
        q += f"&to={args.to}"
    if args.band:
        q += f"&band={args.band}"
    series = api.call("GET", q)
    lines = [f"{p[0]} {p[1]}" for p in series["points"]]
    _emit(args, series, "\n".join(lines) if lines else "(empty series)")
    return 0


def cmd_forecast(args) -> int:
    api = Api(args.api, args.token)
    q = f"/forecasts?ap={args.ap}&horizon={args.horizon}"
    if args.band:
        q += f"&band={args.band}"
    fc = api.call("GET", q)
    lines = [f"{to_iso(p['timestamp'])} {p['predicted_bps']:.0f} B/s" for p in fc["points"]]
    _emit(args, fc, f"model {fc['model_version']} r2={fc['training_r2']:.4f}\n" + "\n".join(lines))
    return 0


def cmd_alerts(args) -> int:
    api = Api(args.api, args.token)
    alerts = api.call("GET", "/alerts")
    lines = [
        f"{a['alert_id']} {a['ap_id']}/{a.get('band') or 'AP'} @ {a['predicted_for']}: "
        f"{a['predicted_bps']:.0f} > {a['threshold_bps']:.0f} B/s"
        for a in alerts
    ]
    _emit(args, alerts, "\n".join(lines) if lines else "no alerts")
    return 0


def cmd_recommend(args) -> int:
    api = Api(args.api, args.token)
    plan = api.call("POST", "/plans", {"alert_id": args.alert})
    _emit(args, plan, f"plan {plan['plan_id']} [{plan['state']}] with {len(plan['moves'])} moves")
    return 0


def cmd_approve(args) -> int:
    api = Api(args.api, args.token)
    plan_id = args.plan
    plan = api.call("GET", f"/plans/{plan_id}")
    if plan["state"] == "PROPOSED":
        plan = api.call("POST", f"/plans/{plan_id}/simulate")
    body = {"actor": args.actor, "decision": "reject" if args.reject else "approve",
            "force": args.force}
    plan = api.call("POST", f"/plans/{plan_id}/approve", body)
    ev = plan["evidence"]
    _emit(args, plan,
          f"plan {plan_id} -> {plan['state']} "
          f"(pre {ev['pre_latency_ms']} ms, post {ev['post_latency_ms']} ms)")
    return 0


def cmd_apply(args) -> int:
    api = Api(args.api, args.token)
    plan = api.call("POST", f"/plans/{args.plan}/apply")
    ok = sum(1 for o in plan["outcomes"] if o["accepted"])
    _emit(args, plan, f"plan {args.plan} -> {plan['state']}, {ok}/{len(plan['outcomes'])} moves ok")
    return 0


# -- offline commands ----------------------------------------------------


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.engine:
        scenario = dataclasses.replace(scenario, engine=EngineKind(args.engine.upper()))
    report = run_simulation(scenario)
    if args.out:
        save_report(report, args.out)
    if args.json:
        print(report.to_json_text())
    else:
        print(f"scenario {report.scenario_id} engine={report.engine.value}"
              + (" UNSTABLE" if report.unstable else ""))
        print("t_seconds,mean_latency_ms,p95_latency_ms,offered_bps,served_bps")
        for s in report.per_interval:
            print(f"{s.t_seconds},{s.mean_latency_ms},{s.p95_latency_ms},"
                  f"{s.offered_bps},{s.served_bps}")
    return 0


def cmd_compare(args) -> int:
    report = load_report(args.report)
    trace = load_trace(args.trace)
    fid = compare_with_trace(report, trace)
    if args.json:
        print(json.dumps(fid.to_json(), indent=2))
    else:
        print(f"mae_ms={fid.mae_ms:.2f}")
        print(f"mean_fidelity={fid.mean_fidelity:.4f} max_fidelity={fid.max_fidelity:.4f}")
        for t, sim, real in fid.pairs:
            print(f"  t={t}s sim={sim} real={real}")
    return 0


def cmd_replay(args) -> int:
    store = replay_log(args.log)
    snap = store.get_snapshot()
    anomalies = detect_anomalies(store)
    out = {
        "final_version": snap.version,
        "taken_at": to_iso(snap.taken_at),
        "aps": len(snap.aps),
        "clients": len(snap.clients),
        "anomalies": [a.to_json() for a in anomalies],
    }
    _emit(args, out,
          f"replayed to version {snap.version} @ {to_iso(snap.taken_at)} "
          f"({len(snap.aps)} APs, {len(snap.clients)} clients, {len(anomalies)} anomalies)")
    return 0


def cmd_emulate(args) -> int:
    from ..emulator.api import ControllerFacade, EmulatorService
    from ..emulator.config import load_config
    from ..emulator.world import EmulatedWorld, EmulatorConfig

    cfg = load_config(args.config) if args.config else EmulatorConfig()
    world = EmulatedWorld(cfg)
    facade = ControllerFacade(world, host=cfg.bind_host, port=cfg.bind_port)
    service = EmulatorService(facade)
    service.start()
    print(f"emulator controller API on {facade.base_url} (token: {cfg.auth_token})")
    print(f"{cfg.ap_count} APs, roster {cfg.roster}, x{cfg.time_compression:.0f} time compression")
    try:
        import time as _time

        while True:
            _time.sleep(3600)
    except KeyboardInterrupt:
        service.stop()
    return 0


def cmd_serve(args) -> int:
    from .api import serve_api
    from .app import ApdtService, ServiceConfig

    bind = args.bind or os.environ.get("APDT_BIND_ADDR", "127.0.0.1:8080")
    host, _, port = bind.partition(":")
    config = ServiceConfig(
        controller_url=args.controller or os.environ.get("APDT_CONTROLLER_URL"),
        controller_token=args.controller_token or os.environ.get("APDT_CONTROLLER_TOKEN"),
        poll_interval_seconds=float(
            args.poll_interval or os.environ.get("APDT_POLL_INTERVAL_S", "10")
        ),
        log_path=args.log,
        plans_dir=args.plans_dir,
        auto_approve=args.auto_approve,
    )
    service = ApdtService(config)
    server = serve_api(
        service, host or "127.0.0.1", int(port or 8080),
        auth_token=args.token or os.environ.get("APDT_API_TOKEN"),
    )
    service.start_poller()
    print(f"apdt gateway on {server.base_url}"
          + (f", polling {config.controller_url}" if config.controller_url else " (no controller)"))
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        service.stop()
        server.stop()
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apdt", description="Wi-Fi access-point digital twin")
    parser.add_argument("--api", default=os.environ.get("APDT_API_URL", DEFAULT_API),
                        help="gateway base URL")
    parser.add_argument("--token", default=os.environ.get("APDT_API_TOKEN"),
                        help="gateway bearer token")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("status", help="service and store summary").set_defaults(fn=cmd_status)

    p = sub.add_parser("snapshot", help="twin snapshot (latest or historical)")
    p.add_argument("--at", help="ISO timestamp or epoch ms")
    p.set_defaults(fn=cmd_snapshot)

    p = sub.add_parser("series", help="metric series for one AP")
    p.add_argument("--ap", required=True)
    p.add_argument("--metric", default="BYTE_RATE",
                   choices=["BYTE_RATE", "CLIENT_COUNT", "AIRTIME", "LATENCY_MS"])
    p.add_argument("--from", dest="from", default=None)
    p.add_argument("--to", default=None)
    p.add_argument("--bin", type=int, default=10)
    p.add_argument("--band", choices=["GHZ24", "GHZ5"])
    p.set_defaults(fn=cmd_series)

    p = sub.add_parser("simulate", help="run a scenario file offline")
    p.add_argument("--scenario", required=True)
    p.add_argument("--engine", choices=["analytic", "event"])
    p.add_argument("--out", help="write report (.json or .csv)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("compare", help="report vs real trace fidelity")
    p.add_argument("--report", required=True)
    p.add_argument("--trace", required=True)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("forecast", help="predicted byte rate for an AP")
    p.add_argument("--ap", required=True)
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--band", choices=["GHZ24", "GHZ5"])
    p.set_defaults(fn=cmd_forecast)

    sub.add_parser("alerts", help="refresh and list congestion alerts").set_defaults(fn=cmd_alerts)

    p = sub.add_parser("recommend", help="propose a plan from an alert")
    p.add_argument("--alert", required=True)
    p.set_defaults(fn=cmd_recommend)

    p = sub.add_parser("approve", help="simulate (if needed) and approve a plan")
    p.add_argument("--plan", required=True)
    p.add_argument("--actor", default=os.environ.get("USER", "operator"))
    p.add_argument("--reject", action="store_true")
    p.add_argument("--force", action="store_true",
                   help="approve even without simulated improvement (audited)")
    p.set_defaults(fn=cmd_approve)

    p = sub.add_parser("apply", help="apply an approved plan to the network")
    p.add_argument("--plan", required=True)
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("replay", help="rebuild a twin from a telemetry log")
    p.add_argument("--log", required=True)
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("emulate", help="run the synthetic network + controller API")
    p.add_argument("--config", help="emulator config JSON")
    p.set_defaults(fn=cmd_emulate)

    p = sub.add_parser("serve", help="run the gateway API service")
    p.add_argument("--bind", help="host:port (default $APDT_BIND_ADDR or 127.0.0.1:8080)")
    p.add_argument("--controller", help="controller base URL to poll")
    p.add_argument("--controller-token")
    p.add_argument("--poll-interval", type=float)
    p.add_argument("--log", help="telemetry log path (durable apply log)")
    p.add_argument("--plans-dir", help="plan persistence directory")
    p.add_argument("--auto-approve", action="store_true",
                   help="closed-loop test flag: approve improving plans automatically")
    p.set_defaults(fn=cmd_serve)

    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, ApdtError) as e:
        detail = getattr(e, "detail", None) or str(e)
        print(f"error: {detail}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())
