"""Command-line surface: offline subcommands and exit codes."""

import json
import os

import pytest

from apdt.gateway.cli import run_cli

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")
SCENARIO = os.path.join(FIXTURES, "table1_scenario.json")
TRACE = os.path.join(FIXTURES, "table1_real.csv")
LOG = os.path.join(FIXTURES, "two_week.jsonl")


def test_simulate_json_output(capsys):
    rc = run_cli(["--json", "simulate", "--scenario", SCENARIO])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert [s["mean_latency_ms"] for s in report["per_interval"]] == [9.4] * 6


def test_simulate_engine_override(capsys):
    rc = run_cli(["--json", "simulate", "--scenario", SCENARIO, "--engine", "event"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["engine"] == "EVENT"


def test_simulate_then_compare_prints_mae(tmp_path, capsys):
    out = str(tmp_path / "report.json")
    assert run_cli(["simulate", "--scenario", SCENARIO, "--out", out]) == 0
    capsys.readouterr()
    rc = run_cli(["compare", "--report", out, "--trace", TRACE])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "mae_ms=1.49" in printed


def test_compare_json(tmp_path, capsys):
    out = str(tmp_path / "report.json")
    run_cli(["simulate", "--scenario", SCENARIO, "--out", out])
    capsys.readouterr()
    rc = run_cli(["--json", "compare", "--report", out, "--trace", TRACE])
    assert rc == 0
    fid = json.loads(capsys.readouterr().out)
    assert fid["mae_ms"] == pytest.approx(1.49, abs=0.005)
    assert fid["max_fidelity"] == pytest.approx(0.9895, abs=0.0005)


def test_replay_summary(capsys):
    rc = run_cli(["replay", "--log", LOG])
    assert rc == 0
    assert "version 336" in capsys.readouterr().out


def test_missing_scenario_file_is_domain_error(capsys):
    rc = run_cli(["simulate", "--scenario", "/nonexistent.json"])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_corrupt_log_is_domain_error(tmp_path, capsys):
    bad = str(tmp_path / "bad.jsonl")
    with open(bad, "w") as fh:
        fh.write('{"apdt_log_version":1}\n{"truncated...\n')
    rc = run_cli(["replay", "--log", bad])
    assert rc == 1
    assert "line 2" in capsys.readouterr().err


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as err:
        run_cli(["simulate"])  # missing required --scenario
    assert err.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as err:
        run_cli(["frobnicate"])
    assert err.value.code == 2


def test_forecast_unknown_ap_against_gateway(controller_http, capsys):
    from apdt.gateway import ApdtService, ServiceConfig, serve_api

    facade, cfg = controller_http
    service = ApdtService(ServiceConfig(
        controller_url=facade.base_url, controller_token=cfg.auth_token,
    ))
    facade.step_and_publish()
    service.poller.tick()
    server = serve_api(service, port=0)
    server.start()
    try:
        rc = run_cli(["--api", server.base_url, "forecast", "--ap", "AC:DE:48:00:00:99"])
        assert rc == 1
        assert "unknown_ap" in capsys.readouterr().err
    finally:
        server.stop()


def test_status_against_gateway(controller_http, capsys):
    from apdt.gateway import ApdtService, ServiceConfig, serve_api

    facade, cfg = controller_http
    service = ApdtService(ServiceConfig(
        controller_url=facade.base_url, controller_token=cfg.auth_token,
    ))
    for _ in range(2):
        facade.step_and_publish()
        service.poller.tick()
    server = serve_api(service, port=0)
    server.start()
    try:
        rc = run_cli(["--api", server.base_url, "status"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "store v2" in out
        assert "3 APs" in out
    finally:
        server.stop()
