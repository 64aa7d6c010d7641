"""Controller payload parsing and the polling cycle."""

import json
import os

import pytest

from apdt.errors import AuthRejected, ControllerUnreachable, ParseError
from apdt.ingest import Poller, PollerConfig, parse_ap_payload, parse_client_payload, poll_once
from apdt.model import BandKind
from apdt.twin import TwinStore

FIXTURE = os.path.join(os.path.dirname(__file__), "..", "fixtures", "aps_snapshot.json")


def _radio(**kw):
    d = {"band": "GHZ24", "channel": 6, "airtime": 7.5, "noise_floor_dbm": -95.0,
         "client_count": 0, "rx_rate_bps": 1000, "tx_rate_bps": 500}
    d.update(kw)
    return d


def _ap(**kw):
    d = {"ap_id": "ac:de:48:00:00:00", "name": "ap-1", "location_tag": "z",
         "last_seen": "2025-03-03T00:00:00.000Z", "radios": [_radio()]}
    d.update(kw)
    return d


def test_airtime_percent_to_fraction():
    aps = parse_ap_payload(json.dumps([_ap()]))
    assert aps[0].radios[0].airtime_utilization == 0.075


def test_mac_uppercased():
    aps = parse_ap_payload(json.dumps([_ap()]))
    assert aps[0].ap_id == "AC:DE:48:00:00:00"


def test_missing_band_reports_json_path():
    bad = _ap()
    del bad["radios"][0]["band"]
    with pytest.raises(ParseError) as err:
        parse_ap_payload(json.dumps([bad]))
    assert err.value.json_path == "$[0].radios[0].band"


def test_unknown_fields_ignored():
    rec = _ap()
    rec["firmware"] = "6.1.0"
    rec["radios"][0]["txpower_dbm"] = 20
    aps = parse_ap_payload(json.dumps([rec]))
    assert aps[0].radios[0].rx_rate_bps == 1000


def test_parser_never_crashes_on_garbage():
    for garbage in (b"\xff\xfe", "{", "[{}]", '[{"ap_id": 5}]', "null", '"x"'):
        with pytest.raises(ParseError):
            parse_ap_payload(garbage)


def test_client_payload_parses_and_binds_ap():
    raw = json.dumps([{
        "client_mac": "ca:fe:00:00:00:01", "band": "GHZ5", "snr_db": 31.5,
        "byte_rate_bps": 120000, "connected_since": "2025-03-03T00:00:00.000Z",
        "capable_5ghz": True,
    }])
    clients = parse_client_payload(raw, "ac:de:48:00:00:00")
    assert clients[0].ap_id == "AC:DE:48:00:00:00"
    assert clients[0].band is BandKind.GHZ5
    assert clients[0].byte_rate_bps == 120000


def test_fixture_payload_field_exact():
    with open(FIXTURE, encoding="utf-8") as fh:
        raw = fh.read()
    aps = parse_ap_payload(raw)
    assert len(aps) == 3
    assert [a.ap_id for a in aps] == [
        "AC:DE:48:00:00:00", "AC:DE:48:00:00:01", "AC:DE:48:00:00:02",
    ]
    for a in aps:
        assert {r.band for r in a.radios} == {BandKind.GHZ24, BandKind.GHZ5}
        assert all(0.0 <= r.airtime_utilization <= 0.95 for r in a.radios)
        assert sum(r.client_count for r in a.radios) == 20


def test_poll_once_against_emulator(controller_http):
    facade, cfg = controller_http
    pc = PollerConfig(base_url=facade.base_url, auth_token=cfg.auth_token)
    sample = poll_once(pc)
    assert len(sample.aps) == 3
    assert len(sample.clients) == 60
    assert sample.poll_latency_ms >= 0.0
    assert sample.degraded_aps == frozenset()
    sample.validate()


def test_poll_zero_clients(controller_http):
    facade, cfg = controller_http
    facade.world.clients.clear()
    facade.publish()
    pc = PollerConfig(base_url=facade.base_url, auth_token=cfg.auth_token)
    sample = poll_once(pc)
    assert len(sample.aps) == 3
    assert sample.clients == ()
    for ap in sample.aps:
        assert all(r.client_count == 0 for r in ap.radios)


def test_bad_token_raises_auth_rejected(controller_http):
    facade, _ = controller_http
    pc = PollerConfig(base_url=facade.base_url, auth_token="wrong-token")
    with pytest.raises(AuthRejected):
        poll_once(pc)


def test_unreachable_controller():
    pc = PollerConfig(base_url="http://127.0.0.1:9", auth_token="x",
                      max_retries=0, timeout_ms=200, interval_seconds=1)
    with pytest.raises(ControllerUnreachable):
        poll_once(pc)


def test_poller_ticks_feed_store(controller_http):
    facade, cfg = controller_http
    store = TwinStore()
    poller = Poller(
        PollerConfig(base_url=facade.base_url, auth_token=cfg.auth_token), store
    )
    for _ in range(6):
        facade.step_and_publish()
        assert poller.tick() is not None
    assert store.version == 6
    assert poller.counters["polls_ok"] == 6


def test_poller_survives_outage(controller_http):
    facade, cfg = controller_http
    store = TwinStore()
    good = PollerConfig(base_url=facade.base_url, auth_token=cfg.auth_token)
    bad = PollerConfig(base_url="http://127.0.0.1:9", auth_token=cfg.auth_token,
                       max_retries=0, timeout_ms=200, interval_seconds=1)
    poller = Poller(good, store)
    for tick in range(6):
        facade.step_and_publish()
        if tick in (2, 3):  # controller "down" for two ticks
            down = Poller(bad, store)
            down.tick()
            poller.counters["polls_failed"] += down.counters["polls_failed"]
        else:
            poller.tick()
    assert store.version == 4
    assert poller.counters["polls_failed"] == 2


def test_zero_interval_rejected():
    from apdt.errors import ConfigError

    with pytest.raises(ConfigError):
        PollerConfig(base_url="http://x", interval_seconds=0).validate()


def test_timeout_must_fit_interval():
    from apdt.errors import ConfigError

    with pytest.raises(ConfigError):
        PollerConfig(base_url="http://x", interval_seconds=1, timeout_ms=2000).validate()
