"""Scenario building and override materialization."""

import pytest

from apdt.errors import OverrideConflict
from apdt.model import BandKind
from apdt.sim import (
    EngineKind,
    add_clients_override,
    build_scenario,
    remove_clients_override,
    set_airtime_override,
    steer_override,
)

from conftest import AP1, ap, client, radio


def _roster(n24=4, n5=2, capable24=2):
    clients = []
    for i in range(n24):
        clients.append(client(
            mac=f"CA:FE:00:00:01:{i:02X}", band=BandKind.GHZ24,
            rate=100_000 + i * 10_000, capable=i < capable24,
        ))
    for i in range(n5):
        clients.append(client(
            mac=f"CA:FE:00:00:02:{i:02X}", band=BandKind.GHZ5,
            rate=50_000, capable=True,
        ))
    aps = [ap(radios=(
        radio(BandKind.GHZ24, clients=n24),
        radio(BandKind.GHZ5, channel=36, clients=n5),
    ))]
    return aps, clients


def _medium(scenario, band):
    return next(m for m in scenario.media if m.band is band)


def test_empty_overrides_identity():
    aps, clients = _roster()
    sc = build_scenario((aps, clients), ())
    assert _medium(sc, BandKind.GHZ24).n_clients == 4
    assert _medium(sc, BandKind.GHZ5).n_clients == 2
    assert sorted(_medium(sc, BandKind.GHZ24).client_rates_bps) == sorted(
        c.byte_rate_bps for c in clients if c.band is BandKind.GHZ24
    )


def test_add_clients():
    aps, clients = _roster()
    sc = build_scenario((aps, clients), (add_clients_override(AP1, BandKind.GHZ24, 5, 100_000),))
    assert _medium(sc, BandKind.GHZ24).n_clients == 9


def test_steer_moves_top_rate_capable_clients():
    aps, clients = _roster(n24=4, capable24=2)
    sc = build_scenario((aps, clients), (steer_override(AP1, 2, BandKind.GHZ24, BandKind.GHZ5),))
    assert _medium(sc, BandKind.GHZ24).n_clients == 2
    assert _medium(sc, BandKind.GHZ5).n_clients == 4


def test_steer_more_than_capable_conflicts():
    aps, clients = _roster(n24=4, capable24=2)
    with pytest.raises(OverrideConflict) as err:
        build_scenario((aps, clients), (steer_override(AP1, 3, BandKind.GHZ24, BandKind.GHZ5),))
    assert err.value.index == 0


def test_remove_too_many_conflicts_with_index():
    aps, clients = _roster()
    overrides = (
        add_clients_override(AP1, BandKind.GHZ24, 1, 1000),
        remove_clients_override(AP1, 99),
    )
    with pytest.raises(OverrideConflict) as err:
        build_scenario((aps, clients), overrides)
    assert err.value.index == 1


def test_overrides_apply_in_order():
    aps, clients = _roster(n24=1, n5=0, capable24=0)
    overrides = (
        add_clients_override(AP1, BandKind.GHZ24, 3, 1000),  # now 4 on GHZ24
        remove_clients_override(AP1, 4),                      # legal only after add
    )
    sc = build_scenario((aps, clients), overrides)
    assert _medium(sc, BandKind.GHZ24).n_clients == 0


def test_set_airtime_and_bounds():
    aps, clients = _roster()
    sc = build_scenario((aps, clients), (set_airtime_override(AP1, BandKind.GHZ24, 0.5),))
    assert _medium(sc, BandKind.GHZ24).airtime_external == 0.5
    with pytest.raises(OverrideConflict):
        build_scenario((aps, clients), (set_airtime_override(AP1, BandKind.GHZ24, 0.99),))


def test_duration_must_tile_interval():
    from apdt.errors import SchemaViolation

    aps, clients = _roster()
    with pytest.raises(SchemaViolation):
        build_scenario((aps, clients), (), duration_seconds=65, report_interval_seconds=10)


def test_materialization_deterministic():
    aps, clients = _roster()
    overrides = (steer_override(AP1, 1, BandKind.GHZ24, BandKind.GHZ5),)
    a = build_scenario((aps, clients), overrides, engine=EngineKind.EVENT, seed=1)
    b = build_scenario((aps, clients), overrides, engine=EngineKind.EVENT, seed=1)
    assert a.media == b.media
