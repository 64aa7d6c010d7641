"""Emulated world: determinism, demand model, surges, commands."""

import pytest

from apdt.emulator import (
    ActuationCommand,
    EmulatedWorld,
    EmulatorConfig,
    InjectedSurge,
    WorkloadProfile,
    workload_rate,
)
from apdt.errors import IncapableClient, UnknownClient, UnknownTargetAp
from apdt.model import BandKind
from apdt.timeutil import hour_of_day


def quiet_config(**kw) -> EmulatorConfig:
    profile = kw.pop("profile", WorkloadProfile(noise_cv=0.0))
    return EmulatorConfig(profile=profile, seed=kw.pop("seed", 42), **kw)


def test_same_seed_same_trajectory():
    a = EmulatedWorld(EmulatorConfig(seed=7))
    b = EmulatedWorld(EmulatorConfig(seed=7))
    for _ in range(20):
        a.step()
        b.step()
    assert a.sample().to_log_json() == b.sample().to_log_json()


def test_different_seed_differs():
    a = EmulatedWorld(EmulatorConfig(seed=7))
    b = EmulatedWorld(EmulatorConfig(seed=8))
    a.step()
    b.step()
    assert a.sample().to_log_json() != b.sample().to_log_json()


def test_zero_noise_radio_rate_is_share_weighted_workload():
    world = EmulatedWorld(quiet_config())
    world.step()
    hour = hour_of_day(world.clock_ms)
    rate = workload_rate(hour, world.config.profile)
    for ap in world.aps:
        weights = {
            band: sum(
                c.weight for c in world.clients.values()
                if c.ap_index == ap.index and c.band is band
            )
            for band in (BandKind.GHZ24, BandKind.GHZ5)
        }
        total = sum(weights.values())
        for band in (BandKind.GHZ24, BandKind.GHZ5):
            expected = rate * weights[band] / total
            assert world.radio_byte_rate(ap.index, band) == pytest.approx(expected, rel=1e-9)


def test_injected_surge_scales_rates_exactly_threefold():
    surge = InjectedSurge(start_offset_s=0.0, duration_min=30.0, multiplier=3.0, ap_index=0)
    base = EmulatedWorld(EmulatorConfig(seed=11, profile=WorkloadProfile(noise_cv=0.3)))
    surged = EmulatedWorld(EmulatorConfig(seed=11, profile=WorkloadProfile(noise_cv=0.3),
                                          injected_surges=(surge,)))
    for _ in range(10):
        base.step()
        surged.step()
    for band in (BandKind.GHZ24, BandKind.GHZ5):
        b = base.radio_byte_rate(0, band)
        s = surged.radio_byte_rate(0, band)
        assert s == pytest.approx(3.0 * b, rel=1e-9)
        # untouched AP identical
        assert surged.radio_byte_rate(1, band) == pytest.approx(
            base.radio_byte_rate(1, band), rel=1e-12
        )


def test_surge_expires():
    surge = InjectedSurge(start_offset_s=0.0, duration_min=1.0, multiplier=3.0, ap_index=0)
    world = EmulatedWorld(quiet_config(injected_surges=(surge,)))
    world.step(30)
    assert world.surge_multiplier(0) == 3.0
    world.step(60)
    assert world.surge_multiplier(0) == 1.0


def test_steer_band_conserves_clients():
    world = EmulatedWorld(quiet_config())
    ap_id = world.aps[0].ap_id
    capable = [
        mac for mac in world.clients_on(ap_id, BandKind.GHZ24)
        if world.clients[mac].capable
    ]
    mac = capable[0]
    before24 = len(world.clients_on(ap_id, BandKind.GHZ24))
    before5 = len(world.clients_on(ap_id, BandKind.GHZ5))
    result = world.handle_command(
        ActuationCommand(kind="STEER_BAND", client_mac=mac, command_id="t-1",
                         target_band=BandKind.GHZ5)
    )
    assert result.accepted
    assert len(world.clients_on(ap_id, BandKind.GHZ24)) == before24 - 1
    assert len(world.clients_on(ap_id, BandKind.GHZ5)) == before5 + 1


def test_steer_incapable_client_rejected_world_unchanged():
    world = EmulatedWorld(quiet_config())
    ap_id = world.aps[0].ap_id
    incapable = [
        mac for mac in world.clients_on(ap_id, BandKind.GHZ24)
        if not world.clients[mac].capable
    ]
    mac = incapable[0]
    before = world.sample().to_log_json()
    with pytest.raises(IncapableClient):
        world.handle_command(
            ActuationCommand(kind="STEER_BAND", client_mac=mac, command_id="t-2",
                             target_band=BandKind.GHZ5)
        )
    assert world.sample().to_log_json() == before


def test_duplicate_command_id_is_idempotent():
    world = EmulatedWorld(quiet_config())
    ap_a, ap_b = world.aps[0].ap_id, world.aps[1].ap_id
    mac = world.clients_on(ap_a, BandKind.GHZ24)[0]
    cmd = ActuationCommand(kind="MOVE_AP", client_mac=mac, command_id="dup-1",
                           target_ap_id=ap_b)
    first = world.handle_command(cmd)
    state_after_first = world.sample().to_log_json()
    second = world.handle_command(cmd)
    assert first == second
    assert world.sample().to_log_json() == state_after_first


def test_move_to_unknown_ap():
    world = EmulatedWorld(quiet_config())
    mac = world.clients_on(world.aps[0].ap_id)[0]
    with pytest.raises(UnknownTargetAp):
        world.handle_command(
            ActuationCommand(kind="MOVE_AP", client_mac=mac, command_id="t-3",
                             target_ap_id="AC:DE:48:00:00:99")
        )


def test_unknown_client():
    world = EmulatedWorld(quiet_config())
    with pytest.raises(UnknownClient):
        world.handle_command(
            ActuationCommand(kind="DISASSOCIATE", client_mac="CA:FE:00:00:FF:FF",
                             command_id="t-4")
        )


def test_disassociate_then_reassociates_to_best_snr():
    world = EmulatedWorld(quiet_config())
    mac = world.clients_on(world.aps[0].ap_id, BandKind.GHZ24)[0]
    world.handle_command(
        ActuationCommand(kind="DISASSOCIATE", client_mac=mac, command_id="t-5")
    )
    assert world.clients[mac].ap_index == -1
    for _ in range(10):  # exp(5 s) delay elapses within a few 10 s steps
        world.step()
        if world.clients[mac].ap_index >= 0:
            break
    client = world.clients[mac]
    assert client.ap_index >= 0
    best_snr = max(client.snr_by_ap)
    assert client.snr_by_ap[client.ap_index] == best_snr


def test_commands_never_create_or_destroy_clients():
    world = EmulatedWorld(quiet_config())
    total = len(world.clients)
    ap_a, ap_b = world.aps[0].ap_id, world.aps[1].ap_id
    macs = world.clients_on(ap_a, BandKind.GHZ24)
    world.handle_command(ActuationCommand(kind="MOVE_AP", client_mac=macs[0],
                                          command_id="c-1", target_ap_id=ap_b))
    world.handle_command(ActuationCommand(kind="DISASSOCIATE", client_mac=macs[1],
                                          command_id="c-2"))
    world.step()
    assert len(world.clients) == total


def test_churn_keeps_population_near_roster():
    cfg = EmulatorConfig(seed=3, churn_per_client_per_hour=2.0)
    world = EmulatedWorld(cfg)
    sizes = []
    for _ in range(360):  # one simulated hour
        world.step()
        sizes.append(len(world.clients))
    mean_size = sum(sizes) / len(sizes)
    assert abs(mean_size - cfg.roster) <= cfg.roster * 0.25
    assert world.counters["arrivals"] > 0
    assert world.counters["departures"] > 0


def test_airtime_always_bounded():
    surge = InjectedSurge(start_offset_s=0.0, duration_min=120.0, multiplier=50.0, ap_index=0)
    world = EmulatedWorld(EmulatorConfig(
        seed=5, profile=WorkloadProfile(noise_cv=1.0), injected_surges=(surge,)
    ))
    for _ in range(50):
        world.step()
        for ap_state in world.ap_states():
            for r in ap_state.radios:
                assert 0.0 <= r.airtime_utilization <= 0.95


def test_diurnal_shape_unimodal_peak_15():
    """Zero-noise 24 h run: hourly means peak in bin 15 with the exact
    max/min ratio of the profile."""
    world = EmulatedWorld(quiet_config(seed=42))
    hour_samples = {}
    for _ in range(24 * 30):  # 2-minute steps over one day
        world.step(120)
        h = int(hour_of_day(world.clock_ms))  # floor, same as twin binning
        total = sum(world.radio_byte_rate(a.index, b)
                    for a in world.aps for b in (BandKind.GHZ24, BandKind.GHZ5))
        hour_samples.setdefault(h, []).append(total)
    means = {h: sum(v) / len(v) for h, v in hour_samples.items()}
    assert max(means, key=means.get) == 15
    ratio = max(means.values()) / min(means.values())
    profile = world.config.profile
    # hourly means of the bump, not its extremes; ratio is close to peak/base
    assert ratio == pytest.approx(profile.peak_bps / profile.base_bps, rel=0.05)


def test_sticky_clients_revert_after_steer():
    world = EmulatedWorld(quiet_config(sticky_clients=True))
    ap_id = world.aps[0].ap_id
    capable = [m for m in world.clients_on(ap_id, BandKind.GHZ24)
               if world.clients[m].capable]
    mac = capable[0]
    world.handle_command(ActuationCommand(kind="STEER_BAND", client_mac=mac,
                                          command_id="s-1", target_band=BandKind.GHZ5))
    assert world.clients[mac].band is BandKind.GHZ5
    world.step()
    assert world.clients[mac].band is BandKind.GHZ24
