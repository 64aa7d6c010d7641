"""twin store: apply, snapshot queries, series re-binning."""

import pytest

from apdt.errors import NotFound, OutOfOrderSample, SchemaViolation, UnknownAp, UnsupportedBin
from apdt.model import BandKind, Metric
from apdt.twin import TwinStore

from conftest import AP1, ap, client, radio, sample_of, simple_sample, T0


def test_first_sample_gives_version_1():
    store = TwinStore()
    assert store.apply_sample(simple_sample()) == 1


def test_identical_sample_10s_later_increments_and_extends_series():
    store = TwinStore()
    store.apply_sample(simple_sample(taken_at=T0))
    v = store.apply_sample(simple_sample(taken_at=T0 + 10_000))
    assert v == 2
    series = store.query_series(AP1, Metric.BYTE_RATE, (T0, T0 + 20_000))
    assert len(series.points) == 2
    assert series.points[0][1] == series.points[1][1]


def test_unknown_ap_reference_is_schema_violation():
    store = TwinStore()
    bad = sample_of([ap()], [client(ap_id="AC:DE:48:00:00:99")])
    with pytest.raises(SchemaViolation):
        store.apply_sample(bad)
    assert store.version == 0
    assert store.counters["samples_rejected"] == 1


def test_client_count_mismatch_rejected():
    store = TwinStore()
    aps = [ap(radios=(radio(BandKind.GHZ24, clients=5),))]  # claims 5, has 1
    with pytest.raises(SchemaViolation):
        store.apply_sample(sample_of(aps, [client(capable=False)]))


def test_degraded_ap_relaxes_client_count():
    aps = [ap(radios=(radio(BandKind.GHZ24, clients=5),))]
    s = sample_of(aps, [], degraded={AP1})
    store = TwinStore()
    assert store.apply_sample(s) == 1


def test_out_of_order_sample_rejected():
    store = TwinStore()
    store.apply_sample(simple_sample(taken_at=T0 + 10_000))
    with pytest.raises(OutOfOrderSample):
        store.apply_sample(simple_sample(taken_at=T0))
    assert store.version == 1


def test_get_snapshot_latest_and_boundary():
    store = TwinStore()
    for k in range(3):
        store.apply_sample(simple_sample(taken_at=T0 + k * 10_000))
    assert store.get_snapshot().version == 3
    # boundary inclusive: at exactly sample 2's timestamp
    assert store.get_snapshot(at=T0 + 10_000).version == 2
    with pytest.raises(NotFound):
        store.get_snapshot(at=T0 - 1)


def test_get_snapshot_empty_store():
    with pytest.raises(NotFound):
        TwinStore().get_snapshot()


def test_query_series_rebin_hourly_mean():
    store = TwinStore()
    # two hours of 10 s samples with rate proportional to hour index
    for hour in range(2):
        for k in range(360):
            ts = T0 + (hour * 3600 + k * 10) * 1000
            store.apply_sample(simple_sample(taken_at=ts, rate=100_000 * (hour + 1)))
    series = store.query_series(AP1, Metric.BYTE_RATE, (T0, T0 + 7_200_000), 3600)
    assert len(series.points) == 2
    assert series.points[0][1] == pytest.approx(200_000)  # bytes/s (2 clients)
    assert series.points[1][1] == pytest.approx(400_000)
    assert series.points[0][0] % 3_600_000 == 0


def test_query_series_empty_window():
    store = TwinStore()
    store.apply_sample(simple_sample())
    series = store.query_series(AP1, Metric.BYTE_RATE, (T0 + 1_000_000, T0 + 2_000_000))
    assert series.points == ()


def test_query_series_constant_rebin_is_constant():
    store = TwinStore()
    for k in range(12):
        store.apply_sample(simple_sample(taken_at=T0 + k * 10_000))
    series = store.query_series(AP1, Metric.BYTE_RATE, (T0, T0 + 120_000), 60)
    assert len(series.points) == 2
    v = series.points[0][1]
    assert all(p[1] == v for p in series.points)


def test_query_series_unknown_ap():
    store = TwinStore()
    store.apply_sample(simple_sample())
    with pytest.raises(UnknownAp):
        store.query_series("AC:DE:48:00:00:99", Metric.BYTE_RATE, (T0, T0 + 1))


def test_query_series_unsupported_bin():
    store = TwinStore()
    store.apply_sample(simple_sample())
    with pytest.raises(UnsupportedBin):
        store.query_series(AP1, Metric.BYTE_RATE, (T0, T0 + 10_000), 15)


def test_band_level_series():
    store = TwinStore()
    store.apply_sample(simple_sample())
    series = store.query_series(AP1, Metric.CLIENT_COUNT, (T0, T0 + 10_000),
                                band=BandKind.GHZ24)
    assert series.points[0][1] == 2.0
    agg = store.query_series(AP1, Metric.CLIENT_COUNT, (T0, T0 + 10_000))
    assert agg.points[0][1] == 2.0  # GHZ5 radio is empty
