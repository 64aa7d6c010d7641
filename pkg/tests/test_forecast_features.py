"""Hourly aggregation and the design matrix."""

import pytest

from apdt.errors import EmptySeries, InsufficientHistory, SchemaViolation
from apdt.forecast import aggregate_hourly, build_features
from apdt.model import BandKind, Metric, MetricSeries
from apdt.timeutil import MS_PER_HOUR

from conftest import AP1, T0


def hourly(values, start=T0, metric=Metric.BYTE_RATE, gaps=()):
    """Series of hourly points skipping indices in `gaps`."""
    points = tuple(
        (start + i * MS_PER_HOUR, float(v))
        for i, v in enumerate(values)
        if i not in gaps
    )
    return MetricSeries(ap_id=AP1, band=None, metric=metric, points=points, bin_seconds=3600)


def test_constant_series_all_hours_equal():
    series = hourly([7.0] * 48)
    profile = aggregate_hourly(series)
    assert profile.means == tuple([7.0] * 24)
    assert profile.sample_counts == tuple([2] * 24)


def test_partial_day_absent_hours():
    # T0 is midnight UTC; cover hours 9..17 only
    points = tuple((T0 + h * MS_PER_HOUR, 5.0) for h in range(9, 18))
    series = MetricSeries(ap_id=AP1, band=None, metric=Metric.BYTE_RATE,
                          points=points, bin_seconds=3600)
    profile = aggregate_hourly(series)
    for h in range(24):
        if 9 <= h <= 17:
            assert profile.means[h] == 5.0
        else:
            assert profile.means[h] is None


def test_empty_series_raises():
    with pytest.raises(EmptySeries):
        aggregate_hourly(hourly([]))


def test_wrong_metric_rejected():
    with pytest.raises(SchemaViolation):
        aggregate_hourly(hourly([1.0] * 30, metric=Metric.AIRTIME))


def test_exactly_25_points_one_row():
    dm = build_features(hourly(range(25)))
    assert dm.n == 1
    # the single row targets the 25th point, lag_1 = 23, lag_24 = 0
    assert dm.y[0] == 24.0
    assert dm.X[0][3] == 23.0
    assert dm.X[0][4] == 0.0


def test_14_days_row_count():
    dm = build_features(hourly(range(14 * 24)))
    assert dm.n == 14 * 24 - 24


def test_gap_drops_dependent_rows():
    # 3-hour gap at indices 30..32 over 72 hours.
    # Targets lost: 30,31,32. lag_1 lost: 33. lag_24 lost: 54,55,56.
    # Contiguous baseline is 72 - 24 = 48 rows; 7 rows drop out.
    dm = build_features(hourly(range(72), gaps=(30, 31, 32)))
    assert dm.n == 48 - 7


def test_under_25_hours_insufficient():
    with pytest.raises(InsufficientHistory):
        build_features(hourly(range(24)))


def test_non_hourly_bins_rejected():
    series = MetricSeries(ap_id=AP1, band=BandKind.GHZ24, metric=Metric.BYTE_RATE,
                          points=((T0, 1.0),), bin_seconds=10)
    with pytest.raises(SchemaViolation):
        build_features(series)


def test_rows_chronological():
    dm = build_features(hourly(range(60)))
    assert list(dm.timestamps) == sorted(dm.timestamps)
