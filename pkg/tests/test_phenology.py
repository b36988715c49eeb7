from datetime import date, timedelta

import numpy as np
import pytest

from leafcast.domain.models import DailyLeafSeries, PhenoRecord, SiteCoordinate
from leafcast.domain.phenology import (
    attach_coordinates,
    derive_labels,
    filter_years,
    group_by_tree,
    to_daily_series,
)
from leafcast.errors import DataError, DuplicateError

from .conftest import make_records


def _brute_force_year(year, observations):
    """Day-by-day reference: 0 before Sep 1, linear from Aug 31 = 0, hold the last value."""
    points = [(date(year, 8, 31), 0.0)] + sorted(
        (d, v) for d, v in observations.items() if d.year == year and d.month >= 9
    )
    values = []
    day = date(year, 1, 1)
    while day.year == year:
        if day.month < 9 or len(points) == 1:
            values.append(0.0)
        elif day >= points[-1][0]:
            values.append(points[-1][1])
        else:
            k = max(j for j, (d, _) in enumerate(points) if d <= day)
            (d0, v0), (d1, v1) = points[k], points[k + 1]
            values.append(v0 + (v1 - v0) * (day - d0).days / (d1 - d0).days)
        day += timedelta(days=1)
    return values


def test_filter_years_keeps_range():
    records = make_records("T1", "ACRU", {"2014-11-01": 50.0, "2015-09-01": 10.0})
    kept = filter_years(records, 2015, 2022)
    assert [r.date for r in kept] == [date(2015, 9, 1)]


def test_filter_years_rejects_inverted_range():
    with pytest.raises(ValueError):
        filter_years([], 2020, 2019)


def test_daily_series_interpolates_from_august_31():
    records = make_records("T1", "ACRU", {
        "2015-09-08": 20.0,
        "2015-09-15": 50.0,
        "2015-10-01": 100.0,
    })
    series = to_daily_series(records, 2015, 2015)

    assert len(series) == 365
    by_day = dict(zip(series.dates.date, series.values))
    assert by_day[date(2015, 8, 31)] == 0.0
    assert by_day[date(2015, 9, 1)] == pytest.approx(2.5)
    assert by_day[date(2015, 9, 8)] == pytest.approx(20.0)
    assert by_day[date(2015, 9, 15)] == pytest.approx(50.0)
    assert by_day[date(2015, 12, 31)] == 100.0

    labels = dict(zip(series.dates.date, series.labels))
    assert not labels[date(2015, 8, 31)]
    assert labels[date(2015, 9, 1)]
    assert labels[date(2015, 9, 30)]
    assert not labels[date(2015, 10, 1)]


def test_daily_series_matches_brute_force_on_random_observations():
    rng = np.random.default_rng(11)
    for trial in range(20):
        observations = {}
        for year in (2016, 2017):
            days = sorted(rng.choice(np.arange(243, 365), size=rng.integers(1, 8), replace=False))
            values = np.sort(rng.uniform(0, 100, size=len(days))).round(1)
            for offset, value in zip(days, values):
                observations[date(year, 1, 1) + timedelta(days=int(offset))] = float(value)
        records = [PhenoRecord(d, "T1", "FAGR", v) for d, v in observations.items()]

        series = to_daily_series(records, 2016, 2017)

        expected = _brute_force_year(2016, observations) + _brute_force_year(2017, observations)
        np.testing.assert_allclose(series.values, expected, rtol=0, atol=1e-9)


def test_pre_september_observations_are_ignored():
    records = make_records("T1", "ACRU", {"2015-06-01": 30.0, "2015-09-11": 10.0})
    series = to_daily_series(records, 2015, 2015)
    assert series.values[:243].max() == 0.0


def test_missing_lfall_is_skipped_not_zero():
    records = make_records("T1", "ACRU", {"2015-09-11": 40.0})
    records.append(PhenoRecord(date(2015, 9, 21), "T1", "ACRU", None))
    series = to_daily_series(records, 2015, 2015)
    assert series.values[-1] == pytest.approx(40.0)


def test_year_without_observations_is_zero_with_warning():
    records = make_records("T1", "ACRU", {"2015-10-01": 60.0})
    series = to_daily_series(records, 2015, 2016)

    assert len(series) == 365 + 366
    assert series.values[365:].max() == 0.0
    assert any("2016" in w for w in series.warnings)


def test_duplicate_observation_date_raises():
    records = make_records("T1", "ACRU", {"2015-10-01": 60.0})
    records.append(PhenoRecord(date(2015, 10, 1), "T1", "ACRU", 70.0))
    with pytest.raises(DuplicateError):
        to_daily_series(records, 2015, 2015)


def test_mixed_trees_raise():
    records = make_records("T1", "ACRU", {"2015-10-01": 60.0}) + make_records("T2", "ACRU", {"2015-10-02": 10.0})
    with pytest.raises(DataError):
        to_daily_series(records, 2015, 2015)


def test_label_rule_excludes_both_bounds():
    series = DailyLeafSeries("T1", "ACRU", date(2015, 1, 1), np.array([0.0, 0.0, 50.0, 100.0]), np.zeros(4, bool))
    assert derive_labels(series).labels.tolist() == [False, False, True, False]


def test_label_rule_tiny_values():
    series = DailyLeafSeries("T1", "ACRU", date(2015, 1, 1), np.array([1e-9, 99.999999]), np.zeros(2, bool))
    assert derive_labels(series).labels.tolist() == [True, True]


def test_group_by_tree_keeps_first_seen_order():
    records = make_records("B", "ACRU", {"2015-09-01": 1.0}) + make_records("A", "ACRU", {"2015-09-01": 2.0})
    assert list(group_by_tree(records)) == ["B", "A"]


def test_attach_coordinates_drops_unknown_trees(caplog):
    sites = [SiteCoordinate("T1", 42.5, -72.2)]
    located, dropped = attach_coordinates(["T1", "T2"], sites)
    assert list(located) == ["T1"]
    assert dropped == ["T2"]
    assert "T2" in caplog.text


def test_attach_coordinates_duplicate_site_raises():
    sites = [SiteCoordinate("T1", 42.5, -72.2), SiteCoordinate("T1", 42.6, -72.2)]
    with pytest.raises(DuplicateError):
        attach_coordinates(["T1"], sites)


def test_pheno_record_range_check():
    with pytest.raises(DataError):
        PhenoRecord(date(2015, 9, 1), "T1", "ACRU", 101.0)
