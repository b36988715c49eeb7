from datetime import date

import numpy as np
import pandas as pd
import pytest

from leafcast.domain.features import (
    WEEK_COLUMN,
    add_week_of_year,
    apply_minmax,
    fit_minmax,
    fit_species,
    join_sources,
    make_windows,
    one_hot_species,
    split_temporal,
    week_of_year,
)
from leafcast.domain.models import DailyLeafSeries, Era5Record, FeatureTable, IndexKind, IndexSeries
from leafcast.errors import CoverageError, DataError


def _series(tree_id, species, start, n):
    values = np.linspace(0.0, 100.0, n)
    return DailyLeafSeries(tree_id, species, start, values, (values > 0) & (values < 100))


def _index(tree_id, kind, start, n, offset=0.0):
    return IndexSeries(tree_id, kind, start, np.linspace(0.2, 0.8, n) + offset)


def _weather(start, n):
    return [
        Era5Record(date=(pd.Timestamp(start) + pd.Timedelta(days=k)).date(), features={"temperature": 280.0 + k})
        for k in range(n)
    ]


def test_join_sources_one_row_per_tree_day():
    start = date(2020, 1, 1)
    leaf = [_series("T1", "ACRU", start, 10), _series("T2", "FAGR", start, 10)]
    indices = [_index("T1", IndexKind.NDVI, start, 10), _index("T2", IndexKind.NDVI, start, 10, 0.1)]

    table = join_sources(leaf, indices, _weather(start, 12), [IndexKind.NDVI])

    assert len(table) == 20
    assert table.numeric_columns == ["ndvi", "temperature"]
    t2 = table.frame[table.frame["tree_id"] == "T2"]
    assert t2["ndvi"].iloc[0] == pytest.approx(0.3)
    # single weather pixel: both trees see the same weather
    assert table.frame.groupby("date")["temperature"].nunique().max() == 1


def test_join_sources_lists_every_missing_entry():
    start = date(2020, 1, 1)
    leaf = [_series("T1", "ACRU", start, 5), _series("T2", "ACRU", start, 5)]
    indices = [_index("T1", IndexKind.NDVI, start, 5)]

    with pytest.raises(CoverageError) as info:
        join_sources(leaf, indices, _weather(start, 4), [IndexKind.NDVI])

    missing = info.value.missing
    assert ("T2", "*", "NDVI") in missing
    assert ("T1", "2020-01-05", "era5") in missing
    assert ("T2", "2020-01-05", "era5") in missing


def test_week_of_year_examples():
    assert week_of_year(np.array([1, 7, 8, 364, 365, 366])).tolist() == [1, 1, 2, 52, 52, 52]


def _table():
    frame = pd.DataFrame({
        "tree_id": ["T1"] * 4 + ["T2"] * 4,
        "date": pd.to_datetime(["2020-01-01", "2020-01-02", "2021-01-01", "2021-01-02"] * 2),
        "species": ["ACRU"] * 4 + ["QURU"] * 4,
        "ndvi": [0.2, 0.4, 0.6, 1.0, 0.3, 0.3, 0.3, 0.3],
        "label": [False] * 8,
    })
    return FeatureTable(frame=frame, numeric_columns=["ndvi"])


def test_add_week_of_year_appends_numeric_column():
    table = add_week_of_year(_table())
    assert table.numeric_columns[-1] == WEEK_COLUMN
    assert table.frame[WEEK_COLUMN].iloc[0] == 1.0


def test_one_hot_species_is_sorted_and_warns_on_unseen():
    table = _table()
    encoded = one_hot_species(table, ["ACRU"])
    assert encoded.species_columns == ["species_ACRU"]
    assert encoded.frame["species_ACRU"].tolist() == [1.0] * 4 + [0.0] * 4
    assert any("QURU" in w for w in encoded.warnings)

    both = one_hot_species(table, fit_species(table))
    assert both.species_columns == ["species_ACRU", "species_QURU"]
    assert (both.frame[both.species_columns].sum(axis=1) == 1.0).all()


def test_minmax_fitted_on_selected_rows_only():
    table = _table()
    fit_rows = (table.frame["date"].dt.year == 2020).to_numpy()

    params = fit_minmax(table, fit_rows)
    scaled = apply_minmax(table, params)

    assert params.minimums["ndvi"] == 0.2
    assert params.maximums["ndvi"] == 0.4
    values = scaled.frame["ndvi"].tolist()
    assert values[0] == 0.0
    assert values[1] == 1.0
    # values beyond the fitted range are clamped
    assert values[3] == 1.0


def test_minmax_constant_column_maps_to_zero():
    table = _table()
    fit_rows = (table.frame["tree_id"] == "T2").to_numpy()
    scaled = apply_minmax(table, fit_minmax(table, fit_rows))
    assert scaled.frame["ndvi"].tolist() == [0.0] * 8


def _daily_table(n=12, trees=("T1",), start="2020-01-01"):
    frames = []
    for tree in trees:
        frames.append(pd.DataFrame({
            "tree_id": tree,
            "date": pd.date_range(start, periods=n, freq="D"),
            "species": "ACRU",
            "x": np.arange(n, dtype=float),
            "label": np.arange(n) % 2 == 0,
        }))
    return FeatureTable(frame=pd.concat(frames, ignore_index=True), numeric_columns=["x"])


def test_make_windows_shapes_and_alignment():
    dataset = make_windows(_daily_table(12), w=7)

    assert dataset.X.shape == (5, 7, 1)
    assert dataset.X[0, :, 0].tolist() == [0, 1, 2, 3, 4, 5, 6]
    assert dataset.target_dates[0] == np.datetime64("2020-01-08")
    assert dataset.y.tolist() == [False, True, False, True, False]


def test_make_windows_never_spans_trees_or_gaps():
    table = _daily_table(10, trees=("T1", "T2"))
    frame = table.frame[~((table.frame["tree_id"] == "T1") & (table.frame["date"] == "2020-01-05"))]
    dataset = make_windows(table.replace(frame=frame), w=3)

    # T1: runs of 4 and 5 days -> 1 + 2 examples; T2: 10 days -> 7
    assert len(dataset) == 10
    assert list(dataset.tree_ids).count("T1") == 3


def test_make_windows_short_run_warns():
    dataset = make_windows(_daily_table(7), w=7)
    assert len(dataset) == 0
    assert dataset.X.shape == (0, 7, 1)
    assert dataset.warnings


def test_split_temporal_partitions_examples():
    table = _daily_table(800, trees=("T1", "T2"), start="2020-01-01")
    dataset = make_windows(table, w=7)

    train, val, holdout = split_temporal(dataset, [2020], 2021, "T2")

    assert set(train.years) == {2020} and set(train.tree_ids) == {"T1"}
    assert set(val.years) == {2021} and set(val.tree_ids) == {"T1"}
    assert set(holdout.tree_ids) == {"T2"}
    assert len(holdout) == len(dataset) // 2
    # 2022 examples of T1 belong to no split
    assert len(train) + len(val) + len(holdout) < len(dataset)


def test_split_temporal_unknown_holdout_raises():
    dataset = make_windows(_daily_table(20), w=7)
    with pytest.raises(DataError):
        split_temporal(dataset, [2020], 2021, "T9")


def test_split_temporal_empty_validation_warns():
    dataset = make_windows(_daily_table(20, trees=("T1", "T2")), w=7)
    _, val, _ = split_temporal(dataset, [2020], 2021, "T2")
    assert len(val) == 0
    assert val.warnings
