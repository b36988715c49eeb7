import io
from datetime import date

import numpy as np
import pandas as pd
import pytest

from leafcast.adapters.csv_adapter import (
    parse_era5_csv,
    parse_pheno_csv,
    parse_sites_csv,
    read_daily_series_csv,
    read_feature_table,
    read_metrics_csv,
    read_truth_periods_csv,
    write_daily_series_csv,
    write_feature_table,
    write_metrics_csv,
    write_predictions_csv,
    write_rmse_csv,
    write_truth_periods_csv,
)
from leafcast.domain.models import DailyLeafSeries, FeatureTable, PeriodSummary, RmseReport
from leafcast.errors import DataError, DuplicateError, ParseError
from leafcast.model.trainer import EpochMetrics

PHENO = """date,tree_id,species,lfall
2015-09-08,T1,ACRU,20
2015-09-15,T1,ACRU,
2015-09-22,T1,ACRU,55.5
"""


def test_parse_pheno_keeps_empty_cells_as_none():
    records = parse_pheno_csv(PHENO)
    assert [r.lfall_pct for r in records] == [20.0, None, 55.5]
    assert records[0].date == date(2015, 9, 8)
    assert records[0].species == "ACRU"


def test_parse_pheno_reports_line_and_column_of_bad_date():
    text = PHENO.replace("2015-09-15", "2015-13-15")
    with pytest.raises(ParseError) as info:
        parse_pheno_csv(text, source="pheno.csv")
    assert info.value.row == 3
    assert info.value.column == "date"
    assert "pheno.csv" in str(info.value)


def test_parse_pheno_rejects_out_of_range_lfall():
    text = PHENO.replace("55.5", "120")
    with pytest.raises(ParseError) as info:
        parse_pheno_csv(text)
    assert info.value.row == 4
    assert info.value.column == "lfall"


def test_parse_pheno_missing_column():
    with pytest.raises(ParseError) as info:
        parse_pheno_csv("date,tree_id,lfall\n2015-09-01,T1,3\n")
    assert info.value.column == "species"


def test_parse_sites_range_check():
    with pytest.raises(ParseError) as info:
        parse_sites_csv("tree_id,lat,lon\nT1,42.5,-72.2\nT2,95,-72.2\n")
    assert info.value.row == 3
    assert info.value.column == "lat"


def test_parse_sites():
    sites = parse_sites_csv(io.StringIO("tree_id,lat,lon\nT1,42.5,-72.2\n"))
    assert sites[0].tree_id == "T1"
    assert sites[0].lon == pytest.approx(-72.2)


ERA5 = """date,t2m,tp,ssrd
2015-01-02,271.5,0.001,5000000
2015-01-01,270.0,0.0,4000000
2015-01-03,272.0,0.002,6000000
"""


def test_parse_era5_selects_renames_and_sorts():
    records = parse_era5_csv(ERA5, ["t2m", "ssrd"], rename={"t2m": "temperature"})
    assert [r.date for r in records] == [date(2015, 1, 1), date(2015, 1, 2), date(2015, 1, 3)]
    assert records[0].features == {"temperature": 270.0, "ssrd": 4000000.0}


def test_parse_era5_missing_selected_column():
    with pytest.raises(ParseError) as info:
        parse_era5_csv(ERA5, ["swvl1"])
    assert info.value.column == "swvl1"


def test_parse_era5_duplicate_date():
    text = ERA5 + "2015-01-03,272.0,0.002,6000000\n"
    with pytest.raises(DuplicateError):
        parse_era5_csv(text, ["t2m"])


def test_parse_era5_gap():
    text = ERA5 + "2015-01-05,272.0,0.002,6000000\n"
    with pytest.raises(DataError, match="missing day"):
        parse_era5_csv(text, ["t2m"])


def test_daily_series_round_trip_is_exact():
    values = np.array([0.0, 1.0 / 3.0, 50.0, 99.99999999999, 100.0])
    series = DailyLeafSeries("T1", "ACRU", date(2016, 2, 27), values, (values > 0) & (values < 100))
    buffer = io.StringIO()
    write_daily_series_csv([series], buffer)

    restored = read_daily_series_csv(buffer.getvalue())

    assert len(restored) == 1
    assert restored[0].start_date == date(2016, 2, 27)
    assert np.array_equal(restored[0].values, values)
    assert np.array_equal(restored[0].labels, series.labels)


def test_daily_series_rejects_gaps():
    text = "tree_id,species,date,lfall,label\nT1,ACRU,2015-01-01,0.0,false\nT1,ACRU,2015-01-03,0.0,false\n"
    with pytest.raises(DataError, match="contiguous"):
        read_daily_series_csv(text)


def test_feature_table_round_trip_is_exact():
    frame = pd.DataFrame({
        "tree_id": ["T1", "T1"],
        "date": pd.to_datetime(["2015-01-01", "2015-01-02"]),
        "species": ["ACRU", "ACRU"],
        "ndvi": [0.1 + 0.2, 2.0 / 3.0],
        "species_ACRU": [1.0, 1.0],
        "label": [False, True],
    })
    table = FeatureTable(frame=frame, numeric_columns=["ndvi"], species_columns=["species_ACRU"])
    buffer = io.StringIO()
    write_feature_table(table, buffer, include_species=True)

    restored = read_feature_table(buffer.getvalue(), ["ndvi"], ["species_ACRU"])

    assert restored.feature_names == ["ndvi", "species_ACRU"]
    assert restored.frame["ndvi"].tolist() == [0.1 + 0.2, 2.0 / 3.0]
    assert restored.frame["label"].tolist() == [False, True]
    assert restored.frame["species"].tolist() == ["ACRU", "ACRU"]


def test_truth_periods_round_trip():
    periods = [PeriodSummary("T1", 2015, date(2015, 9, 20), date(2015, 11, 2))]
    buffer = io.StringIO()
    write_truth_periods_csv(periods, buffer)
    assert read_truth_periods_csv(buffer.getvalue()) == periods


def test_metrics_round_trip_keeps_numpy_floats_finite():
    metrics = [
        EpochMetrics(1, np.float64(0.25), np.float64(0.875), np.float64(1.0 / 3.0), np.float64(0.5)),
        EpochMetrics(2, np.float64(0.125), np.float64(0.9375), np.nan, np.nan),
    ]
    buffer = io.StringIO()
    write_metrics_csv(metrics, buffer)

    assert "np.float64" not in buffer.getvalue()
    restored = read_metrics_csv(buffer.getvalue())

    assert restored["epoch"].tolist() == [1, 2]
    assert restored["train_loss"].tolist() == [0.25, 0.125]
    assert restored["val_loss"].iloc[0] == 1.0 / 3.0
    assert np.isnan(restored["val_loss"].iloc[1])


def test_metrics_reader_rejects_malformed_numbers():
    text = "epoch,train_loss,train_acc,val_loss,val_acc\n1,np.float64(0.25),0.5,0.5,0.5\n"
    with pytest.raises(ParseError) as info:
        read_metrics_csv(text)
    assert info.value.row == 2


def test_rmse_and_predictions_write_plain_numbers():
    report = RmseReport(start=[], end=[], rmse_start=np.float64(6.32), rmse_end=np.float64(9.31),
                        rmse_overall=np.float64(7.96))
    rmse = io.StringIO()
    write_rmse_csv({"holdout": report}, rmse)
    predictions = io.StringIO()
    write_predictions_csv(
        ["T1"], np.array(["2015-10-01"], dtype="datetime64[D]"), np.array([0.75]), np.array([True]), predictions
    )

    rmse_frame = pd.read_csv(io.StringIO(rmse.getvalue()))
    predictions_frame = pd.read_csv(io.StringIO(predictions.getvalue()))

    assert rmse_frame["rmse_start"].tolist() == pytest.approx([6.32])
    assert rmse_frame["rmse_end"].tolist() == pytest.approx([9.31])
    assert predictions_frame["probability"].tolist() == pytest.approx([0.75])
