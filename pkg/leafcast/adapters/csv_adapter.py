"""
CSV Adapters

Convert between the pipeline's CSV files and domain models. Parsers
accept a text stream or the CSV text itself and report problems with
the offending line (header = line 1) and column.
"""

import io
import logging
from datetime import date
from typing import Iterable, List, Mapping, Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd

from ..domain.models import (
    ClassificationReport,
    DailyLeafSeries,
    Era5Record,
    FeatureTable,
    PeriodSummary,
    PhenoRecord,
    RmseReport,
    SiteCoordinate,
    TrajectoryCurve,
)
from ..errors import DataError, DuplicateError, ParseError

logger = logging.getLogger(__name__)

TextSource = Union[str, TextIO]

PHENO_COLUMNS = ["date", "tree_id", "species", "lfall"]
SITE_COLUMNS = ["tree_id", "lat", "lon"]
DAILY_COLUMNS = ["tree_id", "species", "date", "lfall", "label"]
METRICS_COLUMNS = ["epoch", "train_loss", "train_acc", "val_loss", "val_acc"]
TUNE_COLUMNS = ["trial_id", "bracket", "round", "epochs", "config_json", "val_loss", "eliminated"]
PERIOD_COLUMNS = [
    "tree_id", "year", "pred_start", "pred_end", "actual_start", "actual_end",
    "start_diff_days", "end_diff_days",
]
TRUTH_COLUMNS = ["tree_id", "year", "start", "end"]
DATE_FORMAT = "%Y-%m-%d"
# exact round trip for float columns
ROUND_TRIP_FLOAT = "%.17g"


# ==========================================
# Shared helpers
# ==========================================

def _read_table(source: TextSource, required: Sequence[str], name: Optional[str]) -> pd.DataFrame:
    """All cells as strings, empty cells as ''."""
    stream = io.StringIO(source) if isinstance(source, str) else source
    try:
        frame = pd.read_csv(stream, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ParseError("file is empty", row=1, source=name)
    except pd.errors.ParserError as exc:
        raise ParseError(f"malformed CSV: {exc}", source=name)

    frame.columns = [str(c).strip() for c in frame.columns]
    for column in required:
        if column not in frame.columns:
            raise ParseError("required column missing from header", row=1, column=column, source=name)
    return frame


def _line(position: int) -> int:
    # header is line 1
    return position + 2


def _parse_dates(frame: pd.DataFrame, column: str, name: Optional[str]) -> pd.Series:
    text = frame[column].str.strip()
    parsed = pd.to_datetime(text, format=DATE_FORMAT, errors="coerce")
    bad = np.flatnonzero(parsed.isna().to_numpy())
    if len(bad):
        k = bad[0]
        raise ParseError(f"invalid date '{text.iloc[k]}', expected YYYY-MM-DD", _line(k), column, name)
    return parsed


def _to_float(cell: str) -> float:
    # Python float() parses repr output back to the identical double
    try:
        return float(cell)
    except ValueError:
        return np.nan


def _parse_numbers(
    frame: pd.DataFrame,
    column: str,
    name: Optional[str],
    allow_empty: bool = False
) -> pd.Series:
    text = frame[column].str.strip()
    numbers = text.map(_to_float)
    invalid = numbers.isna() & ~((text == "") & allow_empty)
    bad = np.flatnonzero(invalid.to_numpy())
    if len(bad):
        k = bad[0]
        cell = text.iloc[k]
        problem = "empty cell" if cell == "" else f"'{cell}' is not a number"
        raise ParseError(problem, _line(k), column, name)
    return numbers.astype(np.float64)


def _check_range(values: pd.Series, low: float, high: float, column: str, name: Optional[str]) -> None:
    outside = values.notna() & ((values < low) | (values > high))
    bad = np.flatnonzero(outside.to_numpy())
    if len(bad):
        k = bad[0]
        raise ParseError(f"value {values.iloc[k]:g} outside [{low:g}, {high:g}]", _line(k), column, name)


def _check_identifiers(frame: pd.DataFrame, column: str, name: Optional[str]) -> pd.Series:
    ids = frame[column].str.strip()
    bad = np.flatnonzero((ids == "").to_numpy())
    if len(bad):
        raise ParseError("empty identifier", _line(bad[0]), column, name)
    return ids


def _iso(value) -> str:
    return pd.Timestamp(value).strftime(DATE_FORMAT)


def _bool_text(flags: Iterable[bool]) -> List[str]:
    return ["true" if f else "false" for f in flags]


def _parse_bools(frame: pd.DataFrame, column: str, name: Optional[str]) -> np.ndarray:
    text = frame[column].str.strip().str.lower()
    mapping = {"true": True, "false": False, "1": True, "0": False}
    bad = np.flatnonzero(~text.isin(list(mapping)).to_numpy())
    if len(bad):
        raise ParseError(f"'{frame[column].iloc[bad[0]]}' is not a boolean", _line(bad[0]), column, name)
    return text.map(mapping).to_numpy(dtype=bool)


def _write(frame: pd.DataFrame, target: Union[str, TextIO]) -> None:
    frame.to_csv(target, index=False, lineterminator="\n")


# ==========================================
# Ground truth and weather
# ==========================================

def parse_pheno_csv(text: TextSource, source: Optional[str] = None) -> List[PhenoRecord]:
    """
    Parse the phenology CSV (date,tree_id,species,lfall).

    Empty lfall cells become None, never 0.

    Raises:
        ParseError: malformed date, lfall outside [0, 100], missing column
    """
    frame = _read_table(text, PHENO_COLUMNS, source)
    dates = _parse_dates(frame, "date", source)
    trees = _check_identifiers(frame, "tree_id", source)
    species = _check_identifiers(frame, "species", source)
    lfall = _parse_numbers(frame, "lfall", source, allow_empty=True)
    _check_range(lfall, 0.0, 100.0, "lfall", source)

    records = [
        PhenoRecord(
            date=d.date(),
            tree_id=t,
            species=s,
            lfall_pct=None if np.isnan(v) else float(v)
        )
        for d, t, s, v in zip(dates, trees, species, lfall)
    ]
    logger.debug(f"parsed {len(records)} phenology record(s) from {source or 'stream'}")
    return records


def parse_sites_csv(text: TextSource, source: Optional[str] = None) -> List[SiteCoordinate]:
    """
    Parse the site table (tree_id,lat,lon).

    Raises:
        ParseError: non-numeric or out-of-range coordinate, missing column
    """
    frame = _read_table(text, SITE_COLUMNS, source)
    trees = _check_identifiers(frame, "tree_id", source)
    lat = _parse_numbers(frame, "lat", source)
    lon = _parse_numbers(frame, "lon", source)
    _check_range(lat, -90.0, 90.0, "lat", source)
    _check_range(lon, -180.0, 180.0, "lon", source)

    return [SiteCoordinate(t, float(a), float(o)) for t, a, o in zip(trees, lat, lon)]


def parse_era5_csv(
    text: TextSource,
    selected_features: Sequence[str],
    rename: Optional[Mapping[str, str]] = None,
    source: Optional[str] = None
) -> List[Era5Record]:
    """
    Parse the reanalysis CSV (date,<feature>,...) keeping selected columns.

    Args:
        text: CSV text or stream
        selected_features: Source column names to keep, in output order
        rename: Optional source -> feature name map
        source: File name for messages

    Returns:
        One record per day, ordered by date

    Raises:
        ParseError: selected column absent, bad date or value
        DuplicateError: a date appears twice
        DataError: the dates have a gap
    """
    frame = _read_table(text, ["date"], source)
    for feature in selected_features:
        if feature not in frame.columns:
            raise ParseError("selected feature not in file", row=1, column=feature, source=source)

    dates = _parse_dates(frame, "date", source)
    rename = dict(rename or {})
    columns = {rename.get(f, f): _parse_numbers(frame, f, source).to_numpy() for f in selected_features}

    order = np.argsort(dates.to_numpy(), kind="stable")
    days = dates.to_numpy()[order].astype("datetime64[D]")
    steps = np.diff(days).astype(int)
    if (steps == 0).any():
        k = int(np.flatnonzero(steps == 0)[0])
        raise DuplicateError(f"{source or 'era5'}: date {days[k]} appears twice")
    if (steps > 1).any():
        k = int(np.flatnonzero(steps > 1)[0])
        raise DataError(
            f"{source or 'era5'}: {steps[k] - 1} missing day(s) between {days[k]} and {days[k + 1]}"
        )

    return [
        Era5Record(
            date=pd.Timestamp(days[j]).date(),
            features={name: float(values[k]) for name, values in columns.items()}
        )
        for j, k in enumerate(order)
    ]


def write_era5_csv(records: Sequence[Era5Record], target: Union[str, TextIO]) -> None:
    frame = pd.DataFrame([{"date": r.date.isoformat(), **r.features} for r in records])
    _write(frame, target)


def write_pheno_csv(records: Sequence[PhenoRecord], target: Union[str, TextIO]) -> None:
    frame = pd.DataFrame({
        "date": [r.date.isoformat() for r in records],
        "tree_id": [r.tree_id for r in records],
        "species": [r.species for r in records],
        "lfall": ["" if r.lfall_pct is None else repr(r.lfall_pct) for r in records],
    }, columns=PHENO_COLUMNS)
    _write(frame, target)


def write_sites_csv(sites: Sequence[SiteCoordinate], target: Union[str, TextIO]) -> None:
    frame = pd.DataFrame(
        [(s.tree_id, s.lat, s.lon) for s in sites], columns=SITE_COLUMNS
    )
    _write(frame, target)


# ==========================================
# Daily series
# ==========================================

def write_daily_series_csv(series: Sequence[DailyLeafSeries], target: Union[str, TextIO]) -> None:
    """Export daily series as tree_id,species,date,lfall,label."""
    frames = [
        pd.DataFrame({
            "tree_id": s.tree_id,
            "species": s.species,
            "date": s.dates.strftime(DATE_FORMAT),
            "lfall": [repr(float(v)) for v in s.values],
            "label": _bool_text(s.labels),
        }, columns=DAILY_COLUMNS)
        for s in series
    ]
    frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=DAILY_COLUMNS)
    _write(frame, target)


def read_daily_series_csv(text: TextSource, source: Optional[str] = None) -> List[DailyLeafSeries]:
    """
    Inverse of write_daily_series_csv.

    Raises:
        ParseError: malformed cell
        DataError: a tree's dates are not contiguous
    """
    frame = _read_table(text, DAILY_COLUMNS, source)
    frame["date"] = _parse_dates(frame, "date", source)
    frame["lfall"] = _parse_numbers(frame, "lfall", source)
    _check_range(frame["lfall"], 0.0, 100.0, "lfall", source)
    frame["label"] = _parse_bools(frame, "label", source)

    series = []
    for tree_id, rows in frame.groupby("tree_id", sort=False):
        days = rows["date"].to_numpy(dtype="datetime64[D]")
        if len(days) > 1 and (np.diff(days) != np.timedelta64(1, "D")).any():
            raise DataError(f"{source or 'daily series'}: dates of tree {tree_id} are not contiguous")
        species = rows["species"].iloc[0]
        series.append(DailyLeafSeries(
            tree_id=str(tree_id),
            species=species,
            start_date=rows["date"].iloc[0].date(),
            values=rows["lfall"].to_numpy(dtype=np.float64),
            labels=rows["label"].to_numpy(dtype=bool)
        ))
    return series


# ==========================================
# Feature table
# ==========================================

def write_feature_table(table: FeatureTable, target: Union[str, TextIO], include_species: bool = False) -> None:
    """
    Export feature rows as tree_id,date[,species],<features>,label.

    Floats are written with round-trip precision.
    """
    columns = ["tree_id", "date"] + (["species"] if include_species else []) + table.feature_names
    frame = table.frame[columns].copy()
    frame["date"] = frame["date"].dt.strftime(DATE_FORMAT)
    for name in table.feature_names:
        frame[name] = [repr(float(v)) for v in frame[name]]
    frame["label"] = _bool_text(table.frame["label"])
    _write(frame, target)


def read_feature_table(
    text: TextSource,
    numeric_columns: Sequence[str],
    species_columns: Sequence[str] = (),
    source: Optional[str] = None
) -> FeatureTable:
    """
    Inverse of write_feature_table.

    Raises:
        ParseError: a declared feature column is missing or malformed
    """
    required = ["tree_id", "date"] + list(numeric_columns) + list(species_columns) + ["label"]
    raw = _read_table(text, required, source)

    frame = pd.DataFrame({
        "tree_id": _check_identifiers(raw, "tree_id", source),
        "date": _parse_dates(raw, "date", source),
        "species": raw["species"] if "species" in raw.columns else "",
    })
    for name in list(numeric_columns) + list(species_columns):
        frame[name] = _parse_numbers(raw, name, source).to_numpy()
    frame["label"] = _parse_bools(raw, "label", source)

    return FeatureTable(
        frame=frame,
        numeric_columns=list(numeric_columns),
        species_columns=list(species_columns)
    )


# ==========================================
# Training and tuning exports
# ==========================================

def write_metrics_csv(metrics: Sequence, target: Union[str, TextIO]) -> None:
    """Per-epoch metrics as epoch,train_loss,train_acc,val_loss,val_acc."""
    frame = pd.DataFrame(
        [(m.epoch, m.train_loss, m.train_acc, m.val_loss, m.val_acc) for m in metrics],
        columns=METRICS_COLUMNS
    )
    frame.to_csv(target, index=False, lineterminator="\n", float_format=ROUND_TRIP_FLOAT)


def read_metrics_csv(text: TextSource, source: Optional[str] = None) -> pd.DataFrame:
    frame = _read_table(text, METRICS_COLUMNS, source)
    result = pd.DataFrame({"epoch": _parse_numbers(frame, "epoch", source).astype(int)})
    for column in METRICS_COLUMNS[1:]:
        result[column] = _parse_numbers(frame, column, source, allow_empty=True).to_numpy()
    return result


def write_tune_report_csv(records: Sequence, target: Union[str, TextIO]) -> None:
    """Tune report rows as trial_id,bracket,round,epochs,config_json,val_loss,eliminated."""
    frame = pd.DataFrame(
        [
            (r.trial_id, r.bracket, r.round, r.epochs, r.config_json, r.val_loss, "true" if r.eliminated else "false")
            for r in records
        ],
        columns=TUNE_COLUMNS
    )
    frame.to_csv(target, index=False, lineterminator="\n", float_format=ROUND_TRIP_FLOAT)


# ==========================================
# Evaluation exports
# ==========================================

def write_classification_csv(report: ClassificationReport, target: Union[str, TextIO]) -> None:
    """Rows: leaf-fall, no-leaf-fall, accuracy, macro avg, weighted avg."""
    rows = []
    for name, scores in (("leaf-fall", report.leaf_fall), ("no-leaf-fall", report.no_leaf_fall)):
        rows.append((name, scores.precision, scores.recall, scores.f1, scores.support))
    rows.append(("accuracy", np.nan, np.nan, report.accuracy, report.total))
    for name, scores in (("macro avg", report.macro_avg), ("weighted avg", report.weighted_avg)):
        rows.append((name, scores.precision, scores.recall, scores.f1, scores.support))

    frame = pd.DataFrame(rows, columns=["class", "precision", "recall", "f1", "support"])
    frame.to_csv(target, index=False, lineterminator="\n")


def write_periods_csv(
    predicted: Sequence[PeriodSummary],
    actual: Sequence[PeriodSummary],
    target: Union[str, TextIO]
) -> None:
    """
    One row per (tree_id, year) present on either side.

    Dates absent on one side and the differences they would need are
    left empty.
    """
    predicted_by_key = {(p.tree_id, p.year): p for p in predicted}
    actual_by_key = {(a.tree_id, a.year): a for a in actual}

    rows = []
    for key in sorted(set(predicted_by_key) | set(actual_by_key), key=lambda k: (k[0] == "ALL", k[0], k[1])):
        p = predicted_by_key.get(key)
        a = actual_by_key.get(key)
        rows.append({
            "tree_id": key[0],
            "year": key[1],
            "pred_start": p.start_date.isoformat() if p else "",
            "pred_end": p.end_date.isoformat() if p else "",
            "actual_start": a.start_date.isoformat() if a else "",
            "actual_end": a.end_date.isoformat() if a else "",
            "start_diff_days": abs((p.start_date - a.start_date).days) if p and a else "",
            "end_diff_days": abs((p.end_date - a.end_date).days) if p and a else "",
        })
    _write(pd.DataFrame(rows, columns=PERIOD_COLUMNS), target)


def write_rmse_csv(reports: Mapping[str, RmseReport], target: Union[str, TextIO]) -> None:
    """scope,rmse_start,rmse_end,rmse_overall,years,excluded per evaluation scope."""
    rows = [
        (scope, r.rmse_start, r.rmse_end, r.rmse_overall, len(r.start), "; ".join(r.excluded))
        for scope, r in reports.items()
    ]
    frame = pd.DataFrame(rows, columns=["scope", "rmse_start", "rmse_end", "rmse_overall", "years", "excluded"])
    frame.to_csv(target, index=False, lineterminator="\n", float_format=ROUND_TRIP_FLOAT)


def write_truth_periods_csv(periods: Sequence[PeriodSummary], target: Union[str, TextIO]) -> None:
    frame = pd.DataFrame(
        [(p.tree_id, p.year, p.start_date.isoformat(), p.end_date.isoformat()) for p in periods],
        columns=TRUTH_COLUMNS
    )
    _write(frame, target)


def read_truth_periods_csv(text: TextSource, source: Optional[str] = None) -> List[PeriodSummary]:
    frame = _read_table(text, TRUTH_COLUMNS, source)
    starts = _parse_dates(frame, "start", source)
    ends = _parse_dates(frame, "end", source)
    years = _parse_numbers(frame, "year", source).astype(int)
    return [
        PeriodSummary(str(t), int(y), s.date(), e.date())
        for t, y, s, e in zip(frame["tree_id"], years, starts, ends)
    ]


def write_predictions_csv(
    tree_ids: Sequence[str],
    dates: np.ndarray,
    probabilities: np.ndarray,
    labels: np.ndarray,
    target: Union[str, TextIO]
) -> None:
    """Per-example tree_id,date,probability,label."""
    frame = pd.DataFrame({
        "tree_id": list(tree_ids),
        "date": pd.DatetimeIndex(dates).strftime(DATE_FORMAT),
        "probability": np.asarray(probabilities, dtype=np.float64),
        "label": _bool_text(labels),
    })
    frame.to_csv(target, index=False, lineterminator="\n", float_format=ROUND_TRIP_FLOAT)


def write_daily_comparison_csv(comparison: pd.DataFrame, target: Union[str, TextIO]) -> None:
    """tree_id,date,probability,predicted,actual rows."""
    frame = comparison.copy()
    frame["date"] = pd.DatetimeIndex(frame["date"]).strftime(DATE_FORMAT)
    frame["predicted"] = _bool_text(frame["predicted"])
    frame["actual"] = _bool_text(frame["actual"])
    frame[["tree_id", "date", "probability", "predicted", "actual"]].to_csv(
        target, index=False, lineterminator="\n", float_format=ROUND_TRIP_FLOAT
    )


def write_scene_stats_csv(stats: Mapping, target: Union[str, TextIO]) -> None:
    """
    Scene statistics keyed by (date, name).

    Args:
        stats: {(date, raster name): GridStatistics}
    """
    rows = []
    for (day, name), s in sorted(stats.items(), key=lambda item: (item[0][0], item[0][1])):
        rows.append((
            day.isoformat() if isinstance(day, date) else str(day),
            name, s.valid_cells, s.cloud_fraction, s.mean, s.minimum, s.maximum
        ))
    frame = pd.DataFrame(rows, columns=["date", "raster", "valid_cells", "cloud_fraction", "mean", "min", "max"])
    _write(frame, target)


def write_trajectory_csv(curves: Mapping[str, TrajectoryCurve], target: Union[str, TextIO]) -> None:
    """day_of_year plus one mean lfall column per species."""
    frame = pd.DataFrame({"day_of_year": np.arange(1, 366)})
    for species, curve in curves.items():
        frame[species] = curve.values
    frame.to_csv(target, index=False, lineterminator="\n", float_format="%.4f")
