"""
Feature Rules

Joins leaf-fall, index and weather series into per-tree daily rows,
then encodes, scales and windows them into supervised examples.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import CoverageError, DataError
from .models import (
    DailyLeafSeries,
    Era5Record,
    FeatureTable,
    IndexKind,
    IndexSeries,
    ScalerParams,
    WindowedDataset,
)

logger = logging.getLogger(__name__)

WEEK_COLUMN = "week_of_year"
SPECIES_PREFIX = "species_"
DEFAULT_WINDOW = 7


def join_sources(
    leaf: Sequence[DailyLeafSeries],
    indices: Iterable[IndexSeries],
    weather: Sequence[Era5Record],
    index_kinds: Sequence[IndexKind] = tuple(IndexKind)
) -> FeatureTable:
    """
    One row per (tree, day) with index and weather columns.

    Weather comes from a single reanalysis pixel, so every tree gets the
    same weather values on a given day.

    Raises:
        CoverageError: lists every (tree, date, source) that is missing
    """
    kinds = [IndexKind(k) for k in index_kinds]
    by_tree: Dict[Tuple[str, IndexKind], IndexSeries] = {}
    for series in indices:
        by_tree[(series.tree_id, IndexKind(series.index_kind))] = series

    weather_frame = pd.DataFrame(
        [r.features for r in weather],
        index=pd.DatetimeIndex([pd.Timestamp(r.date) for r in weather])
    )
    weather_columns = list(weather_frame.columns)

    missing: List[Tuple[str, str, str]] = []
    frames = []
    for tree in leaf:
        dates = tree.dates
        frame = pd.DataFrame({
            "tree_id": tree.tree_id,
            "date": dates,
            "species": tree.species,
        })

        for kind in kinds:
            series = by_tree.get((tree.tree_id, kind))
            if series is None:
                missing.append((tree.tree_id, "*", kind.value))
                continue
            values = pd.Series(series.values, index=series.dates).reindex(dates)
            for day in dates[values.isna().to_numpy()]:
                missing.append((tree.tree_id, day.date().isoformat(), kind.value))
            frame[kind.column] = values.to_numpy()

        aligned = weather_frame.reindex(dates)
        for day in dates[aligned.isna().any(axis=1).to_numpy()]:
            missing.append((tree.tree_id, day.date().isoformat(), "era5"))
        for column in weather_columns:
            frame[column] = aligned[column].to_numpy()

        frame["label"] = tree.labels
        frames.append(frame)

    if missing:
        raise CoverageError(missing)
    if not frames:
        raise DataError("no trees to join")

    table = pd.concat(frames, ignore_index=True)
    if table.duplicated(["tree_id", "date"]).any():
        raise DataError("duplicate (tree_id, date) rows after join")

    numeric = [k.column for k in kinds] + weather_columns
    logger.info(f"  Joined {len(leaf)} tree(s) x {len(table) // max(len(leaf), 1)} day(s), {len(numeric)} numeric column(s)")
    return FeatureTable(frame=table, numeric_columns=numeric)


def week_of_year(day_of_year: np.ndarray) -> np.ndarray:
    """floor((day_of_year - 1) / 7) + 1, capped at 52."""
    return np.minimum((np.asarray(day_of_year) - 1) // 7 + 1, 52)


def add_week_of_year(table: FeatureTable) -> FeatureTable:
    """Append the numeric week_of_year column (scaled later with the others)."""
    frame = table.frame.copy()
    frame[WEEK_COLUMN] = week_of_year(frame["date"].dt.dayofyear.to_numpy()).astype(np.float64)

    numeric = [c for c in table.numeric_columns if c != WEEK_COLUMN] + [WEEK_COLUMN]
    return table.replace(frame=frame, numeric_columns=numeric)


def fit_species(table: FeatureTable, fit_rows: Optional[np.ndarray] = None) -> List[str]:
    """Species codes seen on the fitting rows, lexicographically ordered."""
    species = table.frame["species"]
    if fit_rows is not None:
        species = species[np.asarray(fit_rows)]
    return sorted(set(species))


def one_hot_species(table: FeatureTable, species: Optional[Sequence[str]] = None) -> FeatureTable:
    """
    One binary column per known species.

    Rows of a species missing from `species` get all zeros and the
    table gets a warning.

    Args:
        table: Table with a species column
        species: Codes seen when fitting; defaults to every code in the table
    """
    codes = sorted(species) if species is not None else fit_species(table)
    frame = table.frame.copy()
    columns = [f"{SPECIES_PREFIX}{code}" for code in codes]

    for code, column in zip(codes, columns):
        frame[column] = (frame["species"] == code).astype(np.float64)

    warnings = list(table.warnings)
    unseen = sorted(set(frame["species"]) - set(codes))
    if unseen:
        message = f"species not seen when fitting, encoded as all zeros: {', '.join(unseen)}"
        logger.warning(message)
        warnings.append(message)

    return table.replace(frame=frame, species_columns=columns, warnings=warnings)


def fit_minmax(table: FeatureTable, fit_rows: np.ndarray) -> ScalerParams:
    """
    Per numeric column min and max over the fitting rows only.

    Args:
        table: Feature table
        fit_rows: Boolean mask (or index array) selecting the fitting rows
    """
    rows = np.asarray(fit_rows)
    numeric = table.frame[table.numeric_columns]
    subset = numeric.loc[rows] if rows.dtype == bool else numeric.iloc[rows]
    if subset.empty:
        raise ValueError("fit_minmax needs at least one fitting row")

    return ScalerParams(
        minimums={c: float(subset[c].min()) for c in table.numeric_columns},
        maximums={c: float(subset[c].max()) for c in table.numeric_columns}
    )


def apply_minmax(table: FeatureTable, params: ScalerParams) -> FeatureTable:
    """
    Rescale numeric columns to [0, 1].

    Constant columns (max = min) map to 0 and values outside the fitted
    range are clamped.

    Raises:
        DataError: a numeric column has no scaler parameters
    """
    frame = table.frame.copy()
    for column in table.numeric_columns:
        if column not in params.minimums:
            raise DataError(f"no scaler parameters for column '{column}'")
        low = params.minimums[column]
        span = params.maximums[column] - low
        if span == 0:
            frame[column] = 0.0
        else:
            frame[column] = np.clip((frame[column].to_numpy(dtype=np.float64) - low) / span, 0.0, 1.0)

    return table.replace(frame=frame)


def make_windows(table: FeatureTable, w: int = DEFAULT_WINDOW) -> WindowedDataset:
    """
    Sliding windows of w strictly preceding days per tree.

    Windows never span trees or date gaps; a contiguous run of n days
    yields n - w examples.
    """
    if w < 1:
        raise ValueError(f"window size must be positive, got {w}")

    names = table.feature_names
    X_parts, y_parts, tree_parts, date_parts = [], [], [], []
    warnings = list(table.warnings)

    frame = table.frame.sort_values(["tree_id", "date"], kind="mergesort")
    for tree_id, rows in frame.groupby("tree_id", sort=False):
        days = rows["date"].to_numpy(dtype="datetime64[D]")
        features = rows[names].to_numpy(dtype=np.float64)
        labels = rows["label"].to_numpy(dtype=bool)

        breaks = np.flatnonzero(np.diff(days) != np.timedelta64(1, "D")) + 1
        for start, stop in zip(np.r_[0, breaks], np.r_[breaks, len(days)]):
            n = stop - start
            if n < w + 1:
                message = f"tree {tree_id}: run of {n} day(s) from {days[start]} is shorter than {w + 1}, no examples"
                logger.warning(message)
                warnings.append(message)
                continue

            run = features[start:stop]
            windows = np.lib.stride_tricks.sliding_window_view(run, w, axis=0)[: n - w]
            X_parts.append(np.transpose(windows, (0, 2, 1)))
            y_parts.append(labels[start + w:stop])
            tree_parts.append(np.full(n - w, tree_id, dtype=object))
            date_parts.append(days[start + w:stop])

    if not X_parts:
        dataset = WindowedDataset.empty(names, w)
        dataset.warnings = warnings
        return dataset

    return WindowedDataset(
        X=np.concatenate(X_parts),
        y=np.concatenate(y_parts),
        tree_ids=np.concatenate(tree_parts),
        target_dates=np.concatenate(date_parts),
        feature_names=names,
        window_size=w,
        warnings=warnings
    )


def split_temporal(
    dataset: WindowedDataset,
    train_years: Iterable[int],
    val_year: int,
    holdout_tree: str
) -> Tuple[WindowedDataset, WindowedDataset, WindowedDataset]:
    """
    Partition examples into training years, a validation year and a holdout tree.

    The holdout set takes every example of holdout_tree across all years;
    training and validation exclude that tree.

    Raises:
        DataError: holdout_tree has no examples
    """
    is_holdout = dataset.tree_ids == holdout_tree
    if not is_holdout.any():
        raise DataError(f"holdout tree {holdout_tree} has no examples")

    years = dataset.years
    train_mask = np.isin(years, list(train_years)) & ~is_holdout
    val_mask = (years == val_year) & ~is_holdout

    train = dataset.subset(train_mask)
    val = dataset.subset(val_mask)
    holdout = dataset.subset(is_holdout)

    if len(val) == 0:
        message = f"validation year {val_year} has no examples"
        logger.warning(message)
        val.warnings.append(message)

    unused = len(dataset) - len(train) - len(val) - len(holdout)
    if unused:
        logger.warning(f"{unused} example(s) fall outside the training and validation years")

    return train, val, holdout
