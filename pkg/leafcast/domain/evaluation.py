"""
Evaluation Rules

Classification scores, leaf-fall period extraction, boundary RMSE and
per-species trajectory curves.
"""

import logging
import math
from datetime import date
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import precision_recall_fscore_support

from ..errors import DataError
from .models import (
    ClassificationReport,
    ClassScores,
    DailyLeafSeries,
    PeriodSummary,
    RmseReport,
    TrajectoryCurve,
    YearDifference,
)

logger = logging.getLogger(__name__)

AGGREGATE_TREE = "ALL"
DAYS_IN_CURVE = 365
FEB_28_INDEX = 58


def classification_report(y_true: Sequence[bool], y_pred: Sequence[bool]) -> ClassificationReport:
    """
    Per-class precision, recall, F1 and support.

    Zero denominators give 0 and log a warning. Macro is the unweighted
    mean of the two classes, weighted is the support-weighted mean.

    Raises:
        DataError: lengths differ
        ValueError: no examples
    """
    truth = np.asarray(y_true, dtype=bool)
    predicted = np.asarray(y_pred, dtype=bool)
    if truth.shape != predicted.shape:
        raise DataError(f"y_true has {truth.size} labels but y_pred has {predicted.size}")
    if truth.size == 0:
        raise ValueError("classification_report needs at least one example")

    precision, recall, f1, support = precision_recall_fscore_support(
        truth, predicted, labels=[True, False], zero_division=0
    )

    for label, name in ((True, "leaf-fall"), (False, "no leaf-fall")):
        if not (predicted == label).any():
            logger.warning(f"no '{name}' predictions: precision set to 0")
        if not (truth == label).any():
            logger.warning(f"no '{name}' examples: recall set to 0")

    scores = [
        ClassScores(float(precision[k]), float(recall[k]), float(f1[k]), int(support[k]))
        for k in range(2)
    ]
    total = int(support.sum())
    weights = support / total

    macro = ClassScores(
        precision=float(np.mean(precision)),
        recall=float(np.mean(recall)),
        f1=float(np.mean(f1)),
        support=total
    )
    weighted = ClassScores(
        precision=float(np.sum(precision * weights)),
        recall=float(np.sum(recall * weights)),
        f1=float(np.sum(f1 * weights)),
        support=total
    )

    return ClassificationReport(
        leaf_fall=scores[0],
        no_leaf_fall=scores[1],
        accuracy=float(np.mean(truth == predicted)),
        macro_avg=macro,
        weighted_avg=weighted
    )


def _main_run(true_days: pd.DatetimeIndex, max_gap_days: int) -> Tuple[pd.Timestamp, pd.Timestamp]:
    """Longest run of true days once gaps of at most max_gap_days are closed; ties go to the earlier run."""
    gaps = np.asarray((true_days[1:] - true_days[:-1]).days) - 1
    breaks = np.flatnonzero(gaps > max_gap_days)
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [len(true_days) - 1]])
    spans = np.asarray((true_days[ends] - true_days[starts]).days)
    best = int(np.argmax(spans))
    return true_days[starts[best]], true_days[ends[best]]


def extract_periods(labels: pd.Series, tree_id: str = "", max_gap_days: Optional[int] = None) -> List[PeriodSummary]:
    """
    Leaf-fall period per calendar year.

    By default the period is the outer envelope: first and last true day
    of the year, without smoothing. With max_gap_days set, false gaps of
    at most that many days are closed and only the longest resulting run
    counts, so isolated positives away from the autumn transition do not
    move the boundaries. Years without a true day produce no summary.

    Args:
        labels: Boolean labels indexed by date
        tree_id: Tree the labels belong to
        max_gap_days: Gap closing width for the main-run rule, None for the envelope

    Raises:
        ValueError: negative max_gap_days
    """
    if max_gap_days is not None and max_gap_days < 0:
        raise ValueError(f"max_gap_days must be non-negative, got {max_gap_days}")
    index = pd.DatetimeIndex(labels.index)
    flags = np.asarray(labels, dtype=bool)
    true_days = index[flags].sort_values()

    summaries = []
    for year in sorted(set(true_days.year)):
        in_year = true_days[true_days.year == year]
        if max_gap_days is None:
            start, end = in_year.min(), in_year.max()
        else:
            start, end = _main_run(in_year, max_gap_days)
        summaries.append(PeriodSummary(
            tree_id=tree_id,
            year=int(year),
            start_date=start.date(),
            end_date=end.date()
        ))
    return summaries


def aggregate_periods(per_tree: Iterable[PeriodSummary]) -> List[PeriodSummary]:
    """Earliest start and latest end per year across trees."""
    by_year: Dict[int, Tuple[date, date]] = {}
    for period in per_tree:
        if period.year in by_year:
            start, end = by_year[period.year]
            by_year[period.year] = (min(start, period.start_date), max(end, period.end_date))
        else:
            by_year[period.year] = (period.start_date, period.end_date)

    return [
        PeriodSummary(AGGREGATE_TREE, year, start, end)
        for year, (start, end) in sorted(by_year.items())
    ]


def _rmse(differences: Sequence[int]) -> float:
    return math.sqrt(sum(d * d for d in differences) / len(differences))


def rmse_report(
    predicted: Iterable[PeriodSummary],
    actual: Iterable[PeriodSummary]
) -> RmseReport:
    """
    Start / end boundary differences in whole days and their RMSE.

    Periods are matched on (tree_id, year). Keys present on one side only
    are excluded and listed in the report.

    Raises:
        DataError: no (tree_id, year) appears on both sides
    """
    predicted_by_key = {(p.tree_id, p.year): p for p in predicted}
    actual_by_key = {(a.tree_id, a.year): a for a in actual}

    shared = sorted(set(predicted_by_key) & set(actual_by_key))
    excluded = [
        f"{tree}:{year} ({'predicted only' if (tree, year) in predicted_by_key else 'actual only'})"
        for tree, year in sorted(set(predicted_by_key) ^ set(actual_by_key))
    ]
    if not shared:
        raise DataError("predicted and actual periods share no year")
    if excluded:
        logger.warning(f"years excluded from RMSE: {', '.join(excluded)}")

    start = [
        YearDifference(t, y, predicted_by_key[(t, y)].start_date, actual_by_key[(t, y)].start_date)
        for t, y in shared
    ]
    end = [
        YearDifference(t, y, predicted_by_key[(t, y)].end_date, actual_by_key[(t, y)].end_date)
        for t, y in shared
    ]
    start_diffs = [d.difference_days for d in start]
    end_diffs = [d.difference_days for d in end]

    return RmseReport(
        start=start,
        end=end,
        rmse_start=_rmse(start_diffs),
        rmse_end=_rmse(end_diffs),
        rmse_overall=_rmse(start_diffs + end_diffs),
        excluded=excluded
    )


def _fold_year(values: pd.Series, year: int) -> np.ndarray:
    """
    365 bins of one calendar year; Feb 29 is averaged into Feb 28.

    Days the series does not cover stay NaN, so partial years line up
    with full ones.
    """
    calendar = pd.date_range(date(year, 1, 1), date(year, 12, 31), freq="D")
    full = values.reindex(calendar).to_numpy(dtype=np.float64)
    if len(full) == DAYS_IN_CURVE:
        return full
    pair = full[FEB_28_INDEX:FEB_28_INDEX + 2]
    known = pair[~np.isnan(pair)]
    merged = known.mean() if len(known) else np.nan
    return np.concatenate([full[:FEB_28_INDEX], [merged], full[FEB_28_INDEX + 2:]])


def _mean_ignoring_gaps(curves: List[np.ndarray]) -> np.ndarray:
    stacked = np.stack(curves)
    known = ~np.isnan(stacked)
    counts = known.sum(axis=0)
    totals = np.where(known, stacked, 0.0).sum(axis=0)
    return np.where(counts > 0, totals / np.maximum(counts, 1), np.nan)


def trajectory_summary(series: Iterable[DailyLeafSeries]) -> Dict[str, TrajectoryCurve]:
    """
    Mean leaf-fall percentage per day of year for each species.

    Every (tree, year) contributes one folded 365-day curve. Days of the
    year no series covers are NaN.
    """
    by_species: Dict[str, List[np.ndarray]] = {}
    counts: Dict[str, int] = {}
    for tree in series:
        frame = pd.Series(tree.values, index=tree.dates)
        for year, values in frame.groupby(frame.index.year):
            by_species.setdefault(tree.species, []).append(_fold_year(values, int(year)))
        counts[tree.species] = counts.get(tree.species, 0) + 1

    return {
        species: TrajectoryCurve(
            species=species,
            values=np.clip(_mean_ignoring_gaps(curves), 0.0, 100.0),
            series_count=counts[species]
        )
        for species, curves in sorted(by_species.items())
    }
