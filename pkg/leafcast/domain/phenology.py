"""
Phenology Rules

Turns sparse weekly leaf-fall observations into continuous daily
labeled series and joins trees to their estimated coordinates.

No I/O here - parsers live in adapters.csv_adapter.
"""

import logging
from dataclasses import replace
from datetime import date
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..errors import DataError, DuplicateError
from .models import DailyLeafSeries, PhenoRecord, SiteCoordinate

logger = logging.getLogger(__name__)

AUTUMN_START_MONTH = 9


def filter_years(
    records: Iterable[PhenoRecord],
    first_year: int,
    last_year: int
) -> List[PhenoRecord]:
    """
    Keep records dated within [first_year, last_year], order preserved.

    Examples:
        2014-11-01, 2015-09-01 filtered to [2015, 2022] -> only the 2015 record
    """
    if first_year > last_year:
        raise ValueError(f"first_year {first_year} is after last_year {last_year}")
    return [r for r in records if first_year <= r.date.year <= last_year]


def _year_values(tree_id: str, year: int, observations: Dict[date, float]) -> Tuple[np.ndarray, bool]:
    """
    Daily values of one calendar year.

    Jan 1 - Aug 31 are 0. Sep 1 - Dec 31 interpolate linearly between an
    implicit 0 on Aug 31 and the observations, holding the last
    observation through Dec 31.

    Returns:
        Tuple of (values, had_observations)
    """
    jan1 = date(year, 1, 1)
    days = (date(year, 12, 31) - jan1).days + 1
    values = np.zeros(days, dtype=np.float64)

    aug31 = (date(year, AUTUMN_START_MONTH, 1) - jan1).days - 1
    points = sorted(
        ((d - jan1).days, v) for d, v in observations.items()
        if d.year == year and d.month >= AUTUMN_START_MONTH
    )

    ignored = sum(1 for d in observations if d.year == year and d.month < AUTUMN_START_MONTH)
    if ignored:
        logger.debug(f"{tree_id} {year}: {ignored} pre-September observations ignored")

    if not points:
        return values, False

    xp = np.array([aug31] + [p[0] for p in points], dtype=np.float64)
    fp = np.array([0.0] + [p[1] for p in points], dtype=np.float64)

    autumn_days = np.arange(aug31 + 1, days, dtype=np.float64)
    values[aug31 + 1:] = np.interp(autumn_days, xp, fp)

    return np.clip(values, 0.0, 100.0), True


def to_daily_series(
    records: Sequence[PhenoRecord],
    first_year: int,
    last_year: int
) -> DailyLeafSeries:
    """
    Build the daily leaf-fall series of one tree over whole calendar years.

    Observations with a missing percentage are skipped. Years without any
    autumn observation become all zeros and add a warning.

    Args:
        records: Observations of a single tree
        first_year, last_year: Inclusive year range

    Returns:
        DailyLeafSeries with labels derived from the values

    Raises:
        DuplicateError: two records share a date
        DataError: records belong to more than one tree, or none given
    """
    if first_year > last_year:
        raise ValueError(f"first_year {first_year} is after last_year {last_year}")
    if not records:
        raise DataError("cannot build a daily series from zero records")

    tree_id = records[0].tree_id
    species = records[0].species

    observations: Dict[date, float] = {}
    seen = set()
    for record in records:
        if record.tree_id != tree_id:
            raise DataError(f"records of trees {tree_id} and {record.tree_id} mixed in one series")
        if record.species != species:
            raise DataError(f"tree {tree_id} listed as both {species} and {record.species}")
        if record.date in seen:
            raise DuplicateError(f"duplicate observation for tree {tree_id} on {record.date.isoformat()}")
        seen.add(record.date)
        if record.lfall_pct is not None:
            observations[record.date] = float(record.lfall_pct)

    chunks = []
    warnings = []
    for year in range(first_year, last_year + 1):
        values, had_observations = _year_values(tree_id, year, observations)
        if not had_observations:
            message = f"tree {tree_id}: no autumn observations in {year}, year kept as all zeros"
            logger.warning(message)
            warnings.append(message)
        chunks.append(values)

    values = np.concatenate(chunks)
    series = DailyLeafSeries(
        tree_id=tree_id,
        species=species,
        start_date=date(first_year, 1, 1),
        values=values,
        labels=np.zeros(len(values), dtype=bool),
        warnings=warnings
    )
    return derive_labels(series)


def derive_labels(series: DailyLeafSeries) -> DailyLeafSeries:
    """
    Label leaf-falling days: 0 < value < 100 (both bounds strict).

    Examples:
        [0, 0, 50, 100] -> [False, False, True, False]
    """
    labels = (series.values > 0.0) & (series.values < 100.0)
    return replace(series, labels=labels, warnings=list(series.warnings))


def group_by_tree(records: Iterable[PhenoRecord]) -> Dict[str, List[PhenoRecord]]:
    """Group records by tree id, keeping first-seen tree order."""
    grouped: Dict[str, List[PhenoRecord]] = {}
    for record in records:
        grouped.setdefault(record.tree_id, []).append(record)
    return grouped


def attach_coordinates(
    trees: Iterable[str],
    sites: Iterable[SiteCoordinate]
) -> Tuple[Dict[str, SiteCoordinate], List[str]]:
    """
    Join trees to their estimated coordinates.

    Returns:
        Tuple of (tree_id -> SiteCoordinate, dropped tree ids in input order)

    Raises:
        DuplicateError: a tree id appears twice in the site table
    """
    by_tree: Dict[str, SiteCoordinate] = {}
    for site in sites:
        if site.tree_id in by_tree:
            raise DuplicateError(f"tree {site.tree_id} listed twice in the site table")
        by_tree[site.tree_id] = site

    located: Dict[str, SiteCoordinate] = {}
    dropped: List[str] = []
    for tree_id in trees:
        if tree_id in by_tree:
            located[tree_id] = by_tree[tree_id]
        elif tree_id not in dropped:
            dropped.append(tree_id)

    if dropped:
        logger.warning(f"{len(dropped)} tree(s) without coordinates dropped: {', '.join(dropped)}")

    return located, dropped
