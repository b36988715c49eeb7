"""
Raster Rules

Normalized-difference indices, nearest-cell sampling at tree positions
and daily gap filling of the sampled values.
"""

import logging
import math
from datetime import date
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from ..errors import DataError, GridError
from .models import BandGrid, GridStatistics, IndexKind, IndexSample, IndexSeries

logger = logging.getLogger(__name__)


# Band pairs (a, b) of nd(a, b) = (a - b) / (a + b)
INDEX_BANDS: Dict[IndexKind, Tuple[str, str]] = {
    IndexKind.NDVI: ("NIR", "RED"),
    IndexKind.NDWI: ("GREEN", "NIR"),
    IndexKind.NDMI: ("NIR", "SWIR"),
}

# Sentinel-2 MSI band names accepted in place of the generic ones
BAND_ALIASES = {
    "B8": "NIR",
    "B4": "RED",
    "B3": "GREEN",
    "B11": "SWIR",
}


def canonical_band(name: str) -> str:
    """Map a band file prefix to the generic band name."""
    upper = name.upper()
    return BAND_ALIASES.get(upper, upper)


def normalized_difference(a: BandGrid, b: BandGrid) -> BandGrid:
    """
    Cellwise (a - b) / (a + b).

    Cells are missing where either input is missing or a + b = 0.

    Raises:
        GridError: grids differ in shape or georeference
    """
    if not a.same_georeference(b):
        raise GridError(
            f"grids do not align: {a.ncols}x{a.nrows}@({a.xll}, {a.yll}, {a.cellsize}) "
            f"vs {b.ncols}x{b.nrows}@({b.xll}, {b.yll}, {b.cellsize})"
        )

    with np.errstate(divide="ignore", invalid="ignore"):
        total = a.cells + b.cells
        result = (a.cells - b.cells) / total
    result[total == 0] = np.nan

    return a.with_cells(result)


def compute_index(kind: IndexKind, bands: Mapping[str, BandGrid]) -> BandGrid:
    """
    Compute NDVI, NDWI or NDMI from named band grids.

    Raises:
        GridError: a required band is absent
    """
    kind = IndexKind(kind)
    available = {canonical_band(name): grid for name, grid in bands.items()}
    first, second = INDEX_BANDS[kind]

    for band in (first, second):
        if band not in available:
            raise GridError(f"{kind.value} needs band {band}, available: {sorted(available)}")

    return normalized_difference(available[first], available[second])


def sample_at(grid: BandGrid, y: float, x: float) -> Optional[float]:
    """
    Value of the cell whose center is nearest (x, y).

    On a boundary between two cells the lower row / column index wins.

    Returns:
        Cell value, or None when that cell is nodata

    Raises:
        GridError: the point lies outside the grid extent
    """
    x_max = grid.xll + grid.ncols * grid.cellsize
    y_max = grid.yll + grid.nrows * grid.cellsize
    if not (grid.xll <= x <= x_max and grid.yll <= y <= y_max):
        raise GridError(
            f"point (x={x}, y={y}) outside grid extent "
            f"x[{grid.xll}, {x_max}] y[{grid.yll}, {y_max}]"
        )

    col = math.ceil((x - grid.xll) / grid.cellsize) - 1
    row = math.ceil((y_max - y) / grid.cellsize) - 1
    col = min(max(col, 0), grid.ncols - 1)
    row = min(max(row, 0), grid.nrows - 1)

    value = grid.cells[row, col]
    return None if np.isnan(value) else float(value)


def grid_statistics(grid: BandGrid) -> GridStatistics:
    """Valid-cell count, nodata fraction and value range of a scene."""
    valid = grid.values[~np.isnan(grid.values)]
    total = grid.values.size
    if valid.size == 0:
        return GridStatistics(0, 1.0, None, None, None)
    return GridStatistics(
        valid_cells=int(valid.size),
        cloud_fraction=1.0 - valid.size / total,
        mean=float(valid.mean()),
        minimum=float(valid.min()),
        maximum=float(valid.max())
    )


def build_index_series(
    samples: Iterable[IndexSample],
    tree_id: str,
    first_year: int,
    last_year: int
) -> IndexSeries:
    """
    Daily index values of one tree, gaps filled by linear interpolation.

    Missing samples (clouds, nodata) are ignored. Days before the first
    and after the last usable sample hold the nearest sample value.
    Several usable samples on one date are averaged.

    Raises:
        DataError: fewer than two usable samples in the range, or samples
            of more than one index kind
    """
    start = date(first_year, 1, 1)
    end = date(last_year, 12, 31)

    by_day: Dict[int, List[float]] = {}
    kinds = set()
    for sample in samples:
        kinds.add(IndexKind(sample.index_kind))
        if sample.value is None or not start <= sample.date <= end:
            continue
        by_day.setdefault((sample.date - start).days, []).append(sample.value)

    if len(kinds) > 1:
        raise DataError(f"samples of several index kinds for tree {tree_id}: {sorted(k.value for k in kinds)}")
    if len(by_day) < 2:
        kind_name = kinds.pop().value if kinds else "index"
        raise DataError(
            f"tree {tree_id}: {len(by_day)} usable {kind_name} sample(s) in "
            f"{first_year}-{last_year}, at least 2 required"
        )

    xp = np.array(sorted(by_day), dtype=np.float64)
    fp = np.array([np.mean(by_day[int(d)]) for d in xp], dtype=np.float64)
    days = (end - start).days + 1

    return IndexSeries(
        tree_id=tree_id,
        index_kind=kinds.pop(),
        start_date=start,
        values=np.interp(np.arange(days, dtype=np.float64), xp, fp)
    )

