from datetime import date

import numpy as np
import pytest

from leafcast.domain.models import BandGrid, IndexKind, IndexSample
from leafcast.domain.raster import (
    build_index_series,
    compute_index,
    grid_statistics,
    normalized_difference,
    sample_at,
)
from leafcast.errors import DataError, GridError


def _grid(cells, xll=0.0, yll=0.0, cellsize=1.0):
    cells = np.asarray(cells, dtype=np.float64)
    return BandGrid(cells.shape[1], cells.shape[0], xll, yll, cellsize, -9999.0, cells)


def test_ndvi_from_bands():
    nir = _grid([[0.5, 0.4]])
    red = _grid([[0.1, 0.4]])
    ndvi = compute_index(IndexKind.NDVI, {"NIR": nir, "RED": red})
    assert ndvi.cells[0, 0] == pytest.approx(0.4 / 0.6)
    assert ndvi.cells[0, 1] == 0.0


def test_band_aliases_are_accepted():
    ndmi = compute_index(IndexKind.NDMI, {"B8": _grid([[0.5]]), "B11": _grid([[0.3]])})
    assert ndmi.cells[0, 0] == pytest.approx(0.25)


def test_zero_denominator_and_missing_inputs_become_nodata():
    result = normalized_difference(_grid([[0.0, np.nan]]), _grid([[0.0, 0.3]]))
    assert np.isnan(result.cells).all()


def test_misaligned_grids_raise():
    with pytest.raises(GridError):
        normalized_difference(_grid([[0.5]]), _grid([[0.5]], xll=1.0))


def test_missing_band_raises():
    with pytest.raises(GridError, match="SWIR"):
        compute_index(IndexKind.NDMI, {"NIR": _grid([[0.5]])})


def test_sample_at_nearest_center_top_row_first():
    grid = _grid([[1.0, 2.0], [3.0, 4.0]])
    assert sample_at(grid, 1.5, 0.5) == 1.0
    assert sample_at(grid, 0.5, 1.5) == 4.0


def test_sample_at_boundary_takes_lower_index():
    grid = _grid([[1.0, 2.0], [3.0, 4.0]])
    assert sample_at(grid, 1.5, 1.0) == 1.0
    assert sample_at(grid, 1.0, 0.5) == 1.0


def test_sample_at_nodata_is_none():
    assert sample_at(_grid([[np.nan]]), 0.5, 0.5) is None


def test_sample_outside_extent_raises():
    with pytest.raises(GridError):
        sample_at(_grid([[1.0]]), 0.5, 2.0)


def test_grid_statistics():
    stats = grid_statistics(_grid([[0.2, np.nan], [0.4, 0.6]]))
    assert stats.valid_cells == 3
    assert stats.cloud_fraction == pytest.approx(0.25)
    assert stats.mean == pytest.approx(0.4)
    assert (stats.minimum, stats.maximum) == (0.2, 0.6)


def test_build_index_series_interpolates_and_holds_ends():
    samples = [
        IndexSample(date(2020, 1, 11), IndexKind.NDVI, 0.2),
        IndexSample(date(2020, 1, 21), IndexKind.NDVI, 0.6),
        IndexSample(date(2020, 1, 16), IndexKind.NDVI, None),
    ]
    series = build_index_series(samples, "T1", 2020, 2020)

    assert len(series) == 366
    assert series.values[0] == pytest.approx(0.2)
    assert series.values[15] == pytest.approx(0.4)
    assert series.values[-1] == pytest.approx(0.6)


def test_build_index_series_averages_same_day_samples():
    samples = [
        IndexSample(date(2020, 1, 1), IndexKind.NDVI, 0.2),
        IndexSample(date(2020, 1, 1), IndexKind.NDVI, 0.4),
        IndexSample(date(2020, 12, 31), IndexKind.NDVI, 0.3),
    ]
    series = build_index_series(samples, "T1", 2020, 2020)
    assert series.values[0] == pytest.approx(0.3)


def test_build_index_series_needs_two_samples():
    samples = [IndexSample(date(2020, 1, 1), IndexKind.NDVI, 0.2), IndexSample(date(2020, 2, 1), IndexKind.NDVI, None)]
    with pytest.raises(DataError, match="at least 2"):
        build_index_series(samples, "T1", 2020, 2020)


def test_index_sample_range():
    with pytest.raises(DataError):
        IndexSample(date(2020, 1, 1), IndexKind.NDVI, 1.5)
