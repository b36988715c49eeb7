import math
from datetime import date

import numpy as np
import pytest

from leafcast.adapters.ascii_grid import (
    format_ascii_grid,
    load_index_samples,
    parse_ascii_grid,
    scan_raster_dir,
    write_ascii_grid,
)
from leafcast.domain.models import BandGrid, IndexKind, SiteCoordinate
from leafcast.errors import GridError, ParseError

GRID = """ncols 3
nrows 2
xllcorner -72.2
yllcorner 42.5
cellsize 0.001
NODATA_value -9999
0.1 0.2 0.3
0.4 -9999 0.6
"""


def test_parse_grid_header_and_nodata():
    grid = parse_ascii_grid(GRID)
    assert (grid.ncols, grid.nrows) == (3, 2)
    assert grid.xll == pytest.approx(-72.2)
    assert grid.cells[0].tolist() == [0.1, 0.2, 0.3]
    assert math.isnan(grid.cells[1, 1])


def test_parse_grid_center_reference_converted_to_corner():
    text = GRID.replace("xllcorner -72.2", "XLLCENTER -72.1995").replace("yllcorner 42.5", "yllcenter 42.5005")
    grid = parse_ascii_grid(text)
    assert grid.xll == pytest.approx(-72.2)
    assert grid.yll == pytest.approx(42.5)


def test_parse_grid_wrong_cell_count_names_line():
    text = GRID.replace("0.4 -9999 0.6", "0.4 -9999")
    with pytest.raises(ParseError) as info:
        parse_ascii_grid(text, source="NDVI_2020-01-01.asc")
    assert info.value.row == 8


def test_parse_grid_missing_header_key():
    with pytest.raises(ParseError) as info:
        parse_ascii_grid(GRID.replace("cellsize 0.001\n", ""))
    assert info.value.column == "cellsize"


def test_parse_grid_bad_value():
    with pytest.raises(ParseError, match="not a number"):
        parse_ascii_grid(GRID.replace("0.2", "0.2x"))


def test_format_then_parse_is_cell_exact():
    cells = np.array([[1.0 / 3.0, np.nan, -0.125], [0.7, 2.0 / 7.0, 0.0]])
    grid = BandGrid(3, 2, -72.19, 42.53, 0.0002, -9999.0, cells)

    restored = parse_ascii_grid(format_ascii_grid(grid))

    assert restored.same_georeference(grid)
    assert np.array_equal(restored.cells, grid.cells, equal_nan=True)


def test_scan_raster_dir_maps_band_aliases(tmp_path):
    grid = parse_ascii_grid(GRID)
    write_ascii_grid(grid, tmp_path / "NDVI_2020-05-01.asc")
    write_ascii_grid(grid, tmp_path / "B8_2020-05-06.asc")
    (tmp_path / "notes.txt").write_text("ignored")

    found = scan_raster_dir(tmp_path)

    assert set(found) == {("NDVI", date(2020, 5, 1)), ("NIR", date(2020, 5, 6))}


def test_scan_missing_directory(tmp_path):
    with pytest.raises(GridError, match="not found"):
        scan_raster_dir(tmp_path / "absent")


def _write(path, cells):
    write_ascii_grid(BandGrid(2, 1, 0.0, 0.0, 1.0, -9999.0, np.array([cells])), path)


def test_load_index_samples_prefers_index_file_and_computes_from_bands(tmp_path):
    _write(tmp_path / "NDVI_2020-05-01.asc", [0.5, 0.6])
    # 2020-05-06 has bands only: NDVI = (0.6 - 0.2) / (0.6 + 0.2) = 0.5
    _write(tmp_path / "NIR_2020-05-06.asc", [0.6, 0.6])
    _write(tmp_path / "RED_2020-05-06.asc", [0.2, np.nan])
    coords = {"T1": SiteCoordinate("T1", 0.5, 0.5), "T2": SiteCoordinate("T2", 0.5, 1.5)}

    result = load_index_samples(tmp_path, coords, [IndexKind.NDVI])

    t1 = result.samples[("T1", IndexKind.NDVI)]
    t2 = result.samples[("T2", IndexKind.NDVI)]
    assert [(s.date, s.value) for s in t1] == [(date(2020, 5, 1), 0.5), (date(2020, 5, 6), pytest.approx(0.5))]
    assert t2[1].value is None
    assert result.computed_scenes == 1
    assert result.scene_stats[(date(2020, 5, 6), "NDVI")].cloud_fraction == pytest.approx(0.5)


def test_load_index_samples_tree_outside_grid(tmp_path):
    _write(tmp_path / "NDVI_2020-05-01.asc", [0.5, 0.6])
    with pytest.raises(GridError, match="outside"):
        load_index_samples(tmp_path, {"T1": SiteCoordinate("T1", 5.0, 0.5)}, [IndexKind.NDVI])
