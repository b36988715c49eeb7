"""
ESRI ASCII Grid Adapter

Reads and writes the text raster format and loads a directory of
per-date index or band grids into samples at tree positions.

Layout:
    ncols         3
    nrows         2
    xllcorner     -72.2
    yllcorner     42.5
    cellsize      0.0001
    NODATA_value  -9999
    <nrows lines of ncols values, top row first>
"""

import logging
import math
import re
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from ..domain.models import BandGrid, GridStatistics, IndexKind, IndexSample, SiteCoordinate
from ..domain.raster import INDEX_BANDS, canonical_band, compute_index, grid_statistics, sample_at
from ..errors import GridError, ParseError

logger = logging.getLogger(__name__)

DEFAULT_NODATA = -9999.0
RASTER_NAME = re.compile(r"^([A-Za-z0-9]+)_(\d{4}-\d{2}-\d{2})\.asc$")
REQUIRED_KEYS = ("ncols", "nrows", "cellsize")


def parse_ascii_grid(text: Union[str, TextIO], source: Optional[str] = None) -> BandGrid:
    """
    Parse an ESRI ASCII grid; nodata cells become NaN.

    Header keys are case-insensitive. Cell-center references
    (xllcenter / yllcenter) are converted to corners.

    Raises:
        ParseError: missing header key, non-numeric value or wrong cell count
    """
    content = text if isinstance(text, str) else text.read()
    lines = content.splitlines()

    header: Dict[str, float] = {}
    line_no = 0
    while line_no < len(lines):
        tokens = lines[line_no].split()
        if not tokens:
            line_no += 1
            continue
        if not tokens[0][0].isalpha():
            break
        if len(tokens) != 2:
            raise ParseError(f"header line must be '<key> <value>', got '{lines[line_no].strip()}'",
                             row=line_no + 1, source=source)
        key = tokens[0].lower()
        try:
            header[key] = float(tokens[1])
        except ValueError:
            raise ParseError(f"header value '{tokens[1]}' is not a number", row=line_no + 1,
                             column=key, source=source)
        line_no += 1

    for key in REQUIRED_KEYS:
        if key not in header:
            raise ParseError(f"header key '{key}' missing", row=line_no + 1, column=key, source=source)

    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    cellsize = header["cellsize"]
    if ncols < 1 or nrows < 1 or ncols != header["ncols"] or nrows != header["nrows"]:
        raise ParseError(f"grid size {header['ncols']:g}x{header['nrows']:g} is not a positive integer pair",
                         source=source)

    xll = _corner(header, "x", cellsize, source)
    yll = _corner(header, "y", cellsize, source)
    nodata = header.get("nodata_value", DEFAULT_NODATA)

    rows: List[List[float]] = []
    for index in range(line_no, len(lines)):
        tokens = lines[index].split()
        if not tokens:
            continue
        if len(tokens) != ncols:
            raise ParseError(f"expected {ncols} values, found {len(tokens)}", row=index + 1, source=source)
        try:
            rows.append([float(t) for t in tokens])
        except ValueError:
            bad = next(t for t in tokens if not _is_number(t))
            raise ParseError(f"cell value '{bad}' is not a number", row=index + 1, source=source)

    if len(rows) != nrows:
        raise ParseError(f"expected {nrows} data rows, found {len(rows)}", row=len(lines), source=source)

    cells = np.array(rows, dtype=np.float64)
    cells[cells == nodata] = np.nan
    return BandGrid(ncols=ncols, nrows=nrows, xll=xll, yll=yll, cellsize=cellsize, nodata=nodata, cells=cells)


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def _corner(header: Dict[str, float], axis: str, cellsize: float, source: Optional[str]) -> float:
    if f"{axis}llcorner" in header:
        return header[f"{axis}llcorner"]
    if f"{axis}llcenter" in header:
        return header[f"{axis}llcenter"] - cellsize / 2.0
    raise ParseError(f"header key '{axis}llcorner' missing", row=1, column=f"{axis}llcorner", source=source)


def _number(value: float) -> str:
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def format_ascii_grid(grid: BandGrid) -> str:
    """Serialize a grid; NaN cells are written as the nodata value."""
    lines = [
        f"ncols {grid.ncols}",
        f"nrows {grid.nrows}",
        f"xllcorner {grid.xll!r}",
        f"yllcorner {grid.yll!r}",
        f"cellsize {grid.cellsize!r}",
        f"NODATA_value {_number(grid.nodata)}",
    ]
    nodata_text = _number(grid.nodata)
    for row in grid.cells:
        lines.append(" ".join(nodata_text if math.isnan(v) else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_ascii_grid(grid: BandGrid, path: Path) -> None:
    Path(path).write_text(format_ascii_grid(grid), encoding="utf-8")


def read_ascii_grid(path: Path) -> BandGrid:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as handle:
        return parse_ascii_grid(handle, source=path.name)


# ==========================================
# Raster directories
# ==========================================

def scan_raster_dir(directory: Path) -> Dict[Tuple[str, date], Path]:
    """
    Map (upper-case prefix, date) to file for every <PREFIX>_<YYYY-MM-DD>.asc.

    Band prefixes are mapped to their generic names (B8 -> NIR).
    Files not matching the pattern are ignored.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise GridError(f"raster directory not found: {directory}")

    found: Dict[Tuple[str, date], Path] = {}
    for path in sorted(directory.iterdir()):
        match = RASTER_NAME.match(path.name)
        if not match:
            continue
        prefix = match.group(1).upper()
        if prefix not in IndexKind.__members__:
            prefix = canonical_band(prefix)
        try:
            day = date.fromisoformat(match.group(2))
        except ValueError:
            logger.warning(f"ignoring raster with invalid date: {path.name}")
            continue
        found[(prefix, day)] = path
    return found


@dataclass
class RasterSamples:
    """Index samples per (tree, kind) plus per-scene statistics."""
    samples: Dict[Tuple[str, IndexKind], List[IndexSample]] = field(default_factory=dict)
    scene_stats: Dict[Tuple[date, str], GridStatistics] = field(default_factory=dict)
    computed_scenes: int = 0


def load_index_samples(
    directory: Path,
    coords: Mapping[str, SiteCoordinate],
    kinds: Sequence[IndexKind] = tuple(IndexKind)
) -> RasterSamples:
    """
    Sample every index grid of a directory at each tree's position.

    An index file takes precedence; without one the index is computed
    from that date's band files when all required bands are present.

    Raises:
        GridError: a tree lies outside a grid, or the directory is missing
        ParseError: a grid file is malformed
    """
    files = scan_raster_dir(directory)
    result = RasterSamples()
    kinds = [IndexKind(k) for k in kinds]
    for tree_id in coords:
        for kind in kinds:
            result.samples[(tree_id, kind)] = []

    days = sorted({day for _, day in files})
    for day in days:
        bands: Dict[str, BandGrid] = {}
        for kind in kinds:
            grid = None
            if (kind.value, day) in files:
                grid = read_ascii_grid(files[(kind.value, day)])
            elif all((band, day) in files for band in INDEX_BANDS[kind]):
                for band in INDEX_BANDS[kind]:
                    if band not in bands:
                        bands[band] = read_ascii_grid(files[(band, day)])
                grid = compute_index(kind, bands)
                result.computed_scenes += 1
            else:
                logger.debug(f"no {kind.value} raster or bands for {day}")
                continue

            result.scene_stats[(day, kind.value)] = grid_statistics(grid)
            for tree_id, site in coords.items():
                value = sample_at(grid, site.lat, site.lon)
                result.samples[(tree_id, kind)].append(IndexSample(day, kind, value))

    logger.info(f"  Sampled {len(result.scene_stats)} scene(s) on {len(days)} date(s) "
                f"({result.computed_scenes} computed from bands)")
    return result
