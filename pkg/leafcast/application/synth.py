"""
Synthetic Site Generator

Produces phenology, site, weather and raster files in the pipeline's
input formats from a known leaf-fall mechanism:

- daily temperature is an annual sinusoid plus a per-year offset and noise
- leaf-fall starts on the first autumn day whose trailing mean
  temperature drops below the onset threshold
- the fall follows a normalized logistic over a drawn duration
- vegetation indices track the remaining foliage

Everything is drawn from numpy generators seeded by the config seed, so
identical configs give identical files.
"""

import logging
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ..adapters.ascii_grid import write_ascii_grid
from ..adapters.csv_adapter import (
    write_daily_series_csv,
    write_era5_csv,
    write_pheno_csv,
    write_sites_csv,
    write_truth_periods_csv,
)
from ..config import SynthConfig
from ..domain.evaluation import extract_periods
from ..domain.models import (
    BandGrid,
    DailyLeafSeries,
    Era5Record,
    IndexKind,
    PeriodSummary,
    PhenoRecord,
    SiteCoordinate,
)
from ..domain.phenology import derive_labels

logger = logging.getLogger(__name__)

SITE_LAT = 42.53
SITE_LON = -72.19
CELLSIZE = 0.0002
GRID_ROWS = 3

BASE_TEMPERATURE = 283.0
TEMPERATURE_AMPLITUDE = 12.0
TEMPERATURE_PEAK_SHIFT = 105
EARLIEST_ONSET = (9, 2)
LATEST_ONSET = (10, 15)
MIN_DURATION = 30.0
MAX_DURATION = 60.0
LOGISTIC_STEEPNESS = 6.0
ONSET_JITTER_SD = 2.0
OBSERVATION_STEP = 7

# index = offset + scale * (1 - lfall / 100)
INDEX_RESPONSE: Dict[IndexKind, Tuple[float, float]] = {
    IndexKind.NDVI: (0.2, 0.7),
    IndexKind.NDWI: (-0.3, 0.35),
    IndexKind.NDMI: (0.0, 0.4),
}
NIR_REFLECTANCE = 0.4


@dataclass
class SyntheticDataset:
    """Generated inputs plus the truth they were generated from."""
    pheno: List[PhenoRecord]
    sites: List[SiteCoordinate]
    era5: List[Era5Record]
    rasters: Dict[str, BandGrid]
    truth_periods: List[PeriodSummary]
    truth_series: List[DailyLeafSeries]
    onsets: Dict[Tuple[str, int], date] = field(default_factory=dict)


def _days(first_year: int, last_year: int) -> pd.DatetimeIndex:
    return pd.date_range(date(first_year, 1, 1), date(last_year, 12, 31), freq="D")


def daily_temperature(days: pd.DatetimeIndex, config: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Annual sinusoid in kelvin plus a per-year offset and daily noise."""
    doy = days.dayofyear.to_numpy()
    offsets = {year: rng.normal(0.0, 1.0) for year in sorted(set(days.year))}
    seasonal = BASE_TEMPERATURE + TEMPERATURE_AMPLITUDE * np.sin(2 * np.pi * (doy - TEMPERATURE_PEAK_SHIFT) / 365.0)
    yearly = np.array([offsets[y] for y in days.year])
    return seasonal + yearly + rng.normal(0.0, config.temperature_noise, len(days))


def onset_day(days: pd.DatetimeIndex, temperature: np.ndarray, year: int, config: SynthConfig) -> date:
    """
    First day from Sep 1 whose trailing mean temperature is below the threshold.

    Clamped to [Sep 2, Oct 15] so the fall completes before December ends.
    """
    trailing = pd.Series(temperature, index=days).rolling(config.smoothing_days, min_periods=1).mean()
    autumn = trailing[(trailing.index.year == year) & (trailing.index.month >= 9)]
    below = autumn[autumn < config.onset_temperature]
    onset = below.index[0].date() if len(below) else date(year, *LATEST_ONSET)
    return min(max(onset, date(year, *EARLIEST_ONSET)), date(year, *LATEST_ONSET))


def logistic_fall(days_since_onset: np.ndarray, duration: float) -> np.ndarray:
    """Percent fallen: 0 at onset, 100 at onset + duration, logistic in between."""
    def raw(t):
        return 1.0 / (1.0 + np.exp(-LOGISTIC_STEEPNESS * (t / duration - 0.5)))

    low, high = raw(0.0), raw(duration)
    t = np.clip(days_since_onset, 0.0, duration)
    return np.clip(100.0 * (raw(t) - low) / (high - low), 0.0, 100.0)


def _tree_layout(config: SynthConfig) -> Tuple[List[SiteCoordinate], Dict[str, str], Dict[str, Tuple[int, int]], BandGrid]:
    """Trees sit on cell centers of the middle row, one empty column apart."""
    ncols = 2 * config.tree_count + 1
    xll = SITE_LON - ncols * CELLSIZE / 2.0
    yll = SITE_LAT - GRID_ROWS * CELLSIZE / 2.0
    template = BandGrid(ncols, GRID_ROWS, xll, yll, CELLSIZE, -9999.0, np.zeros((GRID_ROWS, ncols)))

    sites, species, cells = [], {}, {}
    for k in range(config.tree_count):
        tree_id = f"T{k + 1:02d}"
        col = 2 * k + 1
        sites.append(SiteCoordinate(
            tree_id=tree_id,
            lat=yll + 1.5 * CELLSIZE,
            lon=xll + (col + 0.5) * CELLSIZE
        ))
        species[tree_id] = config.species[k % len(config.species)]
        cells[tree_id] = (1, col)
    return sites, species, cells, template


def _weather(days: pd.DatetimeIndex, temperature: np.ndarray, rng: np.random.Generator) -> List[Era5Record]:
    doy = days.dayofyear.to_numpy()
    precipitation = rng.gamma(0.6, 0.004, len(days))
    solar = np.clip(1.2e7 + 8e6 * np.sin(2 * np.pi * (doy - 80) / 365.0) + rng.normal(0.0, 1e6, len(days)), 0.0, None)
    soil = np.clip(0.3 - 0.05 * np.sin(2 * np.pi * (doy - 105) / 365.0) + rng.normal(0.0, 0.01, len(days)), 0.05, 0.6)

    return [
        Era5Record(
            date=day.date(),
            features={
                "temperature": round(float(temperature[k]), 4),
                "precipitation": round(float(precipitation[k]), 6),
                "solar_radiation": round(float(solar[k]), 1),
                "soil_water": round(float(soil[k]), 4),
            }
        )
        for k, day in enumerate(days)
    ]


def _observations(tree_id: str, species: str, curve: pd.Series, years: range, rng: np.random.Generator) -> List[PhenoRecord]:
    """Weekly Sep - Dec observations with +-1 day jitter, one decimal."""
    records = []
    for year in years:
        sep1 = date(year, 9, 1)
        dec31 = date(year, 12, 31)
        step = 0
        while True:
            day = sep1 + timedelta(days=OBSERVATION_STEP * step + int(rng.integers(-1, 2)))
            step += 1
            if day > dec31:
                break
            day = max(day, sep1)
            value = round(float(curve[pd.Timestamp(day)]), 1)
            records.append(PhenoRecord(date=day, tree_id=tree_id, species=species, lfall_pct=value))
    return records


def _band_grids(index_cells: Dict[IndexKind, np.ndarray], template: BandGrid) -> Dict[str, BandGrid]:
    """Invert the indices to reflectances with a fixed NIR band."""
    nir = np.where(np.isnan(index_cells[IndexKind.NDVI]), np.nan, NIR_REFLECTANCE)
    ndvi = index_cells[IndexKind.NDVI]
    ndwi = index_cells[IndexKind.NDWI]
    ndmi = index_cells[IndexKind.NDMI]
    return {
        "NIR": template.with_cells(nir),
        "RED": template.with_cells(nir * (1.0 - ndvi) / (1.0 + ndvi)),
        "GREEN": template.with_cells(nir * (1.0 + ndwi) / (1.0 - ndwi)),
        "SWIR": template.with_cells(nir * (1.0 - ndmi) / (1.0 + ndmi)),
    }


def generate(config: SynthConfig) -> SyntheticDataset:
    """
    Generate a complete synthetic site.

    Returns:
        SyntheticDataset with input records, raster grids keyed by file
        name and the truth periods of every tree and year
    """
    years = range(config.first_year, config.last_year + 1)
    days = _days(config.first_year, config.last_year)
    sites, species, cells, template = _tree_layout(config)

    weather_rng = np.random.default_rng([config.seed, 0])
    temperature = daily_temperature(days, config, weather_rng)
    era5 = _weather(days, temperature, weather_rng)
    site_onsets = {year: onset_day(days, temperature, year, config) for year in years}

    pheno: List[PhenoRecord] = []
    truth_series: List[DailyLeafSeries] = []
    truth_periods: List[PeriodSummary] = []
    onsets: Dict[Tuple[str, int], date] = {}
    curves: Dict[str, pd.Series] = {}

    for k, site in enumerate(sites):
        tree_rng = np.random.default_rng([config.seed, 1, k])
        values = np.zeros(len(days))
        for year in years:
            jitter = int(round(tree_rng.normal(0.0, ONSET_JITTER_SD)))
            onset = site_onsets[year] + timedelta(days=jitter)
            onset = min(max(onset, date(year, *EARLIEST_ONSET)), date(year, *LATEST_ONSET))
            duration = float(np.clip(tree_rng.normal(config.duration_mean, config.duration_sd), MIN_DURATION, MAX_DURATION))
            onsets[(site.tree_id, year)] = onset

            in_year = days.year == year
            since = (days[in_year] - pd.Timestamp(onset)).days.to_numpy().astype(np.float64)
            values[in_year] = np.where(since < 0, 0.0, logistic_fall(since, duration))

        series = derive_labels(DailyLeafSeries(
            tree_id=site.tree_id,
            species=species[site.tree_id],
            start_date=days[0].date(),
            values=values,
            labels=np.zeros(len(values), dtype=bool)
        ))
        truth_series.append(series)
        truth_periods.extend(extract_periods(series.label_series(), site.tree_id))
        curves[site.tree_id] = pd.Series(values, index=days)
        pheno.extend(_observations(site.tree_id, species[site.tree_id], curves[site.tree_id], years, tree_rng))

    rasters = _scenes(days, sites, cells, curves, template, config)

    logger.info(f"  Synthetic site: {len(sites)} tree(s), {len(years)} year(s), "
                f"{len(pheno)} observation(s), {len(rasters)} raster file(s)")
    return SyntheticDataset(
        pheno=pheno,
        sites=sites,
        era5=era5,
        rasters=rasters,
        truth_periods=truth_periods,
        truth_series=truth_series,
        onsets=onsets
    )


def _scenes(
    days: pd.DatetimeIndex,
    sites: List[SiteCoordinate],
    cells: Dict[str, Tuple[int, int]],
    curves: Dict[str, pd.Series],
    template: BandGrid,
    config: SynthConfig
) -> Dict[str, BandGrid]:
    """Index (or band) grids every scene_interval days with cloud cells as nodata."""
    scene_rng = np.random.default_rng([config.seed, 2])
    rasters: Dict[str, BandGrid] = {}

    for day in days[::config.scene_interval]:
        foliage = {site.tree_id: 1.0 - curves[site.tree_id][day] / 100.0 for site in sites}
        background = float(np.mean(list(foliage.values())))
        clouds = scene_rng.random(template.cells.shape) < config.cloud_fraction

        index_cells: Dict[IndexKind, np.ndarray] = {}
        for kind, (offset, scale) in INDEX_RESPONSE.items():
            grid = offset + scale * background + scene_rng.normal(0.0, config.index_noise, template.cells.shape)
            for tree_id, (row, col) in cells.items():
                grid[row, col] = offset + scale * foliage[tree_id] + scene_rng.normal(0.0, config.index_noise)
            grid = np.round(np.clip(grid, -0.99, 0.99), 4)
            grid[clouds] = np.nan
            index_cells[kind] = grid

        stamp = day.strftime("%Y-%m-%d")
        if config.emit_bands:
            for band, grid in _band_grids(index_cells, template).items():
                rasters[f"{band}_{stamp}.asc"] = grid
        else:
            for kind, grid in index_cells.items():
                rasters[f"{kind.value}_{stamp}.asc"] = template.with_cells(grid)
    return rasters


def write_dataset(dataset: SyntheticDataset, pheno: Path, sites: Path, era5: Path, raster_dir: Path, truth: Path) -> List[Path]:
    """Write every generated file; returns the paths written."""
    written = []
    for path in (pheno, sites, era5, truth):
        Path(path).parent.mkdir(parents=True, exist_ok=True)
    raster_dir = Path(raster_dir)
    raster_dir.mkdir(parents=True, exist_ok=True)

    with open(pheno, "w", encoding="utf-8", newline="") as handle:
        write_pheno_csv(dataset.pheno, handle)
    with open(sites, "w", encoding="utf-8", newline="") as handle:
        write_sites_csv(dataset.sites, handle)
    with open(era5, "w", encoding="utf-8", newline="") as handle:
        write_era5_csv(dataset.era5, handle)
    with open(truth, "w", encoding="utf-8", newline="") as handle:
        write_truth_periods_csv(dataset.truth_periods, handle)
    truth_daily = Path(truth).with_name("truth_daily.csv")
    with open(truth_daily, "w", encoding="utf-8", newline="") as handle:
        write_daily_series_csv(dataset.truth_series, handle)
    written.extend([Path(pheno), Path(sites), Path(era5), Path(truth), truth_daily])

    for name, grid in sorted(dataset.rasters.items()):
        path = raster_dir / name
        write_ascii_grid(grid, path)
        written.append(path)
    return written
