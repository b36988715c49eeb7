"""
Domain Models for Leaf-Fall Prediction

Pure data entities with no I/O. Arrays are numpy, dates are
datetime.date; tabular entities wrap a pandas DataFrame.
"""

import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..errors import DataError


class IndexKind(str, Enum):
    """Normalized-difference vegetation indices used as features."""

    NDVI = "NDVI"
    NDWI = "NDWI"
    NDMI = "NDMI"

    @property
    def column(self) -> str:
        """Feature column name for this index."""
        return self.value.lower()


# ==========================================
# Ground truth and weather
# ==========================================

@dataclass(frozen=True)
class PhenoRecord:
    """
    One leaf-fall observation of one tree.

    lfall_pct is None when the archive cell was empty.
    """
    date: date
    tree_id: str
    species: str
    lfall_pct: Optional[float] = None

    def __post_init__(self):
        if self.lfall_pct is not None and not 0.0 <= self.lfall_pct <= 100.0:
            raise DataError(
                f"lfall {self.lfall_pct} outside [0, 100] for {self.tree_id} on {self.date}"
            )


@dataclass(frozen=True)
class SiteCoordinate:
    """Estimated WGS84 position of a tree."""
    tree_id: str
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise DataError(f"latitude {self.lat} outside [-90, 90] for {self.tree_id}")
        if not -180.0 <= self.lon <= 180.0:
            raise DataError(f"longitude {self.lon} outside [-180, 180] for {self.tree_id}")


@dataclass(frozen=True)
class Era5Record:
    """Daily reanalysis values for the single pixel covering the site."""
    date: date
    features: Dict[str, float]


@dataclass
class DailyLeafSeries:
    """
    Gap-free daily leaf-fall percentages of one tree.

    values[k] and labels[k] belong to start_date + k days.
    """
    tree_id: str
    species: str
    start_date: date
    values: np.ndarray
    labels: np.ndarray
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=bool)
        if self.values.shape != self.labels.shape:
            raise DataError(
                f"series {self.tree_id}: {len(self.values)} values but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_date(self) -> date:
        """Last calendar day covered."""
        return self.start_date + timedelta(days=len(self.values) - 1)

    @property
    def dates(self) -> pd.DatetimeIndex:
        """One timestamp per value."""
        return pd.date_range(self.start_date, periods=len(self.values), freq="D")

    def label_series(self) -> pd.Series:
        """Labels keyed by date."""
        return pd.Series(self.labels, index=self.dates, name=self.tree_id)


# ==========================================
# Rasters and index series
# ==========================================

@dataclass(frozen=True)
class BandGrid:
    """
    Georeferenced raster of reflectance or index values.

    cells has shape (nrows, ncols), top row first; missing cells are NaN.
    """
    ncols: int
    nrows: int
    xll: float
    yll: float
    cellsize: float
    nodata: float
    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.float64)
        if cells.size != self.ncols * self.nrows:
            raise DataError(
                f"grid declares {self.ncols}x{self.nrows} cells but holds {cells.size}"
            )
        if not self.cellsize > 0:
            raise DataError(f"cellsize must be positive, got {self.cellsize}")
        cells = cells.reshape(self.nrows, self.ncols).copy()
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def values(self) -> np.ndarray:
        """Cells flattened row-major."""
        return self.cells.ravel()

    def same_georeference(self, other: "BandGrid") -> bool:
        """True if both grids describe the same cells on the ground."""
        return (
            self.ncols == other.ncols
            and self.nrows == other.nrows
            and math.isclose(self.xll, other.xll, rel_tol=0, abs_tol=1e-9)
            and math.isclose(self.yll, other.yll, rel_tol=0, abs_tol=1e-9)
            and math.isclose(self.cellsize, other.cellsize, rel_tol=1e-12)
        )

    def with_cells(self, cells: np.ndarray) -> "BandGrid":
        """Copy of the georeference holding new cell values."""
        return BandGrid(
            ncols=self.ncols,
            nrows=self.nrows,
            xll=self.xll,
            yll=self.yll,
            cellsize=self.cellsize,
            nodata=self.nodata,
            cells=cells
        )


@dataclass(frozen=True)
class IndexSample:
    """Index value read at one tree on one acquisition date (None = cloud/nodata)."""
    date: date
    index_kind: IndexKind
    value: Optional[float] = None

    def __post_init__(self):
        if self.value is not None and not -1.0 <= self.value <= 1.0:
            raise DataError(f"{self.index_kind.value} value {self.value} outside [-1, 1]")


@dataclass
class IndexSeries:
    """Daily gap-filled index values of one tree."""
    tree_id: str
    index_kind: IndexKind
    start_date: date
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dates(self) -> pd.DatetimeIndex:
        return pd.date_range(self.start_date, periods=len(self.values), freq="D")


@dataclass(frozen=True)
class GridStatistics:
    """Scene-level summary of one raster."""
    valid_cells: int
    cloud_fraction: float
    mean: Optional[float]
    minimum: Optional[float]
    maximum: Optional[float]


# ==========================================
# Features
# ==========================================

@dataclass
class FeatureTable:
    """
    Per-tree per-day feature rows.

    frame columns: tree_id, date, species, <numeric_columns>,
    <species_columns>, label. Column order of the features is fixed by
    numeric_columns followed by species_columns.
    """
    frame: pd.DataFrame
    numeric_columns: List[str]
    species_columns: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def feature_names(self) -> List[str]:
        return list(self.numeric_columns) + list(self.species_columns)

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def tree_ids(self) -> List[str]:
        return list(pd.unique(self.frame["tree_id"]))

    def replace(self, **changes) -> "FeatureTable":
        """Copy with some fields replaced; warnings are carried over."""
        values = {
            "frame": self.frame,
            "numeric_columns": list(self.numeric_columns),
            "species_columns": list(self.species_columns),
            "warnings": list(self.warnings),
        }
        values.update(changes)
        return FeatureTable(**values)


@dataclass(frozen=True)
class ScalerParams:
    """Per-column min and max observed on the fitting rows."""
    minimums: Dict[str, float]
    maximums: Dict[str, float]

    def __post_init__(self):
        for column, low in self.minimums.items():
            if column not in self.maximums:
                raise DataError(f"scaler has a minimum but no maximum for {column}")
            if low > self.maximums[column]:
                raise DataError(f"scaler minimum exceeds maximum for {column}")

    @property
    def columns(self) -> List[str]:
        return list(self.minimums)

    def to_dict(self) -> dict:
        return {
            column: {"min": self.minimums[column], "max": self.maximums[column]}
            for column in self.minimums
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScalerParams":
        return cls(
            minimums={column: float(v["min"]) for column, v in data.items()},
            maximums={column: float(v["max"]) for column, v in data.items()}
        )


@dataclass
class WindowedDataset:
    """
    Supervised sliding-window examples.

    X has shape (n, window_size, len(feature_names)); row k of example j
    is the feature row of target_dates[j] - (window_size - k) days.
    """
    X: np.ndarray
    y: np.ndarray
    tree_ids: np.ndarray
    target_dates: np.ndarray
    feature_names: List[str]
    window_size: int = 7
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=bool)
        self.tree_ids = np.asarray(self.tree_ids, dtype=object)
        self.target_dates = np.asarray(self.target_dates, dtype="datetime64[D]")
        if self.X.ndim != 3:
            self.X = self.X.reshape(0, self.window_size, len(self.feature_names))

    def __len__(self) -> int:
        return len(self.y)

    @property
    def years(self) -> np.ndarray:
        return self.target_dates.astype("datetime64[Y]").astype(int) + 1970

    def subset(self, mask: np.ndarray) -> "WindowedDataset":
        """Examples selected by a boolean mask or index array, order kept."""
        return WindowedDataset(
            X=self.X[mask],
            y=self.y[mask],
            tree_ids=self.tree_ids[mask],
            target_dates=self.target_dates[mask],
            feature_names=list(self.feature_names),
            window_size=self.window_size
        )

    @classmethod
    def empty(cls, feature_names: List[str], window_size: int) -> "WindowedDataset":
        return cls(
            X=np.zeros((0, window_size, len(feature_names))),
            y=np.zeros(0, dtype=bool),
            tree_ids=np.zeros(0, dtype=object),
            target_dates=np.zeros(0, dtype="datetime64[D]"),
            feature_names=list(feature_names),
            window_size=window_size
        )


# ==========================================
# Evaluation
# ==========================================

@dataclass(frozen=True)
class ClassScores:
    """Precision, recall, F1 and support of one class (or an average)."""
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    """Per-class scores plus accuracy and macro / weighted averages."""
    leaf_fall: ClassScores
    no_leaf_fall: ClassScores
    accuracy: float
    macro_avg: ClassScores
    weighted_avg: ClassScores

    @property
    def total(self) -> int:
        return self.leaf_fall.support + self.no_leaf_fall.support


@dataclass(frozen=True)
class PeriodSummary:
    """First and last leaf-falling day of one tree in one year."""
    tree_id: str
    year: int
    start_date: date
    end_date: date

    def __post_init__(self):
        if self.start_date > self.end_date:
            raise DataError(f"period start {self.start_date} after end {self.end_date}")


@dataclass(frozen=True)
class YearDifference:
    """Predicted vs actual boundary date of one period."""
    tree_id: str
    year: int
    predicted: date
    actual: date

    @property
    def difference_days(self) -> int:
        return abs((self.predicted - self.actual).days)


@dataclass
class RmseReport:
    """Start / end boundary errors and their root-mean-square in days."""
    start: List[YearDifference]
    end: List[YearDifference]
    rmse_start: float
    rmse_end: float
    rmse_overall: float
    excluded: List[str] = field(default_factory=list)


@dataclass
class TrajectoryCurve:
    """Mean leaf-fall percentage per day of year (365 bins) of one species."""
    species: str
    values: np.ndarray
    series_count: int = 0
