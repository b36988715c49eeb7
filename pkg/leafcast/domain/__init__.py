"""
Domain Layer

Data entities and pure rules: phenology wrangling, raster math, feature
assembly and evaluation metrics. No file I/O, no presentation concerns.
"""

from .models import (
    BandGrid,
    ClassificationReport,
    ClassScores,
    DailyLeafSeries,
    Era5Record,
    FeatureTable,
    GridStatistics,
    IndexKind,
    IndexSample,
    IndexSeries,
    PeriodSummary,
    PhenoRecord,
    RmseReport,
    ScalerParams,
    SiteCoordinate,
    TrajectoryCurve,
    WindowedDataset,
    YearDifference,
)

__all__ = [
    'BandGrid',
    'ClassificationReport',
    'ClassScores',
    'DailyLeafSeries',
    'Era5Record',
    'FeatureTable',
    'GridStatistics',
    'IndexKind',
    'IndexSample',
    'IndexSeries',
    'PeriodSummary',
    'PhenoRecord',
    'RmseReport',
    'ScalerParams',
    'SiteCoordinate',
    'TrajectoryCurve',
    'WindowedDataset',
    'YearDifference',
]
