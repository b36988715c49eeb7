"""
Leaf-Fall Pipeline

Use cases behind the command-line subcommands. Orchestrates the layers:

1. Adapters (adapters/*) - read and write files
2. Domain (domain/*) - phenology, raster and feature rules, metrics
3. Model / Tuning (model/*, tuning/*) - training and search
4. Presentation (presentation/*) - charts and the evaluation workbook

No business logic here - just orchestration.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..adapters.ascii_grid import load_index_samples
from ..adapters.checkpoint import Checkpoint, read_checkpoint, write_checkpoint
from ..adapters.csv_adapter import (
    parse_era5_csv,
    parse_pheno_csv,
    parse_sites_csv,
    read_daily_series_csv,
    read_feature_table,
    read_metrics_csv,
    read_truth_periods_csv,
    write_classification_csv,
    write_daily_comparison_csv,
    write_daily_series_csv,
    write_feature_table,
    write_metrics_csv,
    write_periods_csv,
    write_predictions_csv,
    write_rmse_csv,
    write_scene_stats_csv,
    write_trajectory_csv,
    write_tune_report_csv,
)
from ..adapters.json_adapter import feature_manifest, read_feature_manifest, write_json, write_manifest
from ..config import RunConfig
from ..domain.evaluation import (
    aggregate_periods,
    classification_report,
    extract_periods,
    rmse_report,
    trajectory_summary,
)
from ..domain.features import (
    add_week_of_year,
    apply_minmax,
    fit_minmax,
    fit_species,
    join_sources,
    make_windows,
    one_hot_species,
    split_temporal,
)
from ..domain.models import (
    DailyLeafSeries,
    FeatureTable,
    PeriodSummary,
    ScalerParams,
    SiteCoordinate,
    WindowedDataset,
)
from ..domain.phenology import attach_coordinates, filter_years, group_by_tree, to_daily_series
from ..domain.raster import build_index_series
from ..errors import DataError, NumericError
from ..model.trainer import EpochMetrics, TrainingResult, fit
from ..model.trainer import predict as predict_labels
from ..presentation.charts import plot_learning_curves, plot_period_comparison, plot_trajectories
from ..presentation.excel_presenter import EvaluationExcelPresenter
from ..tuning.hyperband import TuneReport, run_hyperband
from .report_data import EvaluationResult, ReportDataGenerator
from .synth import generate, write_dataset

logger = logging.getLogger(__name__)

SCALED_TABLE = "feature_table_scaled.csv"
FEATURE_MANIFEST = "feature_manifest.json"
MODEL_CHECKPOINT = "model.ckpt"
BEST_CHECKPOINT = "best_model.ckpt"
COMPARISON_MONTHS = (8, 12)


@dataclass
class IngestResult:
    """Daily series, joined feature rows and raster bookkeeping."""
    series: List[DailyLeafSeries]
    table: FeatureTable
    coordinates: Dict[str, SiteCoordinate]
    dropped_trees: List[str] = field(default_factory=list)
    scene_stats: Dict = field(default_factory=dict)


@dataclass
class PreparedDataset:
    """Scaled feature table and its windowed splits."""
    table: FeatureTable
    scaler: ScalerParams
    species: List[str]
    windows: WindowedDataset
    train: WindowedDataset
    val: WindowedDataset
    holdout: WindowedDataset
    holdout_tree: str

    @property
    def feature_names(self) -> List[str]:
        return list(self.windows.feature_names)


def _banner(title: str) -> None:
    logger.info("=" * 80)
    logger.info(title)
    logger.info("=" * 80)


def input_fingerprint(config: RunConfig) -> str:
    """
    sha256 over the contents of the phenology, site and weather files and
    every raster file, in sorted order. Missing inputs hash as absent.
    """
    paths = config.paths
    digest = hashlib.sha256()
    files = [Path(paths.pheno), Path(paths.sites), Path(paths.era5)]
    raster_dir = Path(paths.raster_dir)
    if raster_dir.is_dir():
        files.extend(sorted(p for p in raster_dir.iterdir() if p.is_file()))
    for path in files:
        digest.update(path.name.encode("utf-8"))
        digest.update(path.read_bytes() if path.is_file() else b"<absent>")
    return digest.hexdigest()


def _read_text(path, what: str) -> str:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{what} file not found: {path}")
    return path.read_text(encoding="utf-8")


def periods_from_labels(
    windows: WindowedDataset,
    labels: np.ndarray,
    max_gap_days: Optional[int] = None
) -> List[PeriodSummary]:
    """Per tree and year leaf-fall periods of labels aligned with the examples."""
    labels = np.asarray(labels, dtype=bool)
    periods: List[PeriodSummary] = []
    for tree_id in sorted(set(windows.tree_ids)):
        mask = windows.tree_ids == tree_id
        series = pd.Series(labels[mask], index=pd.DatetimeIndex(windows.target_dates[mask]))
        periods.extend(extract_periods(series, tree_id, max_gap_days))
    return periods


class LeafcastPipeline:
    """
    Runs the pipeline stages against one RunConfig.

    Every public method is one subcommand; each writes its artifacts and
    a manifest into the configured output directory.
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.output_dir = Path(config.paths.output_dir)
        self.data_generator = ReportDataGenerator()
        self.excel_presenter = EvaluationExcelPresenter()
        self._ingested: Optional[IngestResult] = None

    def _out(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def _dataset_key(self) -> str:
        return self.config.dataset_key(input_fingerprint(self.config))

    def _manifest(self, command: str, artifacts: List[str], extra: Optional[Dict] = None) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return write_manifest(command, self.config, artifacts, self.output_dir, extra)

    # ==========================================
    # ingest
    # ==========================================

    def ingest(self) -> IngestResult:
        """
        Parse every input source and join it into per-tree daily rows.

        Writes daily_series.csv, feature_table.csv and scene_stats.csv.

        Raises:
            DataError: an input file is missing or malformed, or no tree
                can be located
        """
        paths, features = self.config.paths, self.config.features
        first, last = features.first_year, features.last_year
        _banner(f"INGEST {first}-{last}")

        # Step 1: Parse ground truth and tree positions (Adapters)
        logger.info(f"Loading phenology from: {paths.pheno}")
        records = parse_pheno_csv(_read_text(paths.pheno, "phenology"), source=Path(paths.pheno).name)
        logger.info(f"Loading tree positions from: {paths.sites}")
        sites = parse_sites_csv(_read_text(paths.sites, "site"), source=Path(paths.sites).name)

        records = filter_years(records, first, last)
        if not records:
            raise DataError(f"no phenology records between {first} and {last}")
        grouped = group_by_tree(records)
        coordinates, dropped = attach_coordinates(sorted(grouped), sites)
        if not coordinates:
            raise DataError("no tree of the phenology file has coordinates in the site table")
        logger.info(f"  Records: {len(records)}")
        logger.info(f"  Trees located: {len(coordinates)}, dropped: {len(dropped)}")

        # Step 2: Daily leaf-fall series (Domain)
        logger.info("Building daily leaf-fall series...")
        series = [to_daily_series(grouped[tree_id], first, last) for tree_id in coordinates]

        # Step 3: Index rasters (Adapters + Domain)
        logger.info(f"Sampling rasters in: {paths.raster_dir}")
        rasters = load_index_samples(Path(paths.raster_dir), coordinates, features.kinds)
        indices = [
            build_index_series(rasters.samples[(tree_id, kind)], tree_id, first, last)
            for tree_id in coordinates
            for kind in features.kinds
        ]

        # Step 4: Weather (Adapters)
        logger.info(f"Loading weather from: {paths.era5}")
        weather = parse_era5_csv(
            _read_text(paths.era5, "weather"),
            features.weather_columns,
            rename=features.weather_rename,
            source=Path(paths.era5).name
        )

        # Step 5: Join (Domain)
        logger.info("Joining sources...")
        table = add_week_of_year(join_sources(series, indices, weather, features.kinds))

        with open(self._out("daily_series.csv"), "w", encoding="utf-8", newline="") as handle:
            write_daily_series_csv(series, handle)
        with open(self._out("feature_table.csv"), "w", encoding="utf-8", newline="") as handle:
            write_feature_table(table, handle, include_species=True)
        with open(self._out("scene_stats.csv"), "w", encoding="utf-8", newline="") as handle:
            write_scene_stats_csv(rasters.scene_stats, handle)

        warnings = [w for s in series for w in s.warnings] + list(table.warnings)
        self._manifest(
            "ingest",
            ["daily_series.csv", "feature_table.csv", "scene_stats.csv"],
            {"dropped_trees": dropped, "warnings": warnings}
        )

        logger.info("=" * 80)
        logger.info(f"[SUCCESS] Ingested {len(series)} tree(s), {len(table)} feature row(s)")
        logger.info("=" * 80)

        self._ingested = IngestResult(
            series=series,
            table=table,
            coordinates=coordinates,
            dropped_trees=dropped,
            scene_stats=rasters.scene_stats
        )
        return self._ingested

    # ==========================================
    # build-dataset
    # ==========================================

    def _holdout_tree(self, tree_ids: List[str]) -> str:
        configured = self.config.features.holdout_tree
        if configured is None:
            return sorted(tree_ids)[-1]
        if configured not in tree_ids:
            raise DataError(f"holdout tree {configured} not in the data ({', '.join(sorted(tree_ids))})")
        return configured

    def _prepare(
        self,
        table: FeatureTable,
        scaler: ScalerParams,
        species: List[str],
        holdout_tree: str
    ) -> PreparedDataset:
        encoded = one_hot_species(table, species)
        scaled = apply_minmax(encoded, scaler)
        return self._split(scaled, scaler, species, holdout_tree)

    def _split(
        self,
        scaled: FeatureTable,
        scaler: ScalerParams,
        species: List[str],
        holdout_tree: str
    ) -> PreparedDataset:
        features = self.config.features
        windows = make_windows(scaled, self.config.model.window_size)
        train, val, holdout = split_temporal(windows, features.train_years, features.val_year, holdout_tree)
        logger.info(f"  Examples: {len(windows)} (train {len(train)}, val {len(val)}, "
                    f"holdout {holdout_tree} {len(holdout)})")
        return PreparedDataset(
            table=scaled,
            scaler=scaler,
            species=list(species),
            windows=windows,
            train=train,
            val=val,
            holdout=holdout,
            holdout_tree=holdout_tree
        )

    def build_dataset(self, ingested: Optional[IngestResult] = None) -> PreparedDataset:
        """
        Encode, scale and window the joined table.

        Species codes and scaler ranges are fitted on the training years
        of the non-holdout trees only. Writes the scaled table and its
        manifest for reuse by later subcommands.
        """
        ingested = ingested or self._ingested or self.ingest()
        features = self.config.features
        _banner("BUILD DATASET")

        table = ingested.table
        holdout_tree = self._holdout_tree(table.tree_ids)
        frame = table.frame
        fit_rows = (
            frame["date"].dt.year.isin(features.train_years) & (frame["tree_id"] != holdout_tree)
        ).to_numpy()
        if not fit_rows.any():
            raise DataError("no training rows to fit the scaler on")

        species = fit_species(table, fit_rows)
        scaler = fit_minmax(table, fit_rows)
        logger.info(f"  Scaler fitted on {int(fit_rows.sum())} row(s), species {species}")
        prepared = self._prepare(table, scaler, species, holdout_tree)

        with open(self._out(SCALED_TABLE), "w", encoding="utf-8", newline="") as handle:
            write_feature_table(prepared.table, handle, include_species=True)
        document = feature_manifest(prepared.table, scaler, species)
        document["holdout_tree"] = holdout_tree
        document["dataset_key"] = self._dataset_key()
        write_json(document, self._out(FEATURE_MANIFEST))

        self._manifest("build-dataset", [SCALED_TABLE, FEATURE_MANIFEST], {"holdout_tree": holdout_tree})
        logger.info(f"[SUCCESS] Dataset ready: {len(prepared.feature_names)} feature(s)")
        return prepared

    def _load_cached_dataset(self) -> Optional[PreparedDataset]:
        manifest_path = self.output_dir / FEATURE_MANIFEST
        table_path = self.output_dir / SCALED_TABLE
        if not (manifest_path.is_file() and table_path.is_file()):
            return None

        document = read_feature_manifest(manifest_path)
        if document.get("dataset_key") != self._dataset_key() or document["scaler"] is None:
            logger.warning("  Cached feature table was built from other inputs or settings, rebuilding")
            return None

        logger.info(f"Reusing scaled feature table: {table_path}")
        table = read_feature_table(
            table_path.read_text(encoding="utf-8"),
            document["numeric_columns"],
            document["species_columns"],
            source=table_path.name
        )
        return self._split(table, document["scaler"], document["species"], document["holdout_tree"])

    def dataset(self, scaler: Optional[ScalerParams] = None, species: Optional[List[str]] = None) -> PreparedDataset:
        """
        The prepared dataset, reused from the output directory when it matches.

        A checkpoint's scaler and species, when given, override the ones
        fitted on the data.
        """
        cached = self._load_cached_dataset()
        if cached is not None and (scaler is None or (cached.scaler == scaler and cached.species == list(species or []))):
            return cached

        if scaler is None:
            return self.build_dataset()
        ingested = self._ingested or self.ingest()
        holdout_tree = self._holdout_tree(ingested.table.tree_ids)
        return self._prepare(ingested.table, scaler, list(species or []), holdout_tree)

    # ==========================================
    # train / tune
    # ==========================================

    def _checkpoint(self, result: TrainingResult, data: PreparedDataset, extra: Optional[Dict] = None) -> Checkpoint:
        metadata = {
            "config_hash": self.config.config_hash(),
            "holdout_tree": data.holdout_tree,
            "train_years": self.config.features.train_years,
            "val_year": self.config.features.val_year,
            "epochs_trained": result.epochs_trained,
        }
        metadata.update(extra or {})
        return Checkpoint(
            model=result.model,
            scaler=data.scaler,
            species=data.species,
            optimizer_state=result.optimizer_state,
            metadata=metadata
        )

    def train(self) -> TrainingResult:
        """
        Train the configured model.

        Writes model.ckpt, metrics.csv and the learning-curve charts.
        """
        data = self.dataset()
        config = self.config.model.with_features(len(data.feature_names))
        _banner(f"TRAIN {config.describe()}")

        result = fit(data.train, data.val, config)

        write_checkpoint(self._checkpoint(result, data), self._out(MODEL_CHECKPOINT))
        with open(self._out("metrics.csv"), "w", encoding="utf-8", newline="") as handle:
            write_metrics_csv(result.metrics, handle)
        charts = plot_learning_curves(result.metrics, self.output_dir)

        self._manifest("train", [MODEL_CHECKPOINT, "metrics.csv"] + [p.name for p in charts])
        logger.info("=" * 80)
        logger.info(f"[SUCCESS] Trained {result.epochs_trained} epoch(s), final val_loss={result.final_val_loss:.4f}")
        logger.info("=" * 80)
        return result

    def tune(self) -> TuneReport:
        """
        Hyperband search over the model space.

        Writes tune_report.csv and best_model.ckpt.

        Raises:
            NumericError: every trial diverged
        """
        data = self.dataset()
        tuner = self.config.tuner
        base = self.config.model.with_features(len(data.feature_names))

        best, report = run_hyperband(
            tuner.space(),
            data.train,
            data.val,
            R=tuner.R,
            eta=tuner.eta,
            seed=tuner.seed,
            base_config=base,
            jobs=tuner.jobs
        )

        with open(self._out("tune_report.csv"), "w", encoding="utf-8", newline="") as handle:
            write_tune_report_csv(report.records, handle)
        if report.best_state is None:
            raise NumericError("every Hyperband trial diverged, no model to save")
        write_checkpoint(
            self._checkpoint(report.best_state, data, {"trial_id": best.trial_id}),
            self._out(BEST_CHECKPOINT)
        )

        self._manifest("tune", ["tune_report.csv", BEST_CHECKPOINT], {
            "best_trial_id": best.trial_id,
            "best_val_loss": report.best_val_loss,
            "best_config": json.loads(best.to_json()),
            "trials": report.trial_count,
            "epochs_trained": report.epochs_trained,
        })
        return report

    # ==========================================
    # evaluate / predict
    # ==========================================

    def _checkpoint_path(self, explicit: Optional[str]) -> Path:
        if explicit:
            return Path(explicit)
        if self.config.paths.checkpoint:
            return Path(self.config.paths.checkpoint)
        return self.output_dir / MODEL_CHECKPOINT

    def _actual_periods(self, windows: WindowedDataset) -> List[PeriodSummary]:
        """Truth file periods when present, else periods of the observed labels."""
        trees = set(windows.tree_ids)
        years = set(int(y) for y in windows.years)
        truth = Path(self.config.paths.truth)
        if truth.is_file():
            logger.info(f"  Actual periods from: {truth}")
            periods = read_truth_periods_csv(truth.read_text(encoding="utf-8"), source=truth.name)
        else:
            logger.info("  Actual periods from the observed labels")
            periods = periods_from_labels(windows, windows.y)
        return [p for p in periods if p.tree_id in trees and p.year in years]

    def _daily_series(self) -> List[DailyLeafSeries]:
        if self._ingested is not None:
            return self._ingested.series
        path = self.output_dir / "daily_series.csv"
        if path.is_file():
            return read_daily_series_csv(path.read_text(encoding="utf-8"), source=path.name)
        return self.ingest().series

    def _metrics_history(self) -> List[EpochMetrics]:
        path = self.output_dir / "metrics.csv"
        if not path.is_file():
            return []
        frame = read_metrics_csv(path.read_text(encoding="utf-8"), source=path.name)
        return [
            EpochMetrics(int(r.epoch), float(r.train_loss), float(r.train_acc), float(r.val_loss), float(r.val_acc))
            for r in frame.itertuples(index=False)
        ]

    def evaluate(self, checkpoint_path: Optional[str] = None) -> EvaluationResult:
        """
        Score a checkpoint on the holdout tree and on every tree's periods.

        Writes classification_report.csv, periods.csv, rmse.csv,
        daily_predictions.csv, per-year comparison charts, trajectories
        and evaluation_report.xlsx.
        """
        path = self._checkpoint_path(checkpoint_path)
        _banner(f"EVALUATE {path}")

        # Step 1: Model and dataset (Adapters)
        checkpoint = read_checkpoint(path)
        data = self.dataset(checkpoint.scaler, checkpoint.species)
        model = checkpoint.model
        threshold = self.config.model.threshold
        if len(data.holdout) == 0:
            raise DataError(f"holdout tree {data.holdout_tree} has no examples")

        # Step 2: Predictions and metrics (Domain)
        logger.info("Predicting...")
        holdout_predictions = predict_labels(model, data.holdout, threshold)
        all_predictions = predict_labels(model, data.windows, threshold)
        classification = classification_report(data.holdout.y, holdout_predictions.labels)
        logger.info(f"  Holdout accuracy: {classification.accuracy:.4f}, leaf-fall F1: {classification.leaf_fall.f1:.4f}")

        predicted = periods_from_labels(data.windows, all_predictions.labels, self.config.evaluation.gap_days)
        actual = self._actual_periods(data.windows)
        predicted_all = predicted + aggregate_periods(predicted)
        actual_all = actual + aggregate_periods(actual)

        warnings: List[str] = []
        scopes = {
            "holdout": (
                [p for p in predicted if p.tree_id == data.holdout_tree],
                [a for a in actual if a.tree_id == data.holdout_tree],
            ),
            "all": (predicted, actual),
            "aggregate": (aggregate_periods(predicted), aggregate_periods(actual)),
        }
        rmse = {}
        for scope, (pred, act) in scopes.items():
            try:
                rmse[scope] = rmse_report(pred, act)
            except DataError as exc:
                message = f"RMSE scope '{scope}' skipped: {exc}"
                logger.warning(message)
                warnings.append(message)
                continue
            report = rmse[scope]
            warnings.extend(f"{scope}: excluded {item}" for item in report.excluded)
            logger.info(f"  RMSE {scope}: start {report.rmse_start:.2f}, end {report.rmse_end:.2f}, "
                        f"overall {report.rmse_overall:.2f} days")

        # Step 3: Exports (Adapters)
        artifacts = ["classification_report.csv", "periods.csv", "rmse.csv", "daily_predictions.csv"]
        with open(self._out("classification_report.csv"), "w", encoding="utf-8", newline="") as handle:
            write_classification_csv(classification, handle)
        with open(self._out("periods.csv"), "w", encoding="utf-8", newline="") as handle:
            write_periods_csv(predicted_all, actual_all, handle)
        with open(self._out("rmse.csv"), "w", encoding="utf-8", newline="") as handle:
            write_rmse_csv(rmse, handle)

        comparison = pd.DataFrame({
            "tree_id": data.holdout.tree_ids,
            "date": pd.DatetimeIndex(data.holdout.target_dates),
            "probability": holdout_predictions.probabilities,
            "predicted": holdout_predictions.labels,
            "actual": data.holdout.y,
        })
        with open(self._out("daily_predictions.csv"), "w", encoding="utf-8", newline="") as handle:
            write_daily_comparison_csv(comparison, handle)

        curves = trajectory_summary(self._daily_series())
        with open(self._out("trajectories.csv"), "w", encoding="utf-8", newline="") as handle:
            write_trajectory_csv(curves, handle)
        artifacts.append("trajectories.csv")

        # Step 4: Charts and workbook (Presentation)
        logger.info("Rendering charts...")
        artifacts.append(plot_trajectories(curves, self._out("trajectories.svg")).name)
        low, high = COMPARISON_MONTHS
        for year, rows in comparison.groupby(comparison["date"].dt.year):
            autumn = rows[(rows["date"].dt.month >= low) & (rows["date"].dt.month <= high)]
            if autumn.empty:
                continue
            chart = self._out(f"predicted_vs_actual_{data.holdout_tree}_{year}.svg")
            artifacts.append(plot_period_comparison(autumn, data.holdout_tree, int(year), chart).name)

        result = EvaluationResult(
            classification=classification,
            predicted_periods=predicted_all,
            actual_periods=actual_all,
            rmse=rmse,
            metrics=self._metrics_history(),
            holdout_tree=data.holdout_tree,
            model_description=model.config.describe(),
            config_hash=self.config.config_hash(),
            threshold=threshold,
            warnings=warnings
        )
        report_data = self.data_generator.generate_report_data(result)
        workbook = self._out("evaluation_report.xlsx")
        logger.info(f"Creating Excel report: {workbook}")
        self.excel_presenter.create_workbook(report_data, workbook)
        artifacts.append(workbook.name)

        self._manifest("evaluate", artifacts, {"checkpoint": str(path), "holdout_tree": data.holdout_tree})
        logger.info("=" * 80)
        logger.info("[SUCCESS] Evaluation complete!")
        logger.info(f"Report saved to: {workbook}")
        logger.info("=" * 80)
        return result

    def predict(self, checkpoint_path: Optional[str] = None) -> Path:
        """
        Label every example day of every tree.

        Returns:
            Path of predictions.csv (tree_id,date,probability,label)
        """
        path = self._checkpoint_path(checkpoint_path)
        _banner(f"PREDICT {path}")
        checkpoint = read_checkpoint(path)
        data = self.dataset(checkpoint.scaler, checkpoint.species)

        predictions = predict_labels(checkpoint.model, data.windows, self.config.model.threshold)
        output = self._out("predictions.csv")
        with open(output, "w", encoding="utf-8", newline="") as handle:
            write_predictions_csv(data.windows.tree_ids, data.windows.target_dates,
                                  predictions.probabilities, predictions.labels, handle)

        self._manifest("predict", [output.name], {"checkpoint": str(path)})
        logger.info(f"[SUCCESS] {int(predictions.labels.sum())} of {len(predictions)} day(s) labeled leaf-fall")
        return output

    # ==========================================
    # synth
    # ==========================================

    def synth(self) -> List[Path]:
        """Generate a synthetic site into the configured input paths."""
        synth, paths = self.config.synth, self.config.paths
        _banner(f"SYNTH seed={synth.seed} trees={synth.tree_count} years={synth.first_year}-{synth.last_year}")

        dataset = generate(synth)
        written = write_dataset(
            dataset,
            pheno=Path(paths.pheno),
            sites=Path(paths.sites),
            era5=Path(paths.era5),
            raster_dir=Path(paths.raster_dir),
            truth=Path(paths.truth)
        )

        self._manifest(
            "synth",
            [str(p) for p in written[:5]] + [paths.raster_dir],
            {"raster_files": len(written) - 5, "truth_periods": len(dataset.truth_periods)}
        )
        logger.info(f"[SUCCESS] Synthetic site written: {len(written)} file(s)")
        return written
