"""Shared fixtures: small synthetic sites, tiny models and windowed datasets."""

from datetime import date
from pathlib import Path

import numpy as np
import pytest

from leafcast.application.synth import generate, write_dataset
from leafcast.config import PathsConfig, RunConfig, SynthConfig
from leafcast.domain.models import PhenoRecord, WindowedDataset
from leafcast.model.config import LayerSpec, ModelConfig


def make_records(tree_id, species, observations):
    """PhenoRecords from {iso date: lfall} pairs."""
    return [
        PhenoRecord(date=date.fromisoformat(day), tree_id=tree_id, species=species, lfall_pct=value)
        for day, value in observations.items()
    ]


def tiny_config(units=(3,), activations=None, window=3, features=2, **changes):
    activations = activations or ["tanh"] * len(units)
    layers = [LayerSpec(u, a) for u, a in zip(units, activations)]
    return ModelConfig(layers=layers, window_size=window, feature_count=features, **changes)


def separable_dataset(n=20, window=3, features=2, seed=0):
    """Label = mean of the first feature over the window is above 0.5."""
    rng = np.random.default_rng(seed)
    X = rng.random((n, window, features))
    y = X[:, :, 0].mean(axis=1) > 0.5
    # push classes apart so the problem is clearly separable
    X[y, :, 0] += 0.5
    X[~y, :, 0] -= 0.5
    days = np.datetime64("2020-01-01") + np.arange(n)
    return WindowedDataset(
        X=X,
        y=y,
        tree_ids=np.array(["T01"] * n, dtype=object),
        target_dates=days,
        feature_names=[f"f{k}" for k in range(features)],
        window_size=window
    )


@pytest.fixture
def small_synth():
    return SynthConfig(seed=3, first_year=2019, last_year=2021, tree_count=2, scene_interval=10)


@pytest.fixture
def site_config(tmp_path: Path, small_synth) -> RunConfig:
    """RunConfig whose input paths hold a freshly generated three-year site."""
    data = tmp_path / "data"
    paths = PathsConfig(
        pheno=str(data / "pheno.csv"),
        sites=str(data / "sites.csv"),
        era5=str(data / "era5.csv"),
        raster_dir=str(data / "rasters"),
        truth=str(data / "truth_periods.csv"),
        output_dir=str(tmp_path / "out"),
    )
    config = RunConfig(paths=paths, synth=small_synth)
    config = RunConfig.from_flat_dict({
        **config.to_flat_dict(),
        "features.first_year": 2019,
        "features.last_year": 2021,
        "features.val_year": 2021,
        "model.layers": [{"units": 4, "activation": "tanh", "dropout_rate": 0.0}],
        "model.epochs": 2,
        "model.batch_size": 64,
    })
    write_dataset(
        generate(small_synth),
        pheno=Path(paths.pheno),
        sites=Path(paths.sites),
        era5=Path(paths.era5),
        raster_dir=Path(paths.raster_dir),
        truth=Path(paths.truth)
    )
    return config
