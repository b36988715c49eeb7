"""
SVG Charts

Learning curves, predicted vs actual leaf-fall days and species
trajectories, rendered with matplotlib's Agg backend. Output is
byte-stable for identical inputs (fixed hash salt, no date metadata).
"""

from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from ..domain.models import TrajectoryCurve  # noqa: E402

plt.rcParams["svg.hashsalt"] = "leafcast"
plt.rcParams["svg.fonttype"] = "none"

FIGSIZE = (7.0, 4.0)


def _save(fig, path: Path) -> Path:
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_learning_curves(metrics: Sequence, output_dir: Path) -> List[Path]:
    """
    Accuracy per epoch and loss per epoch, each with train and validation lines.

    Returns:
        Paths of learning_curve_accuracy.svg and learning_curve_loss.svg
    """
    epochs = [m.epoch for m in metrics]
    paths = []
    for name, train_key, val_key, ylabel in (
        ("accuracy", "train_acc", "val_acc", "Accuracy"),
        ("loss", "train_loss", "val_loss", "Binary cross entropy"),
    ):
        fig, ax = plt.subplots(figsize=FIGSIZE)
        ax.plot(epochs, [getattr(m, train_key) for m in metrics], marker="o", label="train", gid="train")
        ax.plot(epochs, [getattr(m, val_key) for m in metrics], marker="o", label="validation", gid="validation")
        ax.set_xlabel("Epoch")
        ax.set_ylabel(ylabel)
        ax.set_title(f"{ylabel} per epoch")
        ax.legend()
        ax.grid(alpha=0.3)
        paths.append(_save(fig, Path(output_dir) / f"learning_curve_{name}.svg"))
    return paths


def plot_period_comparison(comparison: pd.DataFrame, tree_id: str, year: int, path: Path) -> Path:
    """
    Predicted and actual leaf-fall days of one tree in one year.

    Args:
        comparison: Rows with date, probability, predicted, actual
    """
    dates = pd.DatetimeIndex(comparison["date"])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.step(dates, comparison["actual"].astype(float) + 0.02, where="mid", label="actual", gid="actual")
    ax.step(dates, comparison["predicted"].astype(float), where="mid", label="predicted", gid="predicted")
    ax.plot(dates, comparison["probability"], linewidth=0.8, alpha=0.6, label="probability", gid="probability")
    ax.set_ylim(-0.05, 1.1)
    ax.set_yticks([0, 1])
    ax.set_yticklabels(["no leaf-fall", "leaf-fall"])
    ax.set_title(f"Predicted vs actual leaf-fall days: {tree_id} {year}")
    ax.legend(loc="upper left")
    fig.autofmt_xdate()
    return _save(fig, path)


def plot_trajectories(curves: Dict[str, TrajectoryCurve], path: Path) -> Path:
    """Mean leaf-fall percentage per day of year, one line per species."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    days = np.arange(1, 366)
    for species, curve in curves.items():
        ax.plot(days, curve.values, label=f"{species} (n={curve.series_count})", gid=f"species-{species}")
    ax.set_xlim(230, 365)
    ax.set_ylim(0, 100)
    ax.set_xlabel("Day of year")
    ax.set_ylabel("Leaf-fall (%)")
    ax.set_title("Leaf-fall for tree species")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)
