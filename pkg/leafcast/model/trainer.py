"""
Training Loop and Prediction

Mini-batch training with a seeded shuffle per epoch, Adam updates and
per-epoch loss / accuracy on the training and validation sets.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..domain.models import WindowedDataset
from ..errors import DataError, NumericError
from .config import ModelConfig
from .lstm import DEFAULT_CLIP_NORM, LstmModel, bce_loss, build_model, forward, loss_and_gradients
from .optimizer import AdamState, adam_step

logger = logging.getLogger(__name__)

INFERENCE_CHUNK = 1024


@dataclass(frozen=True)
class EpochMetrics:
    """Loss and accuracy after one epoch (validation is NaN without examples)."""
    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float


@dataclass
class TrainingResult:
    """Model, metric history and optimizer state of a (possibly resumed) run."""
    model: LstmModel
    metrics: List[EpochMetrics] = field(default_factory=list)
    optimizer_state: Optional[AdamState] = None

    @property
    def epochs_trained(self) -> int:
        return self.metrics[-1].epoch if self.metrics else 0

    @property
    def final_val_loss(self) -> float:
        return self.metrics[-1].val_loss if self.metrics else math.inf


@dataclass
class Predictions:
    """Per-example probability and thresholded label."""
    probabilities: np.ndarray
    labels: np.ndarray
    threshold: float

    def __len__(self) -> int:
        return len(self.probabilities)


def predict_proba(model: LstmModel, X: np.ndarray) -> np.ndarray:
    """Inference-mode probabilities, evaluated in fixed-size chunks."""
    if len(X) == 0:
        return np.zeros(0)
    parts = []
    for start in range(0, len(X), INFERENCE_CHUNK):
        probabilities, _ = forward(X[start:start + INFERENCE_CHUNK], model, training=False)
        parts.append(np.atleast_1d(probabilities))
    return np.concatenate(parts)


def _check_features(model: LstmModel, dataset: WindowedDataset) -> None:
    if model.feature_names and list(dataset.feature_names) != list(model.feature_names):
        raise DataError(
            f"dataset features {list(dataset.feature_names)} do not match the model's {list(model.feature_names)}"
        )
    if len(dataset) and dataset.X.shape[2] != model.layers[0].inputs:
        raise DataError(f"dataset has {dataset.X.shape[2]} features, model expects {model.layers[0].inputs}")


def evaluate_loss(model: LstmModel, dataset: WindowedDataset, threshold: float) -> Tuple[float, float]:
    """(mean BCE, accuracy) in inference mode; (NaN, NaN) when empty."""
    if len(dataset) == 0:
        return math.nan, math.nan
    probabilities = predict_proba(model, dataset.X)
    loss = bce_loss(probabilities, dataset.y)
    accuracy = float(np.mean((probabilities >= threshold) == dataset.y))
    return loss, accuracy


def fit(
    train_set: WindowedDataset,
    val_set: WindowedDataset,
    config: ModelConfig,
    resume: Optional[TrainingResult] = None,
    epochs: Optional[int] = None,
    clip_norm: Optional[float] = DEFAULT_CLIP_NORM
) -> TrainingResult:
    """
    Train a new model, or continue a previous run.

    Epoch k draws its shuffle and dropout masks from
    default_rng([seed, k]), so a run resumed after epoch k matches an
    uninterrupted one.

    Args:
        train_set: Training examples (must not be empty)
        val_set: Validation examples (may be empty)
        config: Architecture and training settings
        resume: Result of an earlier run to continue; None starts fresh
        epochs: Additional epochs to train; defaults to config.epochs

    Raises:
        DataError: empty training set or feature mismatch
        NumericError: the loss became non-finite
    """
    if len(train_set) == 0:
        raise DataError("training set is empty")

    if resume is None:
        model = build_model(config, feature_names=train_set.feature_names)
        state = AdamState.zeros_like(model.parameters())
        history: List[EpochMetrics] = []
    else:
        model = resume.model
        state = resume.optimizer_state or AdamState.zeros_like(model.parameters())
        history = list(resume.metrics)

    _check_features(model, train_set)
    if len(val_set):
        _check_features(model, val_set)

    done = history[-1].epoch if history else 0
    extra = config.epochs if epochs is None else epochs
    n = len(train_set)

    for epoch in range(done + 1, done + extra + 1):
        rng = np.random.default_rng([config.seed, epoch])
        order = rng.permutation(n)

        for batch_index, start in enumerate(range(0, n, config.batch_size)):
            rows = order[start:start + config.batch_size]
            try:
                _, grads = loss_and_gradients(
                    model, train_set.X[rows], train_set.y[rows],
                    training=True, rng=rng, clip_norm=clip_norm
                )
            except NumericError as exc:
                raise NumericError(f"epoch {epoch}, batch {batch_index + 1}: {exc}") from exc
            params, state = adam_step(model.parameters(), grads, state, config.learning_rate)
            model.load_parameters(params)

        train_loss, train_acc = evaluate_loss(model, train_set, config.threshold)
        val_loss, val_acc = evaluate_loss(model, val_set, config.threshold)
        if not math.isfinite(train_loss):
            raise NumericError(f"epoch {epoch}: training loss is {train_loss}")

        metrics = EpochMetrics(epoch, train_loss, train_acc, val_loss, val_acc)
        history.append(metrics)
        logger.info(
            f"  Epoch {epoch}/{done + extra}: loss={train_loss:.4f} acc={train_acc:.4f} "
            f"val_loss={val_loss:.4f} val_acc={val_acc:.4f}"
        )

    return TrainingResult(model=model, metrics=history, optimizer_state=state)


def train(
    train_set: WindowedDataset,
    val_set: WindowedDataset,
    config: ModelConfig
) -> Tuple[LstmModel, List[EpochMetrics]]:
    """Fresh training run; returns the model and its metric history."""
    result = fit(train_set, val_set, config)
    return result.model, result.metrics


def predict(model: LstmModel, dataset: WindowedDataset, threshold: float = 0.5) -> Predictions:
    """
    Probabilities in inference mode and labels = probability >= threshold.

    Raises:
        ValueError: threshold outside (0, 1)
        DataError: dataset features differ from the model's
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    _check_features(model, dataset)

    probabilities = predict_proba(model, dataset.X)
    return Predictions(probabilities=probabilities, labels=probabilities >= threshold, threshold=threshold)
