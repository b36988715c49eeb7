"""From-scratch numpy LSTM classifier, Adam optimizer and training loop."""

from .config import LayerSpec, ModelConfig, default_layers
from .lstm import LstmModel, backward, bce_loss, build_model, forward, init_params
from .optimizer import AdamState, adam_step
from .trainer import EpochMetrics, Predictions, TrainingResult, fit, predict, train

__all__ = [
    "LayerSpec",
    "ModelConfig",
    "default_layers",
    "LstmModel",
    "backward",
    "bce_loss",
    "build_model",
    "forward",
    "init_params",
    "AdamState",
    "adam_step",
    "EpochMetrics",
    "Predictions",
    "TrainingResult",
    "fit",
    "predict",
    "train",
]
