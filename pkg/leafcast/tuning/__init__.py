"""Hyperband hyperparameter search over LSTM configurations."""

from .hyperband import (
    BracketPlan,
    DatasetTrialTrainer,
    TrialOutcome,
    TrialRecord,
    TuneReport,
    hyperband_schedule,
    run_hyperband,
)
from .space import SearchSpace, TrialConfig, sample_config

__all__ = [
    "BracketPlan",
    "DatasetTrialTrainer",
    "TrialOutcome",
    "TrialRecord",
    "TuneReport",
    "hyperband_schedule",
    "run_hyperband",
    "SearchSpace",
    "TrialConfig",
    "sample_config",
]
