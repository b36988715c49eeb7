"""
Search Space

Hyperparameter sets the tuner draws model configurations from.
"""

import json
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..model.config import ACTIVATION_NAMES, LayerSpec, ModelConfig

SEED_LIMIT = 2**31 - 1


@dataclass(frozen=True)
class SearchSpace:
    """Allowed values per dimension; every draw is uniform over its set."""
    min_layers: int = 1
    max_layers: int = 3
    units: Tuple[int, ...] = tuple(range(32, 513, 32))
    activations: Tuple[str, ...] = ACTIVATION_NAMES
    learning_rates: Tuple[float, ...] = (0.01, 0.001, 0.0001)
    dropout_rates: Tuple[float, ...] = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)

    def __post_init__(self):
        if not 1 <= self.min_layers <= self.max_layers:
            raise ValueError(f"layer range [{self.min_layers}, {self.max_layers}] is empty")
        for name in ("units", "activations", "learning_rates", "dropout_rates"):
            if not getattr(self, name):
                raise ValueError(f"search space dimension '{name}' is empty")

    def contains(self, config: ModelConfig) -> bool:
        """True if every value of config lies in this space."""
        layers = config.layers
        return (
            self.min_layers <= len(layers) <= self.max_layers
            and all(layer.units in self.units for layer in layers)
            and all(layer.activation in self.activations for layer in layers)
            and config.learning_rate in self.learning_rates
            and layers[0].dropout_rate in self.dropout_rates
            and all(layer.dropout_rate == 0.0 for layer in layers[1:])
        )


@dataclass(frozen=True)
class TrialConfig:
    """A sampled model configuration with its trial id and training seed."""
    trial_id: int
    config: ModelConfig
    seed: int

    def to_json(self) -> str:
        """Compact, key-sorted description for reports."""
        data = {
            "layers": [
                {"units": l.units, "activation": l.activation, "dropout_rate": l.dropout_rate}
                for l in self.config.layers
            ],
            "learning_rate": self.config.learning_rate,
            "seed": self.seed,
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))


def sample_config(
    space: SearchSpace,
    rng: np.random.Generator,
    base: Optional[ModelConfig] = None,
    trial_id: int = 0
) -> TrialConfig:
    """
    Draw one configuration.

    Units and activation are drawn independently per layer; only the
    first layer gets a dropout rate. Window, batch size, epochs and
    threshold come from base.
    """
    base = base or ModelConfig()
    count = int(rng.integers(space.min_layers, space.max_layers + 1))

    layers = []
    for _ in range(count):
        units = int(space.units[rng.integers(len(space.units))])
        activation = str(space.activations[rng.integers(len(space.activations))])
        layers.append((units, activation))
    learning_rate = float(space.learning_rates[rng.integers(len(space.learning_rates))])
    dropout = float(space.dropout_rates[rng.integers(len(space.dropout_rates))])
    seed = int(rng.integers(SEED_LIMIT))

    specs = [
        LayerSpec(units, activation, dropout if k == 0 else 0.0)
        for k, (units, activation) in enumerate(layers)
    ]
    config = base.replace(layers=specs, learning_rate=learning_rate, seed=seed)
    return TrialConfig(trial_id=trial_id, config=config, seed=seed)
