"""
Model Configuration

Layer sizes, activations, dropout and training settings of the LSTM
classifier. The defaults are the tuned architecture: 256 tanh units with
0.1 input dropout followed by two 32-unit relu layers, lr 0.001.
"""

from dataclasses import asdict, dataclass, field
from typing import List

ACTIVATION_NAMES = ("tanh", "relu", "sigmoid")
MAX_DROPOUT = 0.5


@dataclass(frozen=True)
class LayerSpec:
    """One LSTM layer: units, candidate/cell activation, input dropout."""
    units: int
    activation: str = "tanh"
    dropout_rate: float = 0.0

    def __post_init__(self):
        if self.units < 1:
            raise ValueError(f"layer units must be positive, got {self.units}")
        if self.activation not in ACTIVATION_NAMES:
            raise ValueError(f"activation must be one of {ACTIVATION_NAMES}, got {self.activation!r}")
        if not 0.0 <= self.dropout_rate <= MAX_DROPOUT:
            raise ValueError(f"dropout_rate must be in [0, {MAX_DROPOUT}], got {self.dropout_rate}")


def default_layers() -> List[LayerSpec]:
    return [
        LayerSpec(256, "tanh", 0.1),
        LayerSpec(32, "relu", 0.0),
        LayerSpec(32, "relu", 0.0),
    ]


@dataclass(frozen=True)
class ModelConfig:
    """
    Architecture and training settings.

    feature_count may be 0 until the dataset is known; use
    with_features() before building a model.
    """
    layers: List[LayerSpec] = field(default_factory=default_layers)
    learning_rate: float = 0.001
    window_size: int = 7
    feature_count: int = 0
    epochs: int = 10
    batch_size: int = 32
    seed: int = 7
    threshold: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "layers", [
            layer if isinstance(layer, LayerSpec) else LayerSpec(**layer)
            for layer in self.layers
        ])
        if not self.layers:
            raise ValueError("a model needs at least one LSTM layer")
        if any(layer.dropout_rate for layer in self.layers[1:]):
            raise ValueError("only the first LSTM layer takes dropout")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.window_size < 1:
            raise ValueError(f"window_size must be positive, got {self.window_size}")
        if self.feature_count < 0:
            raise ValueError(f"feature_count must not be negative, got {self.feature_count}")
        if self.epochs < 0:
            raise ValueError(f"epochs must not be negative, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")

    def with_features(self, feature_count: int) -> "ModelConfig":
        return self.replace(feature_count=feature_count)

    def replace(self, **changes) -> "ModelConfig":
        values = self.to_dict()
        values.update(changes)
        return ModelConfig.from_dict(values)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        values = dict(data)
        values["layers"] = [
            layer if isinstance(layer, LayerSpec) else LayerSpec(**layer)
            for layer in values.get("layers", default_layers())
        ]
        return cls(**values)

    @property
    def input_dropout(self) -> float:
        """Dropout applied to the first layer's input sequence."""
        return self.layers[0].dropout_rate

    def describe(self) -> str:
        """Compact one-line summary, e.g. '256-tanh(0.1) 32-relu 32-relu lr=0.001'."""
        parts = []
        for layer in self.layers:
            text = f"{layer.units}-{layer.activation}"
            if layer.dropout_rate:
                text += f"({layer.dropout_rate:g})"
            parts.append(text)
        return " ".join(parts) + f" lr={self.learning_rate:g}"
