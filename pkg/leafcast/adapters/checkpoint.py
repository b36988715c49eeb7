"""
Checkpoint Adapter

Versioned JSON container for a trained model, its feature layout and
scaler parameters. Tensors are stored as declared shapes plus flat
row-major float64 values; floats are written with repr precision, so a
save / load round trip is bit-exact.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..domain.models import ScalerParams
from ..errors import CheckpointError
from ..model.config import ModelConfig
from ..model.lstm import DenseHeadParams, LstmLayerParams, LstmModel
from ..model.optimizer import AdamState

logger = logging.getLogger(__name__)

MAGIC = "LEAFCAST-CKPT-1"
FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    """Everything needed to rebuild a model and prepare its inputs."""
    model: LstmModel
    scaler: Optional[ScalerParams] = None
    species: List[str] = field(default_factory=list)
    optimizer_state: Optional[AdamState] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def feature_names(self) -> List[str]:
        return list(self.model.feature_names)


def _encode_tensor(array: np.ndarray) -> dict:
    array = np.asarray(array, dtype=np.float64)
    return {"shape": list(array.shape), "values": [float(v) for v in array.ravel()]}


def _decode_tensor(name: str, data: dict) -> np.ndarray:
    try:
        shape = tuple(int(n) for n in data["shape"])
        values = np.array(data["values"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"tensor {name} is malformed: {exc}")
    if values.size != int(np.prod(shape)):
        raise CheckpointError(f"tensor {name} declares shape {shape} but holds {values.size} values")
    if not np.all(np.isfinite(values)):
        raise CheckpointError(f"tensor {name} contains non-finite values")
    return values.reshape(shape)


def checkpoint_to_dict(checkpoint: Checkpoint) -> dict:
    model = checkpoint.model
    document = {
        "magic": MAGIC,
        "format_version": FORMAT_VERSION,
        "config": model.config.to_dict(),
        "feature_names": list(model.feature_names),
        "scaler": {
            "params": checkpoint.scaler.to_dict() if checkpoint.scaler else {},
            "species": list(checkpoint.species),
        },
        "tensors": {name: _encode_tensor(value) for name, value in model.parameters().items()},
        "metadata": dict(checkpoint.metadata),
    }
    state = checkpoint.optimizer_state
    if state is not None:
        document["optimizer"] = {
            "t": state.t,
            "beta1": state.beta1,
            "beta2": state.beta2,
            "eps": state.eps,
            "m": {name: _encode_tensor(v) for name, v in state.m.items()},
            "v": {name: _encode_tensor(v) for name, v in state.v.items()},
        }
    return document


def save_checkpoint(checkpoint: Checkpoint) -> bytes:
    """Serialize to UTF-8 JSON bytes (keys sorted, deterministic)."""
    text = json.dumps(checkpoint_to_dict(checkpoint), sort_keys=True, indent=1, allow_nan=False)
    return text.encode("utf-8")


def load_checkpoint(data: bytes) -> Checkpoint:
    """
    Inverse of save_checkpoint.

    Raises:
        CheckpointError: bad magic, unsupported version, truncated or
            inconsistent content
    """
    try:
        document = json.loads(data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"checkpoint is not valid JSON (truncated?): {exc}")

    if not isinstance(document, dict) or document.get("magic") != MAGIC:
        raise CheckpointError(f"not a leafcast checkpoint (magic {document.get('magic') if isinstance(document, dict) else None!r})")
    if document.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"checkpoint format version {document.get('format_version')} not supported (expected {FORMAT_VERSION})"
        )

    try:
        config = ModelConfig.from_dict(document["config"])
        feature_names = [str(n) for n in document["feature_names"]]
        tensors = document["tensors"]
        scaler_doc = document.get("scaler", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"checkpoint is missing or has invalid field: {exc}")

    if config.feature_count != len(feature_names):
        raise CheckpointError(
            f"config expects {config.feature_count} features but {len(feature_names)} names are stored"
        )

    def tensor(name: str) -> np.ndarray:
        if name not in tensors:
            raise CheckpointError(f"tensor {name} missing")
        return _decode_tensor(name, tensors[name])

    layers = []
    inputs = config.feature_count
    for k, spec in enumerate(config.layers):
        W, U, b = tensor(f"lstm{k}.W"), tensor(f"lstm{k}.U"), tensor(f"lstm{k}.b")
        expected = [((4 * spec.units, inputs), W.shape), ((4 * spec.units, spec.units), U.shape), ((4 * spec.units,), b.shape)]
        for want, got in expected:
            if want != got:
                raise CheckpointError(f"layer {k} tensor shape {got} does not match config {want}")
        layers.append(LstmLayerParams(W=W, U=U, b=b, activation=spec.activation))
        inputs = spec.units

    head = DenseHeadParams(W=tensor("dense.W"), b=tensor("dense.b"))
    if head.W.shape != (inputs,) or head.b.shape != (1,):
        raise CheckpointError(f"dense head shapes {head.W.shape}, {head.b.shape} do not match config")

    params = scaler_doc.get("params") or {}
    try:
        scaler = ScalerParams.from_dict(params) if params else None
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"scaler parameters invalid: {exc}")

    optimizer = None
    if "optimizer" in document:
        opt = document["optimizer"]
        try:
            optimizer = AdamState(
                m={n: _decode_tensor(n, v) for n, v in opt["m"].items()},
                v={n: _decode_tensor(n, v) for n, v in opt["v"].items()},
                t=int(opt["t"]),
                beta1=float(opt["beta1"]),
                beta2=float(opt["beta2"]),
                eps=float(opt["eps"])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"optimizer state invalid: {exc}")

    model = LstmModel(config=config, layers=layers, head=head, feature_names=feature_names)
    return Checkpoint(
        model=model,
        scaler=scaler,
        species=[str(s) for s in scaler_doc.get("species", [])],
        optimizer_state=optimizer,
        metadata=dict(document.get("metadata", {}))
    )


def write_checkpoint(checkpoint: Checkpoint, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.write_bytes(save_checkpoint(checkpoint))
    except OSError as exc:
        raise CheckpointError(f"cannot write checkpoint {path}: {exc}")
    logger.info(f"  Checkpoint written: {path}")


def read_checkpoint(path: Union[str, Path]) -> Checkpoint:
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"checkpoint not found: {path}")
    return load_checkpoint(path.read_bytes())
