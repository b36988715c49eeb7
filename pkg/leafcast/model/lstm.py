"""
LSTM Classifier

Stacked LSTM layers over a (window, features) sequence, a dense sigmoid
head on the last hidden state of the top layer, binary cross entropy and
backpropagation through time.

Gates i, f, o are always sigmoid. The layer activation (tanh, relu or
sigmoid) is applied to the candidate and to the cell output:

    i, f, o = sigmoid(W x + U h + b)
    g       = act(W x + U h + b)
    c_t     = f * c_prev + i * g
    h_t     = o * act(c_t)

Gate blocks are stacked in the order i, f, o, g along the first axis of
W (4*units x inputs), U (4*units x units) and b (4*units).
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import DataError, NumericError
from .activations import ACTIVATIONS, sigmoid
from .config import ModelConfig

GATES = ("i", "f", "o", "g")
FORGET_GATE = 1
CLIP_EPSILON = 1e-7
DEFAULT_CLIP_NORM = 1.0


@dataclass
class LstmLayerParams:
    """Input, recurrent and bias weights of one LSTM layer."""
    W: np.ndarray
    U: np.ndarray
    b: np.ndarray
    activation: str = "tanh"

    @property
    def units(self) -> int:
        return self.U.shape[1]

    @property
    def inputs(self) -> int:
        return self.W.shape[1]

    def gate(self, name: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(W_g, U_g, b_g) of gate 'i', 'f', 'o' or 'g'."""
        k = GATES.index(name)
        rows = slice(k * self.units, (k + 1) * self.units)
        return self.W[rows], self.U[rows], self.b[rows]


@dataclass
class DenseHeadParams:
    """Sigmoid output unit on the top layer's last hidden state."""
    W: np.ndarray
    b: np.ndarray


@dataclass
class LstmModel:
    """Trained (or freshly initialized) classifier and its feature layout."""
    config: ModelConfig
    layers: List[LstmLayerParams]
    head: DenseHeadParams
    feature_names: List[str] = field(default_factory=list)

    def parameters(self) -> Dict[str, np.ndarray]:
        """Live parameter arrays keyed by tensor name."""
        params = {}
        for k, layer in enumerate(self.layers):
            params[f"lstm{k}.W"] = layer.W
            params[f"lstm{k}.U"] = layer.U
            params[f"lstm{k}.b"] = layer.b
        params["dense.W"] = self.head.W
        params["dense.b"] = self.head.b
        return params

    def load_parameters(self, params: Dict[str, np.ndarray]) -> None:
        """Replace parameter arrays; shapes must match."""
        current = self.parameters()
        for name, value in params.items():
            if name not in current:
                raise DataError(f"unknown parameter tensor {name}")
            if np.shape(value) != current[name].shape:
                raise DataError(f"tensor {name} has shape {np.shape(value)}, expected {current[name].shape}")

        for k, layer in enumerate(self.layers):
            layer.W = np.array(params.get(f"lstm{k}.W", layer.W), dtype=np.float64)
            layer.U = np.array(params.get(f"lstm{k}.U", layer.U), dtype=np.float64)
            layer.b = np.array(params.get(f"lstm{k}.b", layer.b), dtype=np.float64)
        self.head.W = np.array(params.get("dense.W", self.head.W), dtype=np.float64)
        self.head.b = np.array(params.get("dense.b", self.head.b), dtype=np.float64)


# ==========================================
# Initialization
# ==========================================

def glorot_bound(fan_in: int, fan_out: int) -> float:
    return math.sqrt(6.0 / (fan_in + fan_out))


def _orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def init_params(config: ModelConfig, seed: Optional[int] = None) -> Tuple[List[LstmLayerParams], DenseHeadParams]:
    """
    Glorot-uniform input weights, orthogonal recurrent weights per gate,
    zero biases except the forget gate (1.0). Deterministic in seed.
    """
    if config.feature_count < 1:
        raise ValueError("config.feature_count must be set before initializing parameters")

    rng = np.random.default_rng(config.seed if seed is None else seed)
    layers = []
    inputs = config.feature_count
    for spec in config.layers:
        units = spec.units
        bound = glorot_bound(inputs, 4 * units)
        W = rng.uniform(-bound, bound, size=(4 * units, inputs))
        U = np.concatenate([_orthogonal(units, rng) for _ in GATES], axis=0)
        b = np.zeros(4 * units)
        b[FORGET_GATE * units:(FORGET_GATE + 1) * units] = 1.0
        layers.append(LstmLayerParams(W=W, U=U, b=b, activation=spec.activation))
        inputs = units

    bound = glorot_bound(inputs, 1)
    head = DenseHeadParams(W=rng.uniform(-bound, bound, size=inputs), b=np.zeros(1))
    return layers, head


def build_model(config: ModelConfig, feature_names: Optional[List[str]] = None, seed: Optional[int] = None) -> LstmModel:
    """Freshly initialized model; feature_count follows feature_names when given."""
    if feature_names is not None:
        config = config.with_features(len(feature_names))
    layers, head = init_params(config, seed)
    return LstmModel(config=config, layers=layers, head=head, feature_names=list(feature_names or []))


# ==========================================
# Forward pass
# ==========================================

@dataclass
class CellCache:
    """Values of one timestep needed by the backward pass."""
    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    z_g: np.ndarray
    i: np.ndarray
    f: np.ndarray
    o: np.ndarray
    g: np.ndarray
    c: np.ndarray


@dataclass
class ForwardCache:
    """Everything a forward pass over a batch of windows produced."""
    inputs: List[np.ndarray]
    cells: List[List[CellCache]]
    h_last: np.ndarray
    logits: np.ndarray
    probabilities: np.ndarray
    dropout_mask: Optional[np.ndarray] = None


def lstm_cell_forward(
    x_t: np.ndarray,
    h_prev: np.ndarray,
    c_prev: np.ndarray,
    params: LstmLayerParams,
    activation: Optional[str] = None,
    layer_index: int = 0
) -> Tuple[np.ndarray, np.ndarray, CellCache]:
    """
    One LSTM step for a vector (F,) or a batch (B, F).

    Raises:
        NumericError: the new hidden or cell state is not finite
    """
    act, _ = ACTIVATIONS[activation or params.activation]
    u = params.units

    z = x_t @ params.W.T + h_prev @ params.U.T + params.b
    i = sigmoid(z[..., :u])
    f = sigmoid(z[..., u:2 * u])
    o = sigmoid(z[..., 2 * u:3 * u])
    z_g = z[..., 3 * u:]
    g = act(z_g)

    c = f * c_prev + i * g
    h = o * act(c)

    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(c))):
        raise NumericError(f"non-finite state in LSTM layer {layer_index}")

    return h, c, CellCache(x=x_t, h_prev=h_prev, c_prev=c_prev, z_g=z_g, i=i, f=f, o=o, g=g, c=c)


def apply_dropout(
    rows: np.ndarray,
    rate: float,
    rng: Optional[np.random.Generator],
    training: bool
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Inverted dropout with one mask per feature shared by all timesteps.

    Args:
        rows: (w, F) sequence or (B, w, F) batch
        rate: Probability of dropping a feature, in [0, 1)
        rng: Random generator (required when training with rate > 0)
        training: Inference mode returns rows unchanged

    Returns:
        Tuple of (masked rows, mask or None)
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return rows, None
    if rng is None:
        raise ValueError("dropout in training mode needs a random generator")

    shape = rows.shape[:-2] + (1, rows.shape[-1])
    keep = rng.random(shape) < (1.0 - rate)
    mask = keep / (1.0 - rate)
    return rows * mask, mask


def forward(
    window: np.ndarray,
    model: LstmModel,
    training: bool = False,
    rng: Optional[np.random.Generator] = None
) -> Tuple[np.ndarray, ForwardCache]:
    """
    Leaf-fall probability of one window (w, F) or a batch (B, w, F).

    Dropout is active only when training.

    Returns:
        Tuple of (probability or probabilities, cache for backward)

    Raises:
        DataError: window shape does not match the model
    """
    X = np.asarray(window, dtype=np.float64)
    single = X.ndim == 2
    if single:
        X = X[np.newaxis]

    expected = (model.config.window_size, model.layers[0].inputs)
    if X.ndim != 3 or X.shape[1:] != expected:
        raise DataError(f"window shape {np.shape(window)} does not match model input {expected}")

    sequence, mask = apply_dropout(X, model.config.input_dropout, rng, training)

    inputs = []
    cells = []
    for k, layer in enumerate(model.layers):
        batch = sequence.shape[0]
        h = np.zeros((batch, layer.units))
        c = np.zeros((batch, layer.units))
        hidden = []
        steps = []
        for t in range(sequence.shape[1]):
            h, c, cache = lstm_cell_forward(sequence[:, t], h, c, layer, layer_index=k)
            hidden.append(h)
            steps.append(cache)
        inputs.append(sequence)
        cells.append(steps)
        sequence = np.stack(hidden, axis=1)

    h_last = sequence[:, -1]
    logits = h_last @ model.head.W + model.head.b[0]
    probabilities = sigmoid(logits)

    cache = ForwardCache(
        inputs=inputs,
        cells=cells,
        h_last=h_last,
        logits=logits,
        probabilities=probabilities,
        dropout_mask=mask
    )
    return (probabilities[0] if single else probabilities), cache


# ==========================================
# Loss and backward pass
# ==========================================

def bce_loss(p: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross entropy with p clipped to [1e-7, 1 - 1e-7]."""
    p = np.clip(np.asarray(p, dtype=np.float64), CLIP_EPSILON, 1.0 - CLIP_EPSILON)
    y = np.asarray(y, dtype=np.float64)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))


def bce_logit_gradient(p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """d(mean BCE)/d(logits); zero where the probability clip is engaged."""
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    active = (p > CLIP_EPSILON) & (p < 1.0 - CLIP_EPSILON)
    return np.where(active, (p - y) / p.size, 0.0)


def clip_by_global_norm(grads: Dict[str, np.ndarray], max_norm: float) -> Tuple[Dict[str, np.ndarray], float]:
    """Scale all gradients together so their joint L2 norm is at most max_norm."""
    norm = math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if norm <= max_norm or norm == 0.0:
        return grads, norm
    scale = max_norm / norm
    return {name: g * scale for name, g in grads.items()}, norm


def backward(
    cache: Optional[ForwardCache],
    dlogits: np.ndarray,
    model: LstmModel,
    clip_norm: Optional[float] = DEFAULT_CLIP_NORM
) -> Dict[str, np.ndarray]:
    """
    Gradients of the batch loss w.r.t. every parameter tensor (BPTT).

    Args:
        cache: Forward cache of the same batch
        dlogits: Loss gradient w.r.t. the logits, shape (B,)
        model: The model the cache came from
        clip_norm: Global-norm clip applied at the end; None disables it

    Raises:
        ValueError: cache is missing or incomplete
    """
    if cache is None or len(cache.cells) != len(model.layers) or not all(cache.cells):
        raise ValueError("backward needs the forward caches of every layer and timestep")

    dlogits = np.atleast_1d(np.asarray(dlogits, dtype=np.float64))
    grads: Dict[str, np.ndarray] = {
        "dense.W": cache.h_last.T @ dlogits,
        "dense.b": np.array([dlogits.sum()]),
    }

    top = cache.cells[-1]
    steps = len(top)
    dH = np.zeros((dlogits.size, steps, model.layers[-1].units))
    dH[:, -1] = np.outer(dlogits, model.head.W)

    for k in range(len(model.layers) - 1, -1, -1):
        layer = model.layers[k]
        act, dact = ACTIVATIONS[layer.activation]

        dW = np.zeros_like(layer.W)
        dU = np.zeros_like(layer.U)
        db = np.zeros_like(layer.b)
        dX = np.zeros_like(cache.inputs[k])
        dh_next = np.zeros((dlogits.size, layer.units))
        dc_next = np.zeros((dlogits.size, layer.units))

        for t in range(steps - 1, -1, -1):
            cell = cache.cells[k][t]
            dh = dH[:, t] + dh_next

            do = dh * act(cell.c)
            dc = dh * cell.o * dact(cell.c) + dc_next
            di = dc * cell.g
            df = dc * cell.c_prev
            dg = dc * cell.i

            dz = np.concatenate([
                di * cell.i * (1.0 - cell.i),
                df * cell.f * (1.0 - cell.f),
                do * cell.o * (1.0 - cell.o),
                dg * dact(cell.z_g),
            ], axis=1)

            dW += dz.T @ cell.x
            dU += dz.T @ cell.h_prev
            db += dz.sum(axis=0)

            dX[:, t] = dz @ layer.W
            dh_next = dz @ layer.U
            dc_next = dc * cell.f

        grads[f"lstm{k}.W"] = dW
        grads[f"lstm{k}.U"] = dU
        grads[f"lstm{k}.b"] = db
        dH = dX

    if clip_norm is not None:
        grads, _ = clip_by_global_norm(grads, clip_norm)
    return grads


def loss_and_gradients(
    model: LstmModel,
    X: np.ndarray,
    y: np.ndarray,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
    clip_norm: Optional[float] = DEFAULT_CLIP_NORM
) -> Tuple[float, Dict[str, np.ndarray]]:
    """Forward, loss and backward of one batch."""
    probabilities, cache = forward(X, model, training=training, rng=rng)
    probabilities = np.atleast_1d(probabilities)
    loss = bce_loss(probabilities, y)
    if not math.isfinite(loss):
        raise NumericError(f"non-finite loss {loss}")
    grads = backward(cache, bce_logit_gradient(probabilities, y), model, clip_norm=clip_norm)
    return loss, grads
