"""Activation functions and their derivatives w.r.t. the pre-activation."""

from typing import Callable, Dict, Tuple

import numpy as np


def sigmoid(z: np.ndarray) -> np.ndarray:
    # exp of a non-positive argument only, no overflow
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def dsigmoid(z: np.ndarray) -> np.ndarray:
    s = sigmoid(z)
    return s * (1.0 - s)


def dtanh(z: np.ndarray) -> np.ndarray:
    t = np.tanh(z)
    return 1.0 - t * t


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def drelu(z: np.ndarray) -> np.ndarray:
    return (z > 0).astype(np.float64)


ACTIVATIONS: Dict[str, Tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]] = {
    "tanh": (np.tanh, dtanh),
    "relu": (relu, drelu),
    "sigmoid": (sigmoid, dsigmoid),
}
