"""
Adam Optimizer

Per-tensor first and second moments with bias correction:

    m = b1 * m + (1 - b1) * g
    v = b2 * v + (1 - b2) * g**2
    theta -= lr * m_hat / (sqrt(v_hat) + eps)
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


@dataclass
class AdamState:
    """Moments per parameter tensor and the shared step counter."""
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0
    beta1: float = BETA1
    beta2: float = BETA2
    eps: float = EPSILON

    @classmethod
    def zeros_like(cls, params: Dict[str, np.ndarray]) -> "AdamState":
        return cls(
            m={name: np.zeros_like(p) for name, p in params.items()},
            v={name: np.zeros_like(p) for name, p in params.items()}
        )

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps": self.eps,
            "m": self.m,
            "v": self.v,
        }


def adam_step(
    params: Dict[str, np.ndarray],
    grads: Dict[str, np.ndarray],
    state: AdamState,
    lr: float
) -> Tuple[Dict[str, np.ndarray], AdamState]:
    """
    One Adam update. Inputs are not modified.

    Tensors missing from state start from zero moments.

    Returns:
        Tuple of (updated params, updated state)
    """
    t = state.t + 1
    correction1 = 1.0 - state.beta1 ** t
    correction2 = 1.0 - state.beta2 ** t

    new_params: Dict[str, np.ndarray] = {}
    new_m: Dict[str, np.ndarray] = {}
    new_v: Dict[str, np.ndarray] = {}
    for name, value in params.items():
        g = grads[name]
        m = state.m.get(name, np.zeros_like(value))
        v = state.v.get(name, np.zeros_like(value))

        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2

        new_params[name] = value - lr * m_hat / (np.sqrt(v_hat) + state.eps)
        new_m[name] = m
        new_v[name] = v

    return new_params, AdamState(
        m=new_m, v=new_v, t=t, beta1=state.beta1, beta2=state.beta2, eps=state.eps
    )
