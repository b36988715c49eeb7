import numpy as np
import pytest

from leafcast.model.optimizer import AdamState, adam_step


def test_first_step_moves_by_learning_rate_against_the_gradient():
    params = {"w": np.array([1.0, -2.0, 0.5])}
    grads = {"w": np.array([0.3, -4.0, 0.0])}

    updated, state = adam_step(params, grads, AdamState.zeros_like(params), lr=0.01)

    assert updated["w"] == pytest.approx([0.99, -1.99, 0.5], abs=1e-7)
    assert state.t == 1
    # inputs untouched
    assert params["w"].tolist() == [1.0, -2.0, 0.5]


def test_moments_follow_the_update_rule():
    params = {"w": np.array([0.0])}
    state = AdamState.zeros_like(params)
    for g in (1.0, 2.0):
        params, state = adam_step(params, {"w": np.array([g])}, state, lr=0.1)

    assert state.t == 2
    assert state.m["w"][0] == pytest.approx(0.9 * 0.1 + 0.1 * 2.0)
    assert state.v["w"][0] == pytest.approx(0.999 * 0.001 + 0.001 * 4.0)

    m_hat = state.m["w"][0] / (1 - 0.9 ** 2)
    v_hat = state.v["w"][0] / (1 - 0.999 ** 2)
    assert params["w"][0] == pytest.approx(-0.1 - 0.1 * m_hat / (np.sqrt(v_hat) + 1e-8))


def test_missing_tensors_start_from_zero_moments():
    params = {"a": np.ones(2), "b": np.ones(1)}
    grads = {"a": np.ones(2), "b": np.ones(1)}
    _, state = adam_step(params, grads, AdamState(), lr=0.1)
    assert set(state.m) == {"a", "b"}
    assert state.m["b"][0] == pytest.approx(0.1)
