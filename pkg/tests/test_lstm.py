import numpy as np
import pytest

from leafcast.errors import DataError, NumericError
from leafcast.model.lstm import (
    apply_dropout,
    backward,
    bce_logit_gradient,
    bce_loss,
    build_model,
    clip_by_global_norm,
    forward,
    lstm_cell_forward,
)

from .conftest import tiny_config

ACTIVATIONS = ("tanh", "relu", "sigmoid")


def _loss(model, X, y):
    probabilities, _ = forward(X, model)
    return bce_loss(probabilities, y)


def _numeric_gradients(model, X, y, eps=1e-6):
    grads = {}
    for name, array in model.parameters().items():
        grad = np.zeros_like(array)
        flat = array.reshape(-1)
        for k in range(flat.size):
            saved = flat[k]
            flat[k] = saved + eps
            plus = _loss(model, X, y)
            flat[k] = saved - eps
            minus = _loss(model, X, y)
            flat[k] = saved
            grad.reshape(-1)[k] = (plus - minus) / (2 * eps)
        grads[name] = grad
    return grads


def _random_model(rng, index):
    depth = 1 + index % 3
    units = tuple(int(u) for u in rng.integers(2, 5, size=depth))
    activations = [ACTIVATIONS[(index + k) % 3] for k in range(depth)]
    return build_model(tiny_config(units=units, activations=activations), seed=index)


@pytest.mark.parametrize("index", range(21))
def test_backward_matches_finite_differences(index):
    rng = np.random.default_rng(100 + index)
    model = _random_model(rng, index)
    X = rng.uniform(-1.0, 1.0, size=(4, 3, 2))
    y = np.array([0.0, 1.0, 1.0, 0.0])

    probabilities, cache = forward(X, model)
    analytic = backward(cache, bce_logit_gradient(probabilities, y), model, clip_norm=None)
    numeric = _numeric_gradients(model, X, y)

    assert set(analytic) == set(numeric)
    for name in numeric:
        difference = np.linalg.norm(analytic[name] - numeric[name])
        scale = np.linalg.norm(analytic[name]) + np.linalg.norm(numeric[name])
        assert difference <= 1e-4 * scale + 1e-8, name


def test_parameter_names_and_shapes():
    model = build_model(tiny_config(units=(4, 3), features=5))
    shapes = {name: value.shape for name, value in model.parameters().items()}
    assert shapes == {
        "lstm0.W": (16, 5), "lstm0.U": (16, 4), "lstm0.b": (16,),
        "lstm1.W": (12, 4), "lstm1.U": (12, 3), "lstm1.b": (12,),
        "dense.W": (3,), "dense.b": (1,),
    }


def test_initialization_is_seeded_with_forget_bias_one():
    first = build_model(tiny_config(units=(3,)), seed=5)
    second = build_model(tiny_config(units=(3,)), seed=5)
    for name, value in first.parameters().items():
        assert np.array_equal(value, second.parameters()[name])

    bias = first.layers[0].b
    assert bias[3:6].tolist() == [1.0, 1.0, 1.0]
    assert not bias[:3].any() and not bias[6:].any()
    # recurrent gate blocks are orthogonal
    U_f = first.layers[0].gate("f")[1]
    assert np.allclose(U_f @ U_f.T, np.eye(3))


def test_forward_single_window_and_batch_agree():
    model = build_model(tiny_config())
    X = np.random.default_rng(0).random((5, 3, 2))

    batch, _ = forward(X, model)
    single, _ = forward(X[2], model)

    assert batch.shape == (5,)
    assert np.ndim(single) == 0
    assert single == pytest.approx(batch[2])
    assert ((batch > 0) & (batch < 1)).all()


def test_forward_rejects_wrong_window_shape():
    model = build_model(tiny_config(window=3, features=2))
    with pytest.raises(DataError):
        forward(np.zeros((4, 2)), model)


def test_cell_raises_on_non_finite_state():
    model = build_model(tiny_config(units=(2,)))
    layer = model.layers[0]
    layer.b[:] = np.nan
    with pytest.raises(NumericError):
        lstm_cell_forward(np.zeros(2), np.zeros(2), np.zeros(2), layer)


def test_dropout_mask_is_shared_over_time():
    rows = np.ones((6, 4, 10))
    dropped, mask = apply_dropout(rows, 0.5, np.random.default_rng(1), training=True)

    assert mask.shape == (6, 1, 10)
    assert set(np.unique(mask)) <= {0.0, 2.0}
    assert (dropped == dropped[:, :1, :]).all()

    same, none = apply_dropout(rows, 0.5, None, training=False)
    assert none is None and same is rows


def test_dropout_needs_rng_when_training():
    with pytest.raises(ValueError):
        apply_dropout(np.ones((3, 2)), 0.1, None, training=True)


def test_bce_clips_probabilities():
    assert bce_loss(np.array([0.0]), np.array([1.0])) == pytest.approx(-np.log(1e-7))
    assert bce_loss(np.array([1.0]), np.array([1.0])) == pytest.approx(-np.log(1 - 1e-7))
    assert bce_logit_gradient(np.array([0.0, 0.25]), np.array([1.0, 1.0])).tolist() == [0.0, -0.375]


def test_clip_by_global_norm():
    clipped, norm = clip_by_global_norm({"a": np.array([3.0]), "b": np.array([4.0])}, 1.0)
    assert norm == 5.0
    assert clipped["a"][0] == pytest.approx(0.6)
    assert clipped["b"][0] == pytest.approx(0.8)

    kept, _ = clip_by_global_norm({"a": np.array([0.3])}, 1.0)
    assert kept["a"][0] == 0.3


def test_backward_needs_a_cache():
    model = build_model(tiny_config())
    with pytest.raises(ValueError):
        backward(None, np.zeros(1), model)
