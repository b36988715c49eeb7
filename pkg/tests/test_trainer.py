import math

import numpy as np
import pytest

from leafcast.domain.models import WindowedDataset
from leafcast.errors import DataError
from leafcast.model.config import LayerSpec, ModelConfig
from leafcast.model.trainer import evaluate_loss, fit, predict, train

from .conftest import separable_dataset, tiny_config


def _params_equal(a, b):
    pa, pb = a.parameters(), b.parameters()
    return set(pa) == set(pb) and all(np.array_equal(pa[k], pb[k]) for k in pa)


def test_overfits_a_separable_problem():
    data = separable_dataset(n=40)
    config = tiny_config(units=(8,), learning_rate=0.01, epochs=100, batch_size=8)

    model, metrics = train(data, WindowedDataset.empty(data.feature_names, 3), config)

    assert len(metrics) == 100
    assert metrics[-1].train_acc >= 0.99
    assert metrics[-1].train_loss < metrics[0].train_loss
    assert math.isnan(metrics[-1].val_loss)
    assert predict(model, data).labels.tolist() == data.y.tolist()


def test_training_is_deterministic():
    data = separable_dataset()
    config = ModelConfig(
        layers=[LayerSpec(4, "tanh", 0.2), LayerSpec(3, "relu")],
        window_size=3, feature_count=2, epochs=3, batch_size=6
    )

    first, first_metrics = train(data, data, config)
    second, second_metrics = train(data, data, config)

    assert _params_equal(first, second)
    assert first_metrics == second_metrics


def test_resumed_run_matches_uninterrupted_run():
    data = separable_dataset()
    config = ModelConfig(layers=[LayerSpec(4, "tanh", 0.2)], window_size=3, feature_count=2, epochs=5, batch_size=6)

    full = fit(data, data, config)
    partial = fit(data, data, config, epochs=3)
    resumed = fit(data, data, config, resume=partial, epochs=2)

    assert resumed.epochs_trained == 5
    assert _params_equal(full.model, resumed.model)
    assert full.metrics == resumed.metrics
    assert full.optimizer_state.t == resumed.optimizer_state.t


def test_empty_training_set_is_rejected():
    data = separable_dataset()
    with pytest.raises(DataError):
        fit(WindowedDataset.empty(data.feature_names, 3), data, tiny_config())


def test_feature_mismatch_is_rejected():
    data = separable_dataset()
    model, _ = train(data, data, tiny_config(epochs=1))
    renamed = data.subset(np.arange(len(data)))
    renamed.feature_names = ["a", "b"]
    with pytest.raises(DataError):
        predict(model, renamed)


@pytest.mark.parametrize("threshold", [0.0, 1.0])
def test_predict_threshold_must_be_inside_unit_interval(threshold):
    data = separable_dataset()
    model, _ = train(data, data, tiny_config(epochs=1))
    with pytest.raises(ValueError):
        predict(model, data, threshold=threshold)


def test_evaluate_loss_on_empty_set_is_nan():
    data = separable_dataset()
    model, _ = train(data, data, tiny_config(epochs=1))
    loss, accuracy = evaluate_loss(model, WindowedDataset.empty(data.feature_names, 3), 0.5)
    assert math.isnan(loss) and math.isnan(accuracy)
