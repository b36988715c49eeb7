import json

import numpy as np
import pytest

from leafcast.model.config import LayerSpec, ModelConfig
from leafcast.tuning.space import SearchSpace, sample_config


def test_samples_lie_in_the_space():
    space = SearchSpace()
    rng = np.random.default_rng(0)
    for trial_id in range(50):
        trial = sample_config(space, rng, trial_id=trial_id)
        assert space.contains(trial.config)
        assert trial.config.seed == trial.seed
        assert all(layer.dropout_rate == 0.0 for layer in trial.config.layers[1:])


def test_sampling_is_seeded():
    space = SearchSpace()
    first = [sample_config(space, np.random.default_rng(3)).to_json() for _ in range(2)]
    assert first[0] == first[1]


def test_base_config_settings_are_kept():
    base = ModelConfig(window_size=5, batch_size=8, epochs=2, threshold=0.4)
    trial = sample_config(SearchSpace(), np.random.default_rng(1), base=base)
    assert (trial.config.window_size, trial.config.batch_size, trial.config.threshold) == (5, 8, 0.4)


def test_contains_rejects_values_outside():
    space = SearchSpace(units=(32, 64))
    assert space.contains(ModelConfig(layers=[LayerSpec(32, "relu", 0.1)]))
    assert not space.contains(ModelConfig(layers=[LayerSpec(48, "relu")]))
    assert not space.contains(ModelConfig(layers=[LayerSpec(32, "relu")], learning_rate=0.05))


def test_to_json_is_compact_and_sorted():
    trial = sample_config(SearchSpace(max_layers=1), np.random.default_rng(2), trial_id=4)
    document = json.loads(trial.to_json())
    assert list(document) == ["layers", "learning_rate", "seed"]
    assert " " not in trial.to_json()


@pytest.mark.parametrize("changes", [{"units": ()}, {"min_layers": 2, "max_layers": 1}, {"activations": ()}])
def test_invalid_space(changes):
    with pytest.raises(ValueError):
        SearchSpace(**changes)
