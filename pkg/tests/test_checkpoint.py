import json

import numpy as np
import pytest

from leafcast.adapters.checkpoint import (
    Checkpoint,
    load_checkpoint,
    read_checkpoint,
    save_checkpoint,
    write_checkpoint,
)
from leafcast.domain.models import ScalerParams
from leafcast.errors import CheckpointError
from leafcast.model.trainer import fit

from .conftest import separable_dataset, tiny_config


@pytest.fixture
def checkpoint():
    data = separable_dataset()
    result = fit(data, data, tiny_config(units=(3, 2), epochs=2))
    return Checkpoint(
        model=result.model,
        scaler=ScalerParams(minimums={"f0": -0.5, "f1": 0.0}, maximums={"f0": 1.5, "f1": 1.0}),
        species=["ACRU", "QURU"],
        optimizer_state=result.optimizer_state,
        metadata={"epochs_trained": 2}
    )


def test_round_trip_is_byte_identical(checkpoint):
    data = save_checkpoint(checkpoint)
    loaded = load_checkpoint(data)

    assert save_checkpoint(loaded) == data
    for name, value in checkpoint.model.parameters().items():
        assert np.array_equal(loaded.model.parameters()[name], value)
    assert loaded.feature_names == ["f0", "f1"]
    assert loaded.species == ["ACRU", "QURU"]
    assert loaded.scaler == checkpoint.scaler
    assert loaded.optimizer_state.t == checkpoint.optimizer_state.t
    assert loaded.metadata == {"epochs_trained": 2}


def test_file_round_trip(checkpoint, tmp_path):
    path = tmp_path / "model.ckpt"
    write_checkpoint(checkpoint, path)
    assert save_checkpoint(read_checkpoint(path)) == path.read_bytes()


def test_missing_file(tmp_path):
    with pytest.raises(CheckpointError, match="not found"):
        read_checkpoint(tmp_path / "absent.ckpt")


def _edited(checkpoint, **changes):
    document = json.loads(save_checkpoint(checkpoint))
    document.update(changes)
    return json.dumps(document).encode("utf-8")


def test_bad_magic(checkpoint):
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(_edited(checkpoint, magic="SOMETHING-ELSE"))


def test_unsupported_version(checkpoint):
    with pytest.raises(CheckpointError, match="version 99"):
        load_checkpoint(_edited(checkpoint, format_version=99))


def test_truncated(checkpoint):
    data = save_checkpoint(checkpoint)
    with pytest.raises(CheckpointError):
        load_checkpoint(data[: len(data) // 2])


def test_tensor_shape_mismatch(checkpoint):
    document = json.loads(save_checkpoint(checkpoint))
    document["tensors"]["lstm1.U"] = {"shape": [4, 4], "values": [0.0] * 16}
    with pytest.raises(CheckpointError, match="shape"):
        load_checkpoint(json.dumps(document).encode("utf-8"))


def test_value_count_mismatch(checkpoint):
    document = json.loads(save_checkpoint(checkpoint))
    document["tensors"]["dense.b"] = {"shape": [1], "values": [0.0, 1.0]}
    with pytest.raises(CheckpointError, match="dense.b"):
        load_checkpoint(json.dumps(document).encode("utf-8"))
