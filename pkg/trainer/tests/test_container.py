import numpy as np
import pytest

from trainer.container import SAMPLE_BYTES, read_container
from trainer.errors import ContainerError

from conftest import build_container, striped_tensor


def test_read_round_trip(learnable_container):
    container = read_container(learnable_container)
    assert len(container) == 48
    assert container.tensors.shape == (48, 224, 224, 3)
    assert container.present_classes() == {"normal", "ddos"}
    assert len(container.indices_for("train")) == 32
    assert len(container.indices_for("test")) == 16
    assert container.labels[1].class_index == 1  # ddos in alphabetical order
    # stripe visible in attack tensors only
    assert container.tensors[1][:, 110, 0].mean() > 200
    assert container.tensors[0][:, 110, 0].mean() < 30


def test_missing_file(tmp_path):
    with pytest.raises(ContainerError):
        read_container(tmp_path)


def test_truncated_samples(learnable_container):
    bin_path = learnable_container / "samples.bin"
    bin_path.write_bytes(bin_path.read_bytes()[:-10])
    with pytest.raises(ContainerError):
        read_container(learnable_container)


def test_manifest_count_mismatch(learnable_container):
    bin_path = learnable_container / "samples.bin"
    bin_path.write_bytes(bin_path.read_bytes()[:SAMPLE_BYTES * 3])
    with pytest.raises(ContainerError):
        read_container(learnable_container)


def test_bad_label_header(tmp_path):
    rng = np.random.default_rng(1)
    directory = build_container(tmp_path / "c", [("train", "normal",
                                                  striped_tensor(rng, False))])
    labels = directory / "labels.csv"
    labels.write_text(labels.read_text().replace("start_row", "start"),
                      encoding="utf-8")
    with pytest.raises(ContainerError):
        read_container(directory)


def test_unknown_class_name(tmp_path):
    rng = np.random.default_rng(1)
    directory = build_container(tmp_path / "c", [("train", "normal",
                                                  striped_tensor(rng, False))])
    labels = directory / "labels.csv"
    labels.write_text(labels.read_text().replace("normal", "meltdown"),
                      encoding="utf-8")
    with pytest.raises(ContainerError):
        read_container(directory)
