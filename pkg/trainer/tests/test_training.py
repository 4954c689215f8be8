import csv
import json

import numpy as np
import pytest
import torch

from trainer.container import read_container
from trainer.errors import ClassMissing, ShapeMismatch
from trainer.models import TinyCnn, build_model
from trainer.predict import PREDICTION_HEADER, predict
from trainer.training import TrainConfig, train

from conftest import build_container, striped_tensor


def test_all_zero_batch_yields_finite_scores():
    model = build_model("tiny-cnn")
    with torch.no_grad():
        logits = model(torch.zeros(4, 3, 224, 224))
    assert logits.shape == (4, 8)
    assert torch.isfinite(logits).all()


def test_unknown_model_name():
    with pytest.raises(ValueError):
        build_model("perceptron-9000")


def test_zero_epochs_checkpoint_equals_initialization(learnable_container, tmp_path):
    ckpt = tmp_path / "model.pt"
    log = train(learnable_container, TrainConfig(epochs=0), seed=5, checkpoint_path=ckpt,
                log_path=tmp_path / "log.json")
    assert log["epochs"] == []

    saved = torch.load(ckpt, map_location="cpu", weights_only=True)
    torch.manual_seed(5)
    fresh = TinyCnn(8)
    for name, tensor in fresh.state_dict().items():
        assert torch.equal(saved["state_dict"][name], tensor), name


def test_class_missing_in_train(tmp_path):
    rng = np.random.default_rng(3)
    samples = [("train", "normal", striped_tensor(rng, False)) for _ in range(4)]
    samples += [("test", "ddos", striped_tensor(rng, True)) for _ in range(2)]
    directory = build_container(tmp_path / "c", samples)
    with pytest.raises(ClassMissing):
        train(directory, TrainConfig(epochs=1), seed=0,
              checkpoint_path=tmp_path / "m.pt")


def test_loss_decreases_on_learnable_data(learnable_container, tmp_path):
    log = train(learnable_container,
                TrainConfig(epochs=3, learning_rate=1e-3, batch_size=8),
                seed=7, checkpoint_path=tmp_path / "m.pt",
                log_path=tmp_path / "log.json")
    losses = [e["loss"] for e in log["epochs"]]
    assert len(losses) == 3
    assert losses[0] > losses[1] > losses[2]
    doc = json.loads((tmp_path / "log.json").read_text())
    assert doc["config"]["optimizer"] == "adam"
    assert doc["train_samples"] == 32


def test_predict_schema_and_consistency(learnable_container, tmp_path):
    ckpt = tmp_path / "m.pt"
    train(learnable_container, TrainConfig(epochs=2, learning_rate=1e-3, batch_size=8),
          seed=7, checkpoint_path=ckpt)
    out = tmp_path / "preds.csv"
    rows = predict(ckpt, learnable_container, "test", out)
    container = read_container(learnable_container)
    assert rows == len(container.indices_for("test"))

    with out.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        assert header == PREDICTION_HEADER
        records = list(reader)
    assert len(records) == rows
    class_letters = [c[len("score_"):] for c in PREDICTION_HEADER[3:]]
    names = ("backdoor", "ddos", "injection", "normal",
             "password", "ransomware", "scanning", "xss")
    for rec in records:
        scores = [float(v) for v in rec[3:]]
        assert abs(sum(scores) - 1.0) <= 1e-6
        best = names[int(np.argmax(scores))]
        assert rec[2] == best
        assert rec[1] in names
    assert class_letters == ["b", "d", "i", "n", "p", "r", "s", "x"]


def test_predict_shape_mismatch(learnable_container, tmp_path):
    ckpt = tmp_path / "m.pt"
    train(learnable_container, TrainConfig(epochs=0), seed=1, checkpoint_path=ckpt)
    blob = torch.load(ckpt, map_location="cpu", weights_only=True)
    blob["input_shape"] = [128, 128, 3]
    torch.save(blob, ckpt)
    with pytest.raises(ShapeMismatch):
        predict(ckpt, learnable_container, "test", tmp_path / "p.csv")
