"""Inference: checkpoint + container partition to a predictions CSV.

The CSV conforms to the evaluation schema: one row per sample with eight
per-class scores that sum to 1 and the argmax as the predicted class.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import torch

from trainer.container import (
    CHANNELS,
    CLASS_NAMES,
    HEIGHT,
    WIDTH,
    read_container,
)
from trainer.errors import ShapeMismatch
from trainer.models import build_model
from trainer.training import ContainerDataset, TrainConfig

PREDICTION_HEADER = (
    ["index", "true_class", "predicted_class"]
    + [f"score_{name[0]}" for name in CLASS_NAMES]
)


def load_checkpoint(path: Path | str):
    checkpoint = torch.load(path, map_location="cpu", weights_only=True)
    config = TrainConfig(**checkpoint["config"])
    model = build_model(config.model, config.num_classes, pretrained=False)
    model.load_state_dict(checkpoint["state_dict"])
    model.eval()
    return model, checkpoint


def predict(
    checkpoint_path: Path | str,
    container_dir: Path | str,
    partition: str,
    out_csv: Path | str,
    batch_size: int = 64,
) -> int:
    """Write scores for every sample of the partition; returns the row count."""
    model, checkpoint = load_checkpoint(checkpoint_path)
    container = read_container(container_dir)

    expected = tuple(checkpoint["input_shape"])
    if container.tensors.shape[1:] != expected:
        raise ShapeMismatch(
            f"container samples are {container.tensors.shape[1:]}, "
            f"checkpoint expects {expected}")
    if checkpoint["class_names"] != list(CLASS_NAMES):
        raise ShapeMismatch("checkpoint class order differs from the container schema")

    indices = container.indices_for(partition)
    dataset = ContainerDataset(container, indices)
    rows = 0
    with Path(out_csv).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PREDICTION_HEADER)
        with torch.no_grad():
            for start in range(0, len(dataset), batch_size):
                batch = torch.stack([dataset[i][0]
                                     for i in range(start, min(start + batch_size,
                                                               len(dataset)))])
                logits = model(batch)
                # float64 softmax keeps the row sums within 1e-6 of 1
                scores = torch.softmax(logits.double(), dim=1).numpy()
                for row_offset, probs in enumerate(scores):
                    idx = indices[start + row_offset]
                    predicted = CLASS_NAMES[int(np.argmax(probs))]
                    truth = container.labels[idx].class_name
                    writer.writerow([idx, truth, predicted]
                                    + [repr(float(p)) for p in probs])
                    rows += 1
    return rows
