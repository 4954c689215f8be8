"""Training loop: container in, checkpoint and training log out."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Optional

import numpy as np
import torch
from torch import nn
from torch.utils.data import DataLoader, Dataset

from trainer.container import (
    CHANNELS,
    CLASS_NAMES,
    HEIGHT,
    WIDTH,
    Container,
    read_container,
)
from trainer.errors import ClassMissing
from trainer.models import build_model


@dataclass
class TrainConfig:
    model: str = "tiny-cnn"
    learning_rate: float = 1e-2
    epochs: int = 20
    pretrained: bool = False
    num_classes: int = 8
    batch_size: int = 32
    # optimizer choice is a declared default, not part of the recipe contract
    optimizer: str = "adam"


class ContainerDataset(Dataset):
    def __init__(self, container: Container, indices: list[int]):
        self.container = container
        self.indices = indices

    def __len__(self) -> int:
        return len(self.indices)

    def __getitem__(self, i: int):
        idx = self.indices[i]
        # copy the read-only memmap slice; channel-last bytes -> channel-first
        # float, still in [0, 255]
        tensor = torch.from_numpy(
            np.array(self.container.tensors[idx])).permute(2, 0, 1).float()
        return tensor, self.container.labels[idx].class_index


def _check_class_coverage(container: Container) -> None:
    present = container.present_classes()
    train_classes = container.classes_in("train")
    missing = sorted(present - train_classes)
    if missing:
        raise ClassMissing(
            f"classes {missing} appear in the container but not in the train partition")
    if not container.indices_for("train"):
        raise ClassMissing("train partition is empty")


def _build_optimizer(config: TrainConfig, model: nn.Module):
    if config.optimizer == "adam":
        return torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    if config.optimizer == "sgd":
        return torch.optim.SGD(model.parameters(), lr=config.learning_rate)
    raise ValueError(f"unknown optimizer {config.optimizer!r}")


def train(
    container_dir: Path | str,
    config: TrainConfig,
    seed: int,
    checkpoint_path: Path | str,
    log_path: Optional[Path | str] = None,
) -> dict:
    """Train a model on the container's train partition.

    Deterministic for a given seed up to backend nondeterminism, which is
    recorded in the log. Returns the log document; epoch 0 saves the untouched
    initialization.
    """
    container = read_container(container_dir)
    _check_class_coverage(container)

    torch.manual_seed(seed)
    model = build_model(config.model, config.num_classes, config.pretrained)
    dataset = ContainerDataset(container, container.indices_for("train"))
    generator = torch.Generator()
    generator.manual_seed(seed)
    loader = DataLoader(dataset, batch_size=config.batch_size, shuffle=True,
                        generator=generator)
    criterion = nn.CrossEntropyLoss()
    optimizer = _build_optimizer(config, model)

    epoch_losses: list[float] = []
    model.train()
    for _ in range(config.epochs):
        total = 0.0
        seen = 0
        for batch, targets in loader:
            optimizer.zero_grad()
            loss = criterion(model(batch), targets)
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * len(targets)
            seen += len(targets)
        epoch_losses.append(total / seen)

    checkpoint = {
        "state_dict": model.state_dict(),
        "config": asdict(config),
        "seed": seed,
        "input_shape": [HEIGHT, WIDTH, CHANNELS],
        "class_names": list(CLASS_NAMES),
    }
    torch.save(checkpoint, checkpoint_path)

    log = {
        "config": asdict(config),
        "seed": seed,
        "train_samples": len(dataset),
        "epochs": [{"epoch": i + 1, "loss": loss}
                   for i, loss in enumerate(epoch_losses)],
        "backend": {
            "torch": torch.__version__,
            "deterministic_algorithms": torch.are_deterministic_algorithms_enabled(),
            "num_threads": torch.get_num_threads(),
        },
    }
    if log_path is not None:
        Path(log_path).write_text(json.dumps(log, indent=2, sort_keys=True) + "\n",
                                  encoding="utf-8")
    return log
