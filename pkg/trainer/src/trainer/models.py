"""Model zoo: a desk-scale CNN plus optional full-size backbones.

All models consume byte tensors in [0, 255]; whatever normalization a model
wants is part of its own definition. The tiny CNN rescales internally; the
efficientnet path takes the bytes as-is, matching its reference preprocessing
expectations.
"""

from __future__ import annotations

import torch
from torch import nn

MODEL_NAMES = ("tiny-cnn", "resnet50", "efficientnet-b0")


class TinyCnn(nn.Module):
    """Three conv blocks with pooling, then a small dense head."""

    def __init__(self, num_classes: int = 8):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 16, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(4),   # 224 -> 56
            nn.Conv2d(16, 32, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(4),   # 56 -> 14
            nn.Conv2d(32, 64, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(2),   # 14 -> 7
        )
        self.head = nn.Sequential(
            nn.Flatten(),
            nn.Linear(64 * 7 * 7, 128),
            nn.ReLU(inplace=True),
            nn.Linear(128, num_classes),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        # bytes in, unit-scale internally
        return self.head(self.features(x / 255.0))


class ScaledBackbone(nn.Module):
    """Wraps a torchvision backbone with its input scaling convention."""

    def __init__(self, backbone: nn.Module, input_scale: float):
        super().__init__()
        self.backbone = backbone
        self.input_scale = input_scale

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.backbone(x * self.input_scale)


def build_model(name: str, num_classes: int = 8, pretrained: bool = False) -> nn.Module:
    if name == "tiny-cnn":
        return TinyCnn(num_classes)
    if name in ("resnet50", "efficientnet-b0"):
        # optional full-scale modes; torchvision stays an extra dependency
        from torchvision import models

        weights = "DEFAULT" if pretrained else None
        if name == "resnet50":
            net = models.resnet50(weights=weights)
            net.fc = nn.Linear(net.fc.in_features, num_classes)
            return ScaledBackbone(net, 1.0 / 255.0)
        net = models.efficientnet_b0(weights=weights)
        net.classifier[-1] = nn.Linear(net.classifier[-1].in_features, num_classes)
        return ScaledBackbone(net, 1.0)  # efficientnet consumes 0..255 directly
    raise ValueError(f"unknown model {name!r}; pick one of {MODEL_NAMES}")
