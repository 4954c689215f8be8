"""Container fabrication helpers: tests build the on-disk format directly."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from trainer.container import HEIGHT, WIDTH, CHANNELS, LABEL_HEADER


def build_container(directory: Path, samples: list[tuple[str, str, np.ndarray]],
                    manifest_extra: dict | None = None) -> Path:
    """Write manifest.json + samples.bin + labels.csv from (partition, class,
    tensor) triples."""
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {"format_version": "1", "sample_total": len(samples)}
    manifest.update(manifest_extra or {})
    (directory / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    with (directory / "samples.bin").open("wb") as fb:
        for _, _, tensor in samples:
            assert tensor.shape == (HEIGHT, WIDTH, CHANNELS)
            fb.write(tensor.astype(np.uint8).tobytes())
    lines = [",".join(LABEL_HEADER)]
    for i, (partition, class_name, _) in enumerate(samples):
        lines.append(f"{i},{partition},{class_name},{i // 4},{(i % 4) * 20}")
    (directory / "labels.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return directory


def striped_tensor(rng: np.random.Generator, bright: bool) -> np.ndarray:
    """Dark noise everywhere; attack samples add a bright center stripe."""
    tensor = rng.integers(0, 20, size=(HEIGHT, WIDTH, CHANNELS), dtype=np.uint8)
    if bright:
        tensor[:, 103:120, :] = 230
    return tensor


@pytest.fixture
def learnable_container(tmp_path) -> Path:
    rng = np.random.default_rng(44)
    samples = []
    for i in range(48):
        attack = i % 2 == 1
        partition = "train" if i < 32 else "test"
        samples.append((partition, "ddos" if attack else "normal",
                        striped_tensor(rng, attack)))
    return build_container(tmp_path / "container", samples)
