"""Reader for the dataset container directory format.

A container holds ``manifest.json``, ``samples.bin`` (raw uint8, sample-major,
row-major, channel-last, 224 x 224 x 3 per sample) and ``labels.csv`` with
columns index, partition, class, chunk_index, start_row. This module
re-implements the reader from the documented format on purpose: the only
contract between the pipeline and the trainer is the files themselves.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from trainer.errors import ContainerError

HEIGHT = 224
WIDTH = 224
CHANNELS = 3
SAMPLE_BYTES = HEIGHT * WIDTH * CHANNELS

#: Alphabetical class order shared with the evaluation side.
CLASS_NAMES = ("backdoor", "ddos", "injection", "normal",
               "password", "ransomware", "scanning", "xss")
CLASS_TO_INDEX = {name: i for i, name in enumerate(CLASS_NAMES)}

LABEL_HEADER = ["index", "partition", "class", "chunk_index", "start_row"]


@dataclass(frozen=True)
class SampleLabel:
    index: int
    partition: str
    class_name: str
    chunk_index: int
    start_row: int

    @property
    def class_index(self) -> int:
        return CLASS_TO_INDEX[self.class_name]


@dataclass
class Container:
    manifest: dict
    tensors: np.ndarray  # (n, 224, 224, 3) uint8, memory-mapped
    labels: list[SampleLabel]

    def __len__(self) -> int:
        return len(self.labels)

    def indices_for(self, partition: str) -> list[int]:
        return [rec.index for rec in self.labels if rec.partition == partition]

    def present_classes(self) -> set[str]:
        return {rec.class_name for rec in self.labels}

    def classes_in(self, partition: str) -> set[str]:
        return {rec.class_name for rec in self.labels if rec.partition == partition}


def read_container(container_dir: Path | str) -> Container:
    container_dir = Path(container_dir)
    manifest_path = container_dir / "manifest.json"
    samples_path = container_dir / "samples.bin"
    labels_path = container_dir / "labels.csv"
    for path in (manifest_path, samples_path, labels_path):
        if not path.exists():
            raise ContainerError(f"missing container file {path}")

    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ContainerError(f"manifest.json is not valid JSON: {exc}") from None

    size = samples_path.stat().st_size
    if size % SAMPLE_BYTES != 0:
        raise ContainerError(
            f"samples.bin holds {size} bytes, not a multiple of {SAMPLE_BYTES}")
    n = size // SAMPLE_BYTES
    declared = manifest.get("sample_total")
    if declared is not None and declared != n:
        raise ContainerError(f"manifest declares {declared} samples, file holds {n}")
    tensors = np.memmap(samples_path, dtype=np.uint8, mode="r",
                        shape=(n, HEIGHT, WIDTH, CHANNELS))

    labels: list[SampleLabel] = []
    with labels_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != LABEL_HEADER:
            raise ContainerError(f"labels.csv header must be {','.join(LABEL_HEADER)}")
        for rec in reader:
            name = rec[2]
            if name not in CLASS_TO_INDEX:
                raise ContainerError(f"labels.csv names unknown class {name!r}")
            labels.append(SampleLabel(int(rec[0]), rec[1], name,
                                      int(rec[3]), int(rec[4])))
    if len(labels) != n:
        raise ContainerError(f"labels.csv lists {len(labels)} samples, file holds {n}")
    for i, rec in enumerate(labels):
        if rec.index != i:
            raise ContainerError(f"labels.csv index column breaks at row {i}")
    return Container(manifest, tensors, labels)
