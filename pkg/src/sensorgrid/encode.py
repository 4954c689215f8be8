"""Byte scaling, sliding-window sampling and the on-disk dataset container.

A container directory holds three files: ``manifest.json`` (the full recipe),
``samples.bin`` (raw unsigned bytes, sample-major, row-major, channel-last)
and ``labels.csv`` (one line per sample with partition, class and provenance).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from sensorgrid.errors import EmptyTraining, FormatMismatch
from sensorgrid.schema import (
    CHANNELS,
    FEATURE_COUNT,
    SAMPLE_BYTES,
    WINDOW_HEIGHT,
    WINDOW_WIDTH,
    CombinedRow,
    DatasetManifest,
    EventClass,
)
from sensorgrid.impute import TensorSpec

#: Column offset that centers the 17-feature band inside the 224-wide frame.
BAND_OFFSET = (WINDOW_WIDTH - FEATURE_COUNT) // 2

MANIFEST_FILE = "manifest.json"
SAMPLES_FILE = "samples.bin"
LABELS_FILE = "labels.csv"


@dataclass
class Scaler:
    """Per-channel, per-feature min/max observed on the imputed training data."""

    mins: np.ndarray  # (channels, features)
    maxs: np.ndarray

    def to_lists(self) -> list:
        return [
            [[float(self.mins[c, j]), float(self.maxs[c, j])]
             for j in range(FEATURE_COUNT)]
            for c in range(CHANNELS)
        ]

    @classmethod
    def from_lists(cls, raw: list) -> "Scaler":
        mins = np.array([[pair[0] for pair in chan] for chan in raw], dtype=np.float64)
        maxs = np.array([[pair[1] for pair in chan] for chan in raw], dtype=np.float64)
        return cls(mins, maxs)


def fit_scaler(train_matrices: Sequence[Sequence[np.ndarray]]) -> Scaler:
    """Fit min/max per channel and feature on the training partition only.

    ``train_matrices[c]`` lists the imputed matrices of every training chunk
    for channel ``c``. Raises :class:`EmptyTraining` when there are no rows.
    """
    mins = np.empty((CHANNELS, FEATURE_COUNT), dtype=np.float64)
    maxs = np.empty((CHANNELS, FEATURE_COUNT), dtype=np.float64)
    for c in range(CHANNELS):
        mats = [m for m in train_matrices[c] if m.shape[0] > 0]
        if not mats:
            raise EmptyTraining("cannot fit a scaler on an empty training partition")
        stacked = np.concatenate(mats, axis=0)
        mins[c] = stacked.min(axis=0)
        maxs[c] = stacked.max(axis=0)
    return Scaler(mins, maxs)


def scale(matrix: np.ndarray, scaler: Scaler, channel: int) -> np.ndarray:
    """Map values into bytes: round(255 * (v - min) / (max - min)).

    Rounding is half away from zero; results are clamped to [0, 255] because
    test values may fall outside the training range. Degenerate features
    (max == min) map to 0.
    """
    mins = scaler.mins[channel]
    maxs = scaler.maxs[channel]
    span = maxs - mins
    out = np.zeros(matrix.shape, dtype=np.float64)
    ok = span > 0
    t = (matrix[:, ok] - mins[ok]) * 255.0 / span[ok]
    rounded = np.where(t >= 0, np.floor(t + 0.5), np.ceil(t - 0.5))
    out[:, ok] = np.clip(rounded, 0.0, 255.0)
    return out.astype(np.uint8)


@dataclass(frozen=True)
class Sample:
    """One encoded window plus its label and provenance."""

    tensor: np.ndarray  # (224, 224, 3) uint8
    clazz: EventClass
    chunk_index: int
    start_row: int
    partition: str


def window_starts(row_count: int, step: int) -> range:
    """Start indices of all full windows inside a chunk of ``row_count`` rows."""
    if step < 1:
        raise ValueError("step must be >= 1")
    if row_count < WINDOW_HEIGHT:
        return range(0)
    return range(0, row_count - WINDOW_HEIGHT + 1, step)


def sample_windows(
    channel_bytes: Sequence[np.ndarray],
    classes: Sequence[EventClass],
    spec: TensorSpec,
    chunk_index: int,
    partition: str,
) -> Iterator[Sample]:
    """Slide a 224-row window over one chunk's byte matrices.

    The 17 feature columns sit centered horizontally; everything else is zero
    padding. A window's label is the class of its last (most recent) row.
    Chunks shorter than the window height yield nothing.
    """
    rows = len(classes)
    for c in range(CHANNELS):
        if channel_bytes[c].shape != (rows, FEATURE_COUNT):
            raise ValueError("channel matrix shape disagrees with the class list")
        if channel_bytes[c].dtype != np.uint8:
            raise ValueError("channel matrices must be uint8")
    for start in window_starts(rows, spec.step):
        tensor = np.zeros((WINDOW_HEIGHT, WINDOW_WIDTH, CHANNELS), dtype=np.uint8)
        stop = start + WINDOW_HEIGHT
        for c in range(CHANNELS):
            tensor[:, BAND_OFFSET:BAND_OFFSET + FEATURE_COUNT, c] = \
                channel_bytes[c][start:stop]
        yield Sample(tensor, classes[stop - 1], chunk_index, start, partition)


@dataclass(frozen=True)
class LabelRecord:
    index: int
    partition: str
    clazz: EventClass
    chunk_index: int
    start_row: int


@dataclass
class DatasetView:
    """In-memory view of a container: tensors, labels and manifest."""

    manifest: DatasetManifest
    tensors: np.ndarray  # (n, 224, 224, 3) uint8
    labels: list[LabelRecord]

    def __len__(self) -> int:
        return len(self.labels)


def write_dataset(
    samples: Iterable[Sample],
    manifest: DatasetManifest,
    out_dir: Path | str,
) -> DatasetManifest:
    """Stream samples into a container directory and finalize its manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts: dict[str, dict[str, int]] = {}
    n = 0
    with (out_dir / SAMPLES_FILE).open("wb") as fb, \
            (out_dir / LABELS_FILE).open("w", newline="", encoding="utf-8") as fl:
        writer = csv.writer(fl)
        writer.writerow(["index", "partition", "class", "chunk_index", "start_row"])
        for s in samples:
            if s.tensor.shape != (WINDOW_HEIGHT, WINDOW_WIDTH, CHANNELS) \
                    or s.tensor.dtype != np.uint8:
                raise FormatMismatch("sample tensor must be 224x224x3 uint8")
            fb.write(s.tensor.tobytes())
            writer.writerow([n, s.partition, s.clazz.value, s.chunk_index, s.start_row])
            part = counts.setdefault(s.partition, {})
            part[s.clazz.value] = part.get(s.clazz.value, 0) + 1
            n += 1
    manifest.sample_total = n
    manifest.sample_counts = {k: dict(sorted(v.items())) for k, v in sorted(counts.items())}
    (out_dir / MANIFEST_FILE).write_text(manifest.to_json(), encoding="utf-8")
    return manifest


def read_dataset(container_dir: Path | str) -> DatasetView:
    """Load a container directory back; exact inverse of :func:`write_dataset`."""
    container_dir = Path(container_dir)
    manifest = DatasetManifest.from_json(
        (container_dir / MANIFEST_FILE).read_text(encoding="utf-8"))
    raw = np.fromfile(container_dir / SAMPLES_FILE, dtype=np.uint8)
    if raw.size % SAMPLE_BYTES != 0:
        raise FormatMismatch(
            f"samples.bin holds {raw.size} bytes, not a multiple of {SAMPLE_BYTES}")
    n = raw.size // SAMPLE_BYTES
    if manifest.sample_total is not None and manifest.sample_total != n:
        raise FormatMismatch(
            f"manifest declares {manifest.sample_total} samples, file holds {n}")
    tensors = raw.reshape(n, WINDOW_HEIGHT, WINDOW_WIDTH, CHANNELS)

    labels: list[LabelRecord] = []
    with (container_dir / LABELS_FILE).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["index", "partition", "class", "chunk_index", "start_row"]:
            raise FormatMismatch("labels.csv has an unexpected header")
        for rec in reader:
            labels.append(LabelRecord(int(rec[0]), rec[1],
                                      EventClass.from_name(rec[2]),
                                      int(rec[3]), int(rec[4])))
    if len(labels) != n:
        raise FormatMismatch(f"labels.csv lists {len(labels)} samples, file holds {n}")
    for i, rec in enumerate(labels):
        if rec.index != i:
            raise FormatMismatch(f"labels.csv index column breaks at row {i}")
    return DatasetView(manifest, tensors, labels)


def save_previews(view: DatasetView, out_dir: Path | str, count: int = 8) -> list[Path]:
    """Write the first samples as RGB PNGs for visual inspection."""
    from PIL import Image

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for rec in view.labels[:count]:
        img = Image.fromarray(view.tensors[rec.index], mode="RGB")
        path = out_dir / f"sample_{rec.index:05d}_{rec.partition}_{rec.clazz.value}.png"
        img.save(path)
        paths.append(path)
    return paths
