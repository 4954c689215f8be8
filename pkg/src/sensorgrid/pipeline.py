"""Structural pipeline stages: combination, aggregation, segmentation, partitioning.

All stages are pure functions over immutable rows, so they can be replayed
from a manifest and parallelised across chunks once segmentation has run.
"""

from __future__ import annotations

import csv
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from sensorgrid.errors import ClassConflict, PartitionInfeasible
from sensorgrid.schema import (
    FEATURE_COUNT,
    FEATURE_INDEX,
    FEATURES,
    FEATURES_BY_SENSOR,
    SENSOR_INDEX,
    SENSOR_ORDER,
    CombinedRow,
    EventClass,
    SensorKind,
    SensorReading,
)

COMBINE_CONCATENATE = "concatenate"
COMBINE_GROUP = "group_by_timestamp"


@dataclass
class CombineStats:
    """Oddities surfaced while combining; recorded in the manifest."""

    class_conflicts: int = 0


def _cells_for(reading: SensorReading) -> list[Optional[str]]:
    cells: list[Optional[str]] = [None] * FEATURE_COUNT
    for feat in FEATURES_BY_SENSOR[reading.sensor]:
        cells[FEATURE_INDEX[feat.name]] = reading.values[feat.name]
    return cells


def concatenate(
    sources: Mapping[SensorKind, Sequence[SensorReading]],
    stats: Optional[CombineStats] = None,
) -> list[CombinedRow]:
    """One output row per reading, other sensors' cells left missing.

    Rows are ordered by timestamp; ties resolve by fixed sensor order and
    then arrival order, and the ordinal numbers rows inside each timestamp.
    """
    readings: list[SensorReading] = []
    for kind in SENSOR_ORDER:
        readings.extend(sources.get(kind, ()))
    readings.sort(key=lambda r: (r.timestamp, SENSOR_INDEX[r.sensor], r.arrival_index))

    rows: list[CombinedRow] = []
    prev_ts: Optional[int] = None
    ordinal = 0
    for r in readings:
        ordinal = ordinal + 1 if r.timestamp == prev_ts else 0
        rows.append(CombinedRow(
            timestamp=r.timestamp,
            ordinal=ordinal,
            cells=tuple(_cells_for(r)),
            clazz=r.clazz,
            counter=1,
        ))
        prev_ts = r.timestamp
    return rows


def group_by_timestamp(
    sources: Mapping[SensorKind, Sequence[SensorReading]],
    stats: Optional[CombineStats] = None,
    strict: bool = False,
) -> list[CombinedRow]:
    """Join same-timestamp readings of different sensors into shared rows.

    The k-th reading of each sensor at a timestamp lands in the row with
    ordinal k; sensors with fewer readings leave their cells missing. A row's
    class comes from the first contributing sensor in fixed order; rows whose
    contributors disagree are counted in ``stats`` (or raise in strict mode).
    """
    by_ts: dict[int, dict[SensorKind, list[SensorReading]]] = defaultdict(dict)
    for kind in SENSOR_ORDER:
        for r in sources.get(kind, ()):
            by_ts[r.timestamp].setdefault(kind, []).append(r)
    for per_sensor in by_ts.values():
        for readings in per_sensor.values():
            readings.sort(key=lambda r: r.arrival_index)

    rows: list[CombinedRow] = []
    conflicts = 0
    for ts in sorted(by_ts):
        per_sensor = by_ts[ts]
        depth = max(len(v) for v in per_sensor.values())
        for k in range(depth):
            cells: list[Optional[str]] = [None] * FEATURE_COUNT
            contributors: list[SensorReading] = []
            for kind in SENSOR_ORDER:
                readings = per_sensor.get(kind)
                if readings is not None and k < len(readings):
                    r = readings[k]
                    contributors.append(r)
                    for feat in FEATURES_BY_SENSOR[kind]:
                        cells[FEATURE_INDEX[feat.name]] = r.values[feat.name]
            clazz = contributors[0].clazz
            if any(c.clazz is not clazz for c in contributors):
                conflicts += 1
                if strict:
                    raise ClassConflict(f"timestamp {ts}, ordinal {k}: classes disagree")
            rows.append(CombinedRow(ts, k, tuple(cells), clazz, counter=1))
    if stats is not None:
        stats.class_conflicts += conflicts
    return rows


def aggregate_keep_first(rows: Sequence[CombinedRow]) -> list[CombinedRow]:
    """Collapse each timestamp to its ordinal-0 row.

    Input must already be ordered by (timestamp, ordinal). The surviving row
    keeps the first row's cells and class; its counter becomes the sum of the
    collapsed counters, which both conserves the original row count and makes
    repeated aggregation a no-op.
    """
    out: list[CombinedRow] = []
    i = 0
    n = len(rows)
    while i < n:
        j = i
        counter = 0
        while j < n and rows[j].timestamp == rows[i].timestamp:
            counter += rows[j].counter
            j += 1
        first = rows[i]
        out.append(CombinedRow(first.timestamp, 0, first.cells, first.clazz, counter))
        i = j
    return out


@dataclass(frozen=True)
class Chunk:
    """Contiguous block of combined rows; the atomic unit of partitioning."""

    index: int
    start: int
    end: int
    class_counts: Mapping[EventClass, int]

    @property
    def size(self) -> int:
        return self.end - self.start

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "start": self.start,
            "end": self.end,
            "class_counts": {c.value: n for c, n in sorted(
                self.class_counts.items(), key=lambda kv: kv[0].value) if n},
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Chunk":
        return cls(
            index=int(raw["index"]),
            start=int(raw["start"]),
            end=int(raw["end"]),
            class_counts={EventClass.from_name(k): int(v)
                          for k, v in raw["class_counts"].items()},
        )


def segment(rows: Sequence[CombinedRow], block_size: int) -> list[Chunk]:
    """Tile the row sequence into blocks of ``block_size`` rows.

    The last block may be smaller; order inside blocks is untouched.
    """
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    chunks: list[Chunk] = []
    for index, start in enumerate(range(0, len(rows), block_size)):
        end = min(start + block_size, len(rows))
        hist = Counter(r.clazz for r in rows[start:end])
        chunks.append(Chunk(index, start, end, dict(hist)))
    return chunks


TRAIN = "train"
TEST = "test"


@dataclass(frozen=True)
class PartitionAssignment:
    """Seeded random split of chunks into train and test."""

    seed: int
    effective_seed: int
    train_fraction: float
    train_chunks: frozenset[int]
    test_chunks: frozenset[int]

    def partition_of(self, chunk_index: int) -> str:
        return TRAIN if chunk_index in self.train_chunks else TEST

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "effective_seed": self.effective_seed,
            "train_fraction": self.train_fraction,
            TRAIN: sorted(self.train_chunks),
            TEST: sorted(self.test_chunks),
        }


def _classes_of(chunks: Sequence[Chunk], ids) -> set[EventClass]:
    present: set[EventClass] = set()
    for i in ids:
        present.update(c for c, n in chunks[i].class_counts.items() if n)
    return present


def partition(
    chunks: Sequence[Chunk],
    train_fraction: float,
    seed: int,
    max_attempts: int = 100,
) -> PartitionAssignment:
    """Assign chunks uniformly at random, requiring class coverage both sides.

    The train side receives ceil(fraction * chunk_count) chunks. If some class
    present in the data is missing from either side, the draw repeats with
    seed+1 and so on; after ``max_attempts`` failures the split is declared
    infeasible (for instance when a class lives in a single chunk).
    """
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    n = len(chunks)
    n_train = math.ceil(train_fraction * n)
    present: set[EventClass] = _classes_of(chunks, range(n))

    for attempt in range(max_attempts):
        rng = np.random.default_rng(seed + attempt)
        perm = rng.permutation(n)
        train_ids = frozenset(int(i) for i in perm[:n_train])
        test_ids = frozenset(int(i) for i in perm[n_train:])
        if present <= _classes_of(chunks, train_ids) and present <= _classes_of(chunks, test_ids):
            return PartitionAssignment(seed, seed + attempt, train_fraction,
                                       train_ids, test_ids)
    raise PartitionInfeasible(
        f"no assignment in {max_attempts} attempts covers all "
        f"{len(present)} classes in both partitions")


# --- row store serialization -------------------------------------------------

ROW_COLUMNS = ["timestamp", "ordinal", "counter", "class"] + [f.name for f in FEATURES]


def write_rows_csv(rows: Sequence[CombinedRow], path: Path | str) -> None:
    """Debug/exchange export of combined rows; empty cell means missing."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ROW_COLUMNS)
        for r in rows:
            writer.writerow(
                [r.timestamp, r.ordinal, r.counter, r.clazz.value]
                + ["" if c is None else c for c in r.cells])


def read_rows_csv(path: Path | str) -> list[CombinedRow]:
    rows: list[CombinedRow] = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ROW_COLUMNS:
            raise ValueError(f"{path}: unexpected row-store header")
        for rec in reader:
            ts, ordinal, counter, clazz = rec[0], rec[1], rec[2], rec[3]
            cells = tuple(c if c != "" else None for c in rec[4:4 + FEATURE_COUNT])
            rows.append(CombinedRow(int(ts), int(ordinal), cells,
                                    EventClass.from_name(clazz), int(counter)))
    return rows
