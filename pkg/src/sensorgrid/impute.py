"""Missing-value strategies and their composition into three-channel recipes.

Every strategy takes a chunk of combined rows and returns a dense numeric
matrix; no output cell is ever left missing. Strategies are applied per chunk
so that filled values never leak across the train/test boundary, and per
channel so that mixed recipes stay independent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from sensorgrid.errors import MissingStats, UnknownStrategy
from sensorgrid.schema import (
    FEATURE_COUNT,
    FEATURES,
    CombinedRow,
    row_values_matrix,
)

CONST_NEG_VALUE = -100.0
CONST_POS_VALUE = 100.0


class ChannelStrategy:
    """Enumeration of the per-channel imputation strategies."""

    CONST_NEG = "-const"
    CONST_POS = "+const"
    MISS = "miss"
    FILL = "fill"
    MEDIAN_MODE = "mm"

    ALL = (CONST_NEG, CONST_POS, MISS, FILL, MEDIAN_MODE)


_TOKEN_RE = re.compile(r"^([+-]?[a-z]+)(\d+)$")


def parse_strategy_token(token: str) -> tuple[str, str, str]:
    """Parse a recipe token such as ``miss3`` or ``fill2|miss1``.

    Each piece names a strategy and how many consecutive channels use it;
    counts must sum to the three available channels.
    """
    channels: list[str] = []
    for piece in token.strip().split("|"):
        m = _TOKEN_RE.match(piece.strip())
        if not m:
            raise UnknownStrategy(f"cannot parse strategy piece {piece!r}")
        name, count = m.group(1), int(m.group(2))
        if name not in ChannelStrategy.ALL:
            raise UnknownStrategy(f"unknown strategy {name!r}")
        channels.extend([name] * count)
    if len(channels) != 3:
        raise UnknownStrategy(f"{token!r} describes {len(channels)} channels, need 3")
    return (channels[0], channels[1], channels[2])


def strategy_token(strategies: Sequence[str]) -> str:
    """Inverse of :func:`parse_strategy_token` (canonical run-length form)."""
    pieces = []
    i = 0
    while i < len(strategies):
        j = i
        while j < len(strategies) and strategies[j] == strategies[i]:
            j += 1
        pieces.append(f"{strategies[i]}{j - i}")
        i = j
    return "|".join(pieces)


@dataclass(frozen=True)
class TensorSpec:
    """Three per-channel strategies plus the sliding-window step."""

    strategies: tuple[str, str, str]
    step: int
    height: int = 224
    width: int = 224

    def __post_init__(self) -> None:
        if self.step < 1:
            raise ValueError("step must be >= 1")
        for s in self.strategies:
            if s not in ChannelStrategy.ALL:
                raise UnknownStrategy(f"unknown strategy {s!r}")

    @property
    def token(self) -> str:
        return strategy_token(self.strategies)

    @classmethod
    def from_token(cls, token: str, step: int) -> "TensorSpec":
        return cls(parse_strategy_token(token), step)


@dataclass(frozen=True)
class ImputeStats:
    """Per-feature median (numeric) or mode (categorical) of the training rows."""

    fill_values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.fill_values) != FEATURE_COUNT:
            raise ValueError("need one fill value per feature")


def fit_impute_stats(train_rows: Sequence[CombinedRow]) -> ImputeStats:
    """Compute median/mode fill values from the training partition only.

    Numeric features use the median of their present numeric codes, categorical
    features the most frequent code (smaller code wins ties). A feature never
    present in training falls back to 0.
    """
    values, mask = row_values_matrix(train_rows)
    fills = []
    for j, feat in enumerate(FEATURES):
        present = values[mask[:, j] == 0, j]
        if present.size == 0:
            fills.append(0.0)
        elif feat.categorical:
            codes, counts = np.unique(present, return_counts=True)
            fills.append(float(codes[np.argmax(counts)]))
        else:
            fills.append(float(np.median(present)))
    return ImputeStats(tuple(fills))


def impute_matrix(
    values: np.ndarray,
    mask: np.ndarray,
    strategy: str,
    stats: Optional[ImputeStats] = None,
) -> np.ndarray:
    """Apply one strategy to a (rows x features) value/mask pair.

    Present cells pass through bit-exactly for every strategy except ``miss``,
    which discards values and returns the mask itself.
    """
    missing = mask.astype(bool)
    if strategy == ChannelStrategy.MISS:
        return mask.astype(np.float64)
    if strategy == ChannelStrategy.CONST_NEG:
        return np.where(missing, CONST_NEG_VALUE, values)
    if strategy == ChannelStrategy.CONST_POS:
        return np.where(missing, CONST_POS_VALUE, values)
    if strategy == ChannelStrategy.MEDIAN_MODE:
        if stats is None:
            raise MissingStats("median/mode strategy needs training statistics")
        fill = np.asarray(stats.fill_values, dtype=np.float64)
        return np.where(missing, fill[np.newaxis, :], values)
    if strategy == ChannelStrategy.FILL:
        return _forward_backward_fill(values, missing)
    raise UnknownStrategy(f"unknown strategy {strategy!r}")


def _forward_backward_fill(values: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """Forward fill per column, backfilling leading gaps; empty columns get 0."""
    n = values.shape[0]
    out = values.copy()
    if n == 0:
        return out
    idx = np.arange(n)
    for j in range(values.shape[1]):
        present = ~missing[:, j]
        if not present.any():
            out[:, j] = 0.0
            continue
        last_seen = np.maximum.accumulate(np.where(present, idx, -1))
        first = int(np.argmax(present))
        source = np.where(last_seen >= 0, last_seen, first)
        out[:, j] = values[source, j]
    return out


def impute_channel(
    rows: Sequence[CombinedRow],
    strategy: str,
    stats: Optional[ImputeStats] = None,
) -> np.ndarray:
    """Dense (rows x 17) float matrix for one chunk under one strategy."""
    values, mask = row_values_matrix(rows)
    return impute_matrix(values, mask, strategy, stats)


def needs_stats(strategies: Sequence[str]) -> bool:
    return ChannelStrategy.MEDIAN_MODE in strategies
