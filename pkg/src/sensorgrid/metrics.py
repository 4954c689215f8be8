"""Eight-class and derived binary evaluation.

Rates are kept as exact rationals internally and formatted to two decimals
only at the reporting edge. The attack-vs-normal view counts any attack class
predicted for an attack row as a true positive, regardless of which attack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from sensorgrid.errors import DegenerateInput, SingleClass, UndefinedRate
from sensorgrid.schema import EventClass

#: Fixed class order of confusion matrices (alphabetical).
CLASS_ORDER: tuple[EventClass, ...] = tuple(sorted(EventClass, key=lambda c: c.value))
CLASS_POS: dict[EventClass, int] = {c: i for i, c in enumerate(CLASS_ORDER)}
NORMAL_POS = CLASS_POS[EventClass.NORMAL]


@dataclass
class ConfusionMatrix:
    """8x8 counts, true class by predicted class."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (len(CLASS_ORDER), len(CLASS_ORDER)):
            raise ValueError("confusion matrix must be 8x8")

    def cell(self, true: EventClass, predicted: EventClass) -> int:
        return int(self.counts[CLASS_POS[true], CLASS_POS[predicted]])

    def row_sums(self) -> dict[EventClass, int]:
        return {c: int(self.counts[i].sum()) for i, c in enumerate(CLASS_ORDER)}

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> dict:
        return {
            "classes": [c.value for c in CLASS_ORDER],
            "matrix": self.counts.tolist(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ConfusionMatrix":
        if raw.get("classes") != [c.value for c in CLASS_ORDER]:
            raise ValueError("confusion matrix class order mismatch")
        return cls(np.asarray(raw["matrix"], dtype=np.int64))


def confusion(records: Iterable[tuple[EventClass, EventClass]]) -> ConfusionMatrix:
    """Accumulate (true, predicted) pairs into a confusion matrix."""
    counts = np.zeros((len(CLASS_ORDER), len(CLASS_ORDER)), dtype=np.int64)
    for true, predicted in records:
        counts[CLASS_POS[true], CLASS_POS[predicted]] += 1
    return ConfusionMatrix(counts)


@dataclass(frozen=True)
class BinaryStats:
    """Attack-vs-normal counts derived from 8-class predictions."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def _ratio(self, num: int, den: int, name: str) -> Fraction:
        if den == 0:
            raise UndefinedRate(f"{name} undefined: denominator is zero")
        return Fraction(num, den)

    @property
    def tpr(self) -> Fraction:
        return self._ratio(self.tp, self.tp + self.fn, "tpr")

    @property
    def fpr(self) -> Fraction:
        return self._ratio(self.fp, self.fp + self.tn, "fpr")

    @property
    def precision(self) -> Fraction:
        return self._ratio(self.tp, self.tp + self.fp, "precision")

    @property
    def accuracy(self) -> Fraction:
        return self._ratio(self.tp + self.tn, self.total, "accuracy")

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


def binarize(cm: ConfusionMatrix) -> BinaryStats:
    """Collapse 8 classes into attack-vs-normal (positive = any attack)."""
    m = cm.counts
    tn = int(m[NORMAL_POS, NORMAL_POS])
    fp = int(m[NORMAL_POS].sum()) - tn
    fn = int(m[:, NORMAL_POS].sum()) - tn
    tp = int(m.sum()) - tn - fp - fn
    return BinaryStats(tp=tp, fp=fp, tn=tn, fn=fn)


RATE_NAMES = ("tpr", "fpr", "precision", "accuracy")


def rates(bs: BinaryStats) -> dict[str, Fraction]:
    """All defined rates; undefined ones are absent, never reported as 0."""
    out: dict[str, Fraction] = {}
    for name in RATE_NAMES:
        try:
            out[name] = getattr(bs, name)
        except UndefinedRate:
            pass
    return out


def rates_percent(bs: BinaryStats) -> dict[str, str]:
    """Rates formatted as two-decimal percentages for tables."""
    return {name: f"{float(value) * 100:.2f}" for name, value in rates(bs).items()}


def fpr_from_apr(accuracy: float, precision: float, recall: float) -> float:
    """False positive rate recovered from accuracy, precision and recall.

    Valid whenever the three rates are consistent with some non-negative
    confusion matrix. A perfect classifier (numerator and denominator both
    zero through accuracy or precision being 1) returns 0; other vanishing
    denominators and contradictory inputs raise :class:`DegenerateInput`.
    """
    a, p, t = float(accuracy), float(precision), float(recall)
    for name, v in (("accuracy", a), ("precision", p), ("recall", t)):
        if not 0.0 <= v <= 1.0 or not math.isfinite(v):
            raise DegenerateInput(f"{name} must lie in [0, 1], got {v!r}")
    if p == 0.0 and t > 0.0:
        raise DegenerateInput("precision 0 contradicts a positive recall")
    numerator = (1.0 - a) * (1.0 - p) * t
    denominator = p * (a - 2.0 * t) + t
    if abs(denominator) < 1e-15:
        if numerator == 0.0 and (a == 1.0 or p == 1.0):
            return 0.0
        raise DegenerateInput("denominator p*(a - 2t) + t vanishes")
    return numerator / denominator


@dataclass
class RocResult:
    """ROC curve points (threshold, fpr, tpr) and the trapezoidal AUC."""

    points: list[tuple[float, float, float]]
    auc: float


def roc_auc(records: Sequence[tuple[EventClass, float]]) -> RocResult:
    """ROC over attack scores; positives are attack rows.

    Equal scores collapse into a single threshold, which makes the trapezoidal
    AUC equal to the concordant-pair probability with ties counted half.
    """
    if not records:
        raise SingleClass("no predictions")
    y = np.array([1 if clazz.is_attack else 0 for clazz, _ in records], dtype=np.int64)
    scores = np.array([s for _, s in records], dtype=np.float64)
    if not np.isfinite(scores).all():
        raise ValueError("attack scores must be finite")
    n_pos = int(y.sum())
    n_neg = int(y.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("need at least one attack and one normal row")

    order = np.argsort(-scores, kind="stable")
    y = y[order]
    scores = scores[order]
    # group ties: indices where a threshold ends
    distinct = np.nonzero(np.diff(scores))[0]
    boundaries = np.concatenate([distinct, [y.size - 1]])
    cum_tp = np.cumsum(y)
    cum_fp = np.cumsum(1 - y)

    points: list[tuple[float, float, float]] = [(math.inf, 0.0, 0.0)]
    for b in boundaries:
        points.append((float(scores[b]),
                       float(cum_fp[b]) / n_neg,
                       float(cum_tp[b]) / n_pos))
    auc = 0.0
    for (_, fpr0, tpr0), (_, fpr1, tpr1) in zip(points, points[1:]):
        auc += (fpr1 - fpr0) * (tpr1 + tpr0) / 2.0
    return RocResult(points, auc)
