import math
from fractions import Fraction

import numpy as np
import pytest

from sensorgrid.errors import DegenerateInput, SingleClass, UndefinedRate
from sensorgrid.metrics import (
    CLASS_ORDER,
    BinaryStats,
    ConfusionMatrix,
    binarize,
    confusion,
    fpr_from_apr,
    rates,
    rates_percent,
    roc_auc,
)
from sensorgrid.schema import EventClass

# Reported confusion table of the best 8-class residual-network run, kept as
# a cross-check fixture (rows/columns in class order b d i n p r s x).
RESNET_CONFUSION = [
    [213, 3, 0, 106, 1, 1, 0, 1],
    [18, 273, 4, 0, 0, 20, 0, 0],
    [0, 0, 521, 9, 2, 1, 2, 0],
    [8, 0, 1, 3179, 0, 0, 0, 1],
    [0, 8, 7, 19, 364, 1, 5, 4],
    [0, 0, 22, 0, 7, 141, 0, 5],
    [3, 0, 2, 2, 15, 0, 20, 0],
    [0, 0, 0, 4, 1, 0, 0, 45],
]


def test_class_order_is_alphabetical():
    assert [c.value for c in CLASS_ORDER] == [
        "backdoor", "ddos", "injection", "normal",
        "password", "ransomware", "scanning", "xss"]


def test_confusion_accumulates():
    cm = confusion([(EventClass.NORMAL, EventClass.NORMAL),
                    (EventClass.DDOS, EventClass.BACKDOOR)])
    assert cm.cell(EventClass.NORMAL, EventClass.NORMAL) == 1
    assert cm.cell(EventClass.DDOS, EventClass.BACKDOOR) == 1
    assert cm.total == 2


def test_confusion_empty_is_zero():
    cm = confusion([])
    assert cm.total == 0
    assert np.all(cm.counts == 0)


def test_reference_table_row_sums():
    cm = ConfusionMatrix(RESNET_CONFUSION)
    sums = cm.row_sums()
    assert sums[EventClass.BACKDOOR] == 213 + 3 + 0 + 106 + 1 + 1 + 0 + 1
    assert cm.cell(EventClass.BACKDOOR, EventClass.NORMAL) == 106


def test_binarize_reference_table():
    # oracle: re-sum the printed table by hand before comparing
    normal_idx = 3
    fn_oracle = sum(row[normal_idx] for i, row in enumerate(RESNET_CONFUSION)
                    if i != normal_idx)
    fp_oracle = sum(v for j, v in enumerate(RESNET_CONFUSION[normal_idx])
                    if j != normal_idx)
    assert fn_oracle == 140
    assert fp_oracle == 10

    bs = binarize(ConfusionMatrix(RESNET_CONFUSION))
    assert bs.fn == fn_oracle
    assert bs.fp == fp_oracle
    assert bs.tn == 3179
    total = sum(sum(row) for row in RESNET_CONFUSION)
    assert bs.total == total
    assert bs.tp == total - bs.tn - bs.fp - bs.fn


def test_binarize_identity_matrix():
    cm = ConfusionMatrix(np.diag([5, 5, 5, 5, 5, 5, 5, 5]))
    bs = binarize(cm)
    assert bs.fp == 0 and bs.fn == 0
    assert bs.tp == 35 and bs.tn == 5


def test_binarize_all_predicted_normal():
    counts = np.zeros((8, 8), dtype=int)
    counts[:, 3] = [2, 2, 2, 9, 2, 2, 2, 2]
    bs = binarize(ConfusionMatrix(counts))
    assert bs.tp == 0 and bs.fp == 0
    assert bs.tn == 9 and bs.fn == 14


def test_rates_worked_example():
    bs = BinaryStats(tp=80, fn=20, fp=10, tn=90)
    r = rates(bs)
    assert r["tpr"] == Fraction(8, 10)
    assert r["fpr"] == Fraction(1, 10)
    assert r["precision"] == Fraction(80, 90)
    assert r["accuracy"] == Fraction(85, 100)
    assert rates_percent(bs)["precision"] == "88.89"


def test_rates_perfect_classifier():
    bs = BinaryStats(tp=10, fn=0, fp=0, tn=10)
    r = rates(bs)
    assert r["tpr"] == 1 and r["fpr"] == 0


def test_undefined_rates_are_absent():
    bs = BinaryStats(tp=0, fn=0, fp=3, tn=7)
    assert "tpr" not in rates(bs)
    with pytest.raises(UndefinedRate):
        _ = bs.tpr


def test_fpr_from_apr_worked_examples():
    # oracle matrices: compute the three rates, then compare to FP/(FP+TN)
    for tp, fn, fp, tn in [(80, 20, 10, 90), (50, 50, 25, 75)]:
        bs = BinaryStats(tp=tp, fn=fn, fp=fp, tn=tn)
        got = fpr_from_apr(float(bs.accuracy), float(bs.precision), float(bs.tpr))
        assert got == pytest.approx(fp / (fp + tn), abs=1e-12)
    assert fpr_from_apr(0.85, 8 / 9, 0.8) == pytest.approx(0.1, abs=1e-12)
    assert fpr_from_apr(0.625, 2 / 3, 0.5) == pytest.approx(0.25, abs=1e-12)


def test_fpr_from_apr_perfect_classifier():
    assert fpr_from_apr(1.0, 1.0, 1.0) == 0.0


def test_fpr_from_apr_degenerate_inputs():
    with pytest.raises(DegenerateInput):
        fpr_from_apr(0.5, 0.0, 0.5)  # precision 0 with positive recall
    with pytest.raises(DegenerateInput):
        fpr_from_apr(1.5, 0.5, 0.5)  # out of range
    with pytest.raises(DegenerateInput):
        # denominator p*(a-2t)+t = 0.5*(0-1)+0.5 = 0 with nonzero numerator
        fpr_from_apr(0.0, 0.5, 0.5)


def test_binarize_of_confusion_equals_direct_stream_counting():
    rng = np.random.default_rng(31)
    classes = list(CLASS_ORDER)
    records = [(classes[rng.integers(0, 8)], classes[rng.integers(0, 8)])
               for _ in range(500)]
    bs = binarize(confusion(records))
    tp = sum(1 for t, p in records if t.is_attack and p.is_attack)
    fn = sum(1 for t, p in records if t.is_attack and not p.is_attack)
    fp = sum(1 for t, p in records if not t.is_attack and p.is_attack)
    tn = sum(1 for t, p in records if not t.is_attack and not p.is_attack)
    assert (bs.tp, bs.fn, bs.fp, bs.tn) == (tp, fn, fp, tn)


def pair_count_auc(records):
    pos = [s for c, s in records if c is not EventClass.NORMAL]
    neg = [s for c, s in records if c is EventClass.NORMAL]
    score = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                score += 1.0
            elif p == n:
                score += 0.5
    return score / (len(pos) * len(neg))


def test_auc_toy_example():
    records = [(EventClass.DDOS, 0.9), (EventClass.DDOS, 0.6),
               (EventClass.NORMAL, 0.7), (EventClass.NORMAL, 0.2)]
    result = roc_auc(records)
    assert result.auc == pytest.approx(0.75, abs=1e-12)
    assert result.auc == pytest.approx(pair_count_auc(records), abs=1e-12)


def test_auc_perfect_separation():
    records = [(EventClass.DDOS, s) for s in (0.9, 0.8)] + \
              [(EventClass.NORMAL, s) for s in (0.3, 0.1)]
    assert roc_auc(records).auc == pytest.approx(1.0)


def test_auc_random_scores_near_half():
    rng = np.random.default_rng(12)
    records = [(EventClass.DDOS if rng.random() < 0.5 else EventClass.NORMAL,
                float(rng.random())) for _ in range(4000)]
    assert roc_auc(records).auc == pytest.approx(0.5, abs=0.05)


def test_auc_matches_pair_counting_with_ties():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(4, 200))
        records = []
        has = {True: False, False: False}
        for _ in range(n):
            attack = bool(rng.random() < 0.5)
            has[attack] = True
            # coarse grid forces plenty of tied scores
            records.append((EventClass.XSS if attack else EventClass.NORMAL,
                            float(rng.integers(0, 6)) / 5.0))
        if not (has[True] and has[False]):
            continue
        result = roc_auc(records)
        assert result.auc == pytest.approx(pair_count_auc(records), abs=1e-12)
        # curve endpoints
        assert result.points[0][1:] == (0.0, 0.0)
        assert result.points[-1][1:] == (1.0, 1.0)


def test_auc_single_class():
    with pytest.raises(SingleClass):
        roc_auc([(EventClass.NORMAL, 0.1), (EventClass.NORMAL, 0.5)])
    with pytest.raises(SingleClass):
        roc_auc([])
