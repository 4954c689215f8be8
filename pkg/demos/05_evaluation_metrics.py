"""Evaluation stack: confusion matrix, binary view, rates, ROC and the
closed-form conversion from accuracy/precision/recall back to FPR.

Works on a small fabricated prediction set so every number can be checked by
hand.
"""

from sensorgrid.metrics import (
    binarize,
    confusion,
    fpr_from_apr,
    rates,
    rates_percent,
    roc_auc,
)
from sensorgrid.schema import EventClass

N, D, P = EventClass.NORMAL, EventClass.DDOS, EventClass.PASSWORD

predictions = [
    # (true, predicted): one ddos slips through as normal, one normal flags as password
    (N, N), (N, N), (N, N), (N, N), (N, P),
    (D, D), (D, D), (D, N),
    (P, P), (P, D),
]
cm = confusion(predictions)
print("confusion matrix (true x predicted, class order b d i n p r s x):")
for row, clazz in zip(cm.counts, ("b", "d", "i", "n", "p", "r", "s", "x")):
    print(f"  {clazz}: {row.tolist()}")

bs = binarize(cm)
print(f"\nattack-vs-normal: TP={bs.tp} FP={bs.fp} TN={bs.tn} FN={bs.fn}")
print(f"rates:            { {k: str(v) for k, v in rates(bs).items()} }")
print(f"as percentages:   {rates_percent(bs)}")

# recover FPR from the three rates alone, as used for published baselines
a, p, t = float(bs.accuracy), float(bs.precision), float(bs.tpr)
print(f"\nfpr_from_apr(a={a:.3f}, p={p:.3f}, t={t:.3f}) = "
      f"{fpr_from_apr(a, p, t):.6f}  (direct: {float(bs.fpr):.6f})")

# ROC over attack scores (here: hand-picked score per row)
scored = [
    (N, 0.05), (N, 0.10), (N, 0.20), (N, 0.15), (N, 0.55),
    (D, 0.90), (D, 0.85), (D, 0.40),
    (P, 0.95), (P, 0.70),
]
result = roc_auc(scored)
print(f"\nROC ({len(result.points)} points), AUC = {result.auc:.4f}")
for threshold, fpr, tpr in result.points:
    print(f"  thr>={threshold:<5} fpr={fpr:.2f} tpr={tpr:.2f}")
