"""Comparison tables over evaluation runs.

Assembles one or more metrics JSON documents into the familiar results
layout: imputation recipe rows, TPR/FPR percentage columns per model, plus
dataset name and sample count. Published reference figures can be appended
for orientation; they are comparison constants, not reproducible outputs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

#: Published figures kept for side-by-side comparison in reports.
REFERENCE_RESULTS: tuple[dict, ...] = (
    {"imputation": "miss3", "model": "resnet50", "tpr_pct": 92.43, "fpr_pct": 0.31,
     "dataset": "published-best", "samples": 14995},
    {"imputation": "+const3", "model": "efficientnet-b0", "tpr_pct": 94.86, "fpr_pct": 0.66,
     "dataset": "published-best", "samples": 14995},
    {"imputation": "-", "model": "decision-tree-baseline", "tpr_pct": 88.0, "fpr_pct": 12.0,
     "dataset": "published-baseline", "samples": None},
    {"imputation": "-", "model": "lstm-baseline", "tpr_pct": 81.0, "fpr_pct": 19.0,
     "dataset": "published-baseline", "samples": None},
)


def load_metrics(path: Path | str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _entry_from_metrics(doc: dict) -> dict:
    rates = doc.get("rates", {})
    return {
        "imputation": doc.get("imputation") or "-",
        "model": doc.get("model") or "-",
        "tpr_pct": rates["tpr"] * 100 if "tpr" in rates else None,
        "fpr_pct": rates["fpr"] * 100 if "fpr" in rates else None,
        "dataset": doc.get("dataset") or "-",
        "samples": doc.get("sample_count"),
    }


def _fmt_pct(value) -> str:
    return "-" if value is None else f"{value:.2f}"


def render_table(entries: Sequence[dict]) -> str:
    """Plain-text pivot: one row per (imputation, dataset), models as columns."""
    models = sorted({e["model"] for e in entries})
    keys = []
    for e in entries:
        key = (e["imputation"], e["dataset"])
        if key not in keys:
            keys.append(key)

    header = ["Imputation"]
    for m in models:
        header += [f"{m} TPR(%)", f"{m} FPR(%)"]
    header += ["Dataset", "Samples"]

    rows = [header]
    for imputation, dataset in keys:
        row = [imputation]
        samples = None
        for m in models:
            match = next((e for e in entries
                          if e["imputation"] == imputation and e["dataset"] == dataset
                          and e["model"] == m), None)
            if match is None:
                row += ["-", "-"]
            else:
                row += [_fmt_pct(match["tpr_pct"]), _fmt_pct(match["fpr_pct"])]
                samples = match["samples"] if match["samples"] is not None else samples
        row += [dataset, "-" if samples is None else str(samples)]
        rows.append(row)

    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def build_report(metric_paths: Iterable[Path | str], include_reference: bool = False) -> str:
    entries = [_entry_from_metrics(load_metrics(p)) for p in metric_paths]
    if include_reference:
        entries += [dict(r) for r in REFERENCE_RESULTS]
    return render_table(entries)
