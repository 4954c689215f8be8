"""Command-line orchestration of the full workflow.

Subcommands wire the stages end to end: ``synth`` fabricates telemetry,
``stats`` profiles it, ``prepare`` combines/aggregates/segments/partitions
into a row store, ``encode`` turns a store into a dataset container,
``evaluate`` scores a predictions file and ``report`` assembles comparison
tables. Every artifact directory carries a manifest sufficient to re-derive
it bit-exactly.

Exit codes: 0 success, 2 usage error, 3 data error, 4 infeasible partition.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from sensorgrid import encode as enc
from sensorgrid import impute as imp
from sensorgrid import ingest, metrics, pipeline, report, synth
from sensorgrid.errors import (
    FormatMismatch,
    PartitionInfeasible,
    SensorGridError,
    SingleClass,
)
from sensorgrid.schema import (
    DatasetManifest,
    EventClass,
    class_counts_to_dict,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INFEASIBLE = 4

STORE_ROWS_FILE = "rows.csv"

PREDICTION_COLUMNS = [
    "index", "true_class", "predicted_class",
    "score_b", "score_d", "score_i", "score_n",
    "score_p", "score_r", "score_s", "score_x",
]


# --- workflow functions (importable without going through argv) --------------

def run_synth(scenario_path: Path, out_dir: Path) -> dict:
    scenario = synth.Scenario.from_json(Path(scenario_path).read_text(encoding="utf-8"))
    return synth.generate(scenario, out_dir)


def run_stats(input_dir: Path, report_path: Optional[Path] = None,
              counts_csv: Optional[Path] = None) -> dict:
    readings, issues = ingest.parse_directory(input_dir)
    stats_report = ingest.dataset_stats(readings, issues)

    rows = pipeline.group_by_timestamp(readings)
    aggregated = pipeline.aggregate_keep_first(rows)
    histogram = Counter(r.clazz for r in aggregated)

    document = {
        "ingest": stats_report.to_dict(),
        "aggregated_class_counts": class_counts_to_dict(histogram),
        "aggregated_rows": len(aggregated),
    }
    if report_path is not None:
        Path(report_path).write_text(
            json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    if counts_csv is not None:
        ingest.write_counts_csv(readings, counts_csv)
    return document


def run_prepare(input_dir: Path, store_dir: Path, mode: str, aggregate: bool,
                block_size: int, train_fraction: float, seed: int) -> DatasetManifest:
    readings, issues = ingest.parse_directory(input_dir)
    combine_stats = pipeline.CombineStats()
    if mode == pipeline.COMBINE_CONCATENATE:
        rows = pipeline.concatenate(readings, combine_stats)
    elif mode == pipeline.COMBINE_GROUP:
        rows = pipeline.group_by_timestamp(readings, combine_stats)
    else:
        raise ValueError(f"unknown combination mode {mode!r}")
    if aggregate:
        rows = pipeline.aggregate_keep_first(rows)

    chunks = pipeline.segment(rows, block_size)
    assignment = pipeline.partition(chunks, train_fraction, seed)

    manifest = DatasetManifest(
        combination=mode,
        aggregated=aggregate,
        block_size=block_size,
        train_fraction=train_fraction,
        seed=seed,
        effective_seed=assignment.effective_seed,
        input_path=str(input_dir),
        row_count=len(rows),
        class_conflicts=combine_stats.class_conflicts,
        ts_mismatches=sum(i.ts_mismatches for i in issues.values()),
        chunks=[c.to_dict() for c in chunks],
        partitions={
            pipeline.TRAIN: sorted(assignment.train_chunks),
            pipeline.TEST: sorted(assignment.test_chunks),
        },
    )
    store_dir = Path(store_dir)
    store_dir.mkdir(parents=True, exist_ok=True)
    pipeline.write_rows_csv(rows, store_dir / STORE_ROWS_FILE)
    (store_dir / enc.MANIFEST_FILE).write_text(manifest.to_json(), encoding="utf-8")
    return manifest


def run_encode(store_dir: Path, out_dir: Path, imputation: str, step: int,
               previews: int = 0, previews_dir: Optional[Path] = None) -> DatasetManifest:
    store_dir = Path(store_dir)
    manifest = DatasetManifest.from_json(
        (store_dir / enc.MANIFEST_FILE).read_text(encoding="utf-8"))
    rows = pipeline.read_rows_csv(store_dir / STORE_ROWS_FILE)
    chunks = [pipeline.Chunk.from_dict(c) for c in manifest.chunks]
    train_ids = set(manifest.partitions[pipeline.TRAIN])

    spec = imp.TensorSpec.from_token(imputation, step)
    strategies = spec.strategies

    stats = None
    if imp.needs_stats(strategies):
        train_rows = [r for c in chunks if c.index in train_ids
                      for r in rows[c.start:c.end]]
        stats = imp.fit_impute_stats(train_rows)
        manifest.impute_fill_values = list(stats.fill_values)

    train_matrices = [[], [], []]
    for chunk in chunks:
        if chunk.index not in train_ids:
            continue
        chunk_rows = rows[chunk.start:chunk.end]
        for c, strategy in enumerate(strategies):
            train_matrices[c].append(imp.impute_channel(chunk_rows, strategy, stats))
    scaler = enc.fit_scaler(train_matrices)

    manifest.imputation = spec.token
    manifest.step = step
    manifest.scaler = scaler.to_lists()
    manifest.notes["imputation_scope"] = "strategies apply per chunk; fills never cross chunk boundaries"
    if imp.ChannelStrategy.CONST_NEG in strategies or imp.ChannelStrategy.CONST_POS in strategies:
        manifest.notes["constant_collision"] = (
            "imputation constants -100/+100 fall inside the integer register domain "
            "[0, 65535]; imputed register cells are indistinguishable from real readings")

    def emit():
        short = 0
        for chunk in chunks:
            chunk_rows = rows[chunk.start:chunk.end]
            if len(chunk_rows) < spec.height:
                short += 1
                manifest.short_chunks = short
                continue
            partition_tag = pipeline.TRAIN if chunk.index in train_ids else pipeline.TEST
            byte_channels = [
                enc.scale(imp.impute_channel(chunk_rows, strategy, stats), scaler, c)
                for c, strategy in enumerate(strategies)
            ]
            classes = [r.clazz for r in chunk_rows]
            yield from enc.sample_windows(byte_channels, classes, spec,
                                          chunk.index, partition_tag)

    manifest = enc.write_dataset(emit(), manifest, out_dir)
    if previews > 0:
        view = enc.read_dataset(out_dir)
        enc.save_previews(view, previews_dir or Path(out_dir) / "previews", previews)
    return manifest


def read_predictions(path: Path) -> list[dict]:
    import csv

    records = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != PREDICTION_COLUMNS:
            raise FormatMismatch(
                f"{path}: predictions header must be {','.join(PREDICTION_COLUMNS)}")
        for rec in reader:
            scores = [float(v) for v in rec[3:11]]
            records.append({
                "index": int(rec[0]),
                "true": EventClass.from_name(rec[1]),
                "predicted": EventClass.from_name(rec[2]),
                "scores": scores,
            })
    return records


def run_evaluate(predictions_path: Path, out_path: Optional[Path] = None,
                 roc_path: Optional[Path] = None, labels_path: Optional[Path] = None,
                 model: Optional[str] = None, dataset: Optional[str] = None,
                 imputation: Optional[str] = None) -> dict:
    records = read_predictions(predictions_path)

    if labels_path is not None:
        import csv

        with Path(labels_path).open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            next(reader)
            truth = {int(rec[0]): rec[2] for rec in reader}
        for r in records:
            expected = truth.get(r["index"])
            if expected is not None and expected != r["true"].value:
                raise FormatMismatch(
                    f"sample {r['index']}: predictions say true class "
                    f"{r['true'].value!r}, labels say {expected!r}")

    cm = metrics.confusion((r["true"], r["predicted"]) for r in records)
    binary = metrics.binarize(cm)
    normal_pos = metrics.NORMAL_POS

    roc_doc = None
    roc_result = None
    try:
        roc_result = metrics.roc_auc(
            [(r["true"], 1.0 - r["scores"][normal_pos]) for r in records])
        roc_doc = {"auc": roc_result.auc, "points": len(roc_result.points)}
    except SingleClass as exc:
        roc_doc = {"auc": None, "note": str(exc)}

    document = {
        "model": model,
        "dataset": dataset,
        "imputation": imputation,
        "sample_count": len(records),
        "confusion": cm.to_dict(),
        "binary": binary.to_dict(),
        "rates": {k: float(v) for k, v in metrics.rates(binary).items()},
        "rates_pct": metrics.rates_percent(binary),
        "attack_score": "1 - normal_score",
        "roc": roc_doc,
    }
    if out_path is not None:
        Path(out_path).write_text(
            json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    if roc_path is not None and roc_result is not None:
        import csv

        with Path(roc_path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["threshold", "fpr", "tpr"])
            for threshold, fpr, tpr in roc_result.points:
                writer.writerow([threshold, fpr, tpr])
    return document


# --- argv plumbing ------------------------------------------------------------

def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a flat JSON object")
    return raw


def _setting(args, config: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sensorgrid",
        description="Multi-sensor telemetry to image tensors, plus evaluation tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic telemetry CSVs from a scenario")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out", required=True, help="output directory for the 7 CSVs")

    p = sub.add_parser("stats", help="profile a directory of per-sensor CSVs")
    p.add_argument("--input", required=True, help="directory with the 7 sensor CSVs")
    p.add_argument("--report", help="write the statistics JSON here")
    p.add_argument("--counts-csv", help="write per-timestamp reading counts here")

    p = sub.add_parser("prepare", help="combine, aggregate, segment and partition")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="row store directory")
    p.add_argument("--config", help="flat JSON config; flags override it")
    p.add_argument("--mode", choices=[pipeline.COMBINE_CONCATENATE, pipeline.COMBINE_GROUP])
    p.add_argument("--aggregate", action="store_true", default=None)
    p.add_argument("--no-aggregate", dest="aggregate", action="store_false")
    p.add_argument("--block-size", type=int, dest="block_size")
    p.add_argument("--train-fraction", type=float, dest="train_fraction")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("encode", help="impute, scale and window a store into a container")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True, help="dataset container directory")
    p.add_argument("--config", help="flat JSON config; flags override it")
    p.add_argument("--imputation", help="recipe token, e.g. miss3 or fill2|miss1")
    p.add_argument("--step", type=int)
    p.add_argument("--previews", type=int, default=0, help="write N sample PNGs")
    p.add_argument("--previews-dir")

    p = sub.add_parser("evaluate", help="score a predictions CSV")
    p.add_argument("--predictions", required=True)
    p.add_argument("--out", help="metrics JSON path")
    p.add_argument("--roc", help="ROC points CSV path")
    p.add_argument("--labels", help="container labels.csv to cross-check true classes")
    p.add_argument("--model")
    p.add_argument("--dataset")
    p.add_argument("--imputation")

    p = sub.add_parser("report", help="comparison table from metrics JSONs")
    p.add_argument("metrics", nargs="+", help="metrics JSON files")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--include-reference", action="store_true",
                   help="append published reference figures")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            summary = run_synth(Path(args.scenario), Path(args.out))
            print(json.dumps(summary, sort_keys=True))
        elif args.command == "stats":
            document = run_stats(
                Path(args.input),
                Path(args.report) if args.report else None,
                Path(args.counts_csv) if args.counts_csv else None)
            print(json.dumps(document, sort_keys=True))
        elif args.command == "prepare":
            config = _load_config(args.config)
            manifest = run_prepare(
                Path(args.input), Path(args.out),
                mode=_setting(args, config, "mode", pipeline.COMBINE_GROUP),
                aggregate=bool(_setting(args, config, "aggregate", False)),
                block_size=int(_setting(args, config, "block_size", 500)),
                train_fraction=float(_setting(args, config, "train_fraction", 0.7)),
                seed=int(_setting(args, config, "seed", 0)))
            print(json.dumps({"rows": manifest.row_count,
                              "chunks": len(manifest.chunks),
                              "train_chunks": len(manifest.partitions["train"]),
                              "test_chunks": len(manifest.partitions["test"]),
                              "effective_seed": manifest.effective_seed},
                             sort_keys=True))
        elif args.command == "encode":
            config = _load_config(args.config)
            manifest = run_encode(
                Path(args.store), Path(args.out),
                imputation=str(_setting(args, config, "imputation", "miss3")),
                step=int(_setting(args, config, "step", 20)),
                previews=args.previews,
                previews_dir=Path(args.previews_dir) if args.previews_dir else None)
            print(json.dumps({"samples": manifest.sample_total,
                              "sample_counts": manifest.sample_counts,
                              "short_chunks": manifest.short_chunks},
                             sort_keys=True))
        elif args.command == "evaluate":
            document = run_evaluate(
                Path(args.predictions),
                Path(args.out) if args.out else None,
                Path(args.roc) if args.roc else None,
                Path(args.labels) if args.labels else None,
                model=args.model, dataset=args.dataset, imputation=args.imputation)
            print(json.dumps({"binary": document["binary"],
                              "rates_pct": document["rates_pct"],
                              "auc": document["roc"].get("auc")},
                             sort_keys=True))
        elif args.command == "report":
            table = report.build_report(args.metrics, args.include_reference)
            if args.out:
                Path(args.out).write_text(table, encoding="utf-8")
            else:
                print(table, end="")
        else:  # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command!r}")
    except PartitionInfeasible as exc:
        _print_error(exc)
        return EXIT_INFEASIBLE
    except (SensorGridError, OSError, ValueError, json.JSONDecodeError) as exc:
        _print_error(exc)
        return EXIT_DATA
    return EXIT_OK


def _print_error(exc: Exception) -> None:
    sys.stderr.write(json.dumps(
        {"error": type(exc).__name__, "message": str(exc)}) + "\n")


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
