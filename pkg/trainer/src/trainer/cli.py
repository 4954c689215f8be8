"""Command line for training and prediction over dataset containers."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from trainer.errors import TrainerError
from trainer.models import MODEL_NAMES
from trainer.predict import predict
from trainer.training import TrainConfig, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sensorgrid-trainer",
        description="Train CNNs on dataset containers and emit prediction CSVs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model on a container's train partition")
    p.add_argument("--container", required=True)
    p.add_argument("--out", required=True, help="checkpoint path (.pt)")
    p.add_argument("--log", help="training log JSON path")
    p.add_argument("--model", choices=MODEL_NAMES, default="tiny-cnn")
    p.add_argument("--learning-rate", type=float, default=1e-2)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--optimizer", choices=("adam", "sgd"), default="adam")
    p.add_argument("--pretrained", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("predict", help="score one partition into a predictions CSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--container", required=True)
    p.add_argument("--partition", choices=("train", "test"), default="test")
    p.add_argument("--out", required=True, help="predictions CSV path")
    p.add_argument("--batch-size", type=int, default=64)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = TrainConfig(
                model=args.model,
                learning_rate=args.learning_rate,
                epochs=args.epochs,
                pretrained=args.pretrained,
                batch_size=args.batch_size,
                optimizer=args.optimizer,
            )
            log = train(Path(args.container), config, args.seed,
                        Path(args.out), Path(args.log) if args.log else None)
            print(json.dumps({"train_samples": log["train_samples"],
                              "final_loss": (log["epochs"][-1]["loss"]
                                             if log["epochs"] else None)},
                             sort_keys=True))
        elif args.command == "predict":
            rows = predict(Path(args.checkpoint), Path(args.container),
                           args.partition, Path(args.out), args.batch_size)
            print(json.dumps({"rows": rows, "partition": args.partition},
                             sort_keys=True))
    except (TrainerError, OSError, ValueError) as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 3
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
