"""Command-line front end: train, evaluate, and predict over TSV files.

Exit codes: 0 success; 2 input parsing/validation failure (data or model
file, message names the offending line where known); 3 invalid pipeline
specification; 4 task mismatch between a model and an evaluation file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import DatasetError, Task, load_dataset, parse_dataset
from .embeddings import EmbeddingConfig
from .modelfile import ModelFileError, load_model, save_model
from .pipeline import (
    MODEL_KINDS,
    MODEL_LPSVM,
    MODEL_SVM_TFIDF,
    MODEL_SVM_W2V,
    PipelineSpec,
    PipelineSpecError,
    evaluate_pipeline,
    predict_dataset,
    train_pipeline,
)
from .svm import TrainOptions
from .textprep import NgramRange

# (ngram lo, ngram hi, min_df, C) applied when the flags are omitted
_KIND_DEFAULTS = {
    MODEL_SVM_TFIDF: (1, 2, 1, 1.0),
    MODEL_SVM_W2V: (1, 1, 1, 1.0),
    MODEL_LPSVM: (1, 3, 5, 1.7),
}


class TaskMismatchError(ValueError):
    """The evaluation file belongs to the other task."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hostiletext",
        description="Train, evaluate, and run fake-news / hostile-post classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fit a model on a labeled TSV file")
    train.add_argument("--task", choices=["a", "b"], required=True)
    train.add_argument("--model", choices=list(MODEL_KINDS), required=True)
    train.add_argument("--input", required=True, help="labeled training TSV")
    train.add_argument("--out", required=True, help="model file to write")
    train.add_argument("--ngram", nargs=2, type=int, metavar=("LO", "HI"))
    train.add_argument("--min-df", type=int, default=None)
    train.add_argument("--c", type=float, default=None, help="SVM cost parameter")
    train.add_argument("--tol", type=float, default=1e-4)
    train.add_argument("--max-iter", type=int, default=1000)
    train.add_argument("--dim", type=int, default=150, help="embedding dimension")
    train.add_argument("--window", type=int, default=5)
    train.add_argument("--negatives", type=int, default=5)
    train.add_argument("--epochs", type=int, default=10)
    train.add_argument("--lr", type=float, default=0.025)
    train.add_argument("--min-count", type=int, default=1)
    train.add_argument("--seed", type=int, default=0)
    train.set_defaults(func=cmd_train)

    evaluate = sub.add_parser("eval", help="score a model against a labeled TSV file")
    evaluate.add_argument("model", help="model file written by train")
    evaluate.add_argument("--input", required=True, help="labeled test TSV")
    evaluate.add_argument("--out", required=True, help="JSON report to write")
    evaluate.set_defaults(func=cmd_eval)

    predict = sub.add_parser("predict", help="label a TSV file with a trained model")
    predict.add_argument("model", help="model file written by train")
    predict.add_argument("--input", required=True, help="input TSV (labels ignored)")
    predict.add_argument("--out", required=True, help="TSV of id/labels to write")
    predict.set_defaults(func=cmd_predict)
    return parser


def _spec_from_args(args) -> PipelineSpec:
    lo, hi, min_df, c = _KIND_DEFAULTS[args.model]
    if args.ngram is not None:
        lo, hi = args.ngram
    if args.min_df is not None:
        min_df = args.min_df
    if args.c is not None:
        c = args.c
    try:
        ngram_range = NgramRange(lo, hi)
        options = TrainOptions(C=c, tol=args.tol, max_iter=args.max_iter, seed=args.seed)
        embedding = None
        if args.model == MODEL_SVM_W2V:
            embedding = EmbeddingConfig(
                dim=args.dim,
                window=args.window,
                negatives=args.negatives,
                epochs=args.epochs,
                learning_rate=args.lr,
                min_count=args.min_count,
                seed=args.seed,
            )
        return PipelineSpec(
            task=Task(args.task),
            model=args.model,
            ngram_range=ngram_range,
            min_df=min_df,
            options=options,
            embedding=embedding,
            seed=args.seed,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, PipelineSpecError):
            raise
        raise PipelineSpecError(str(exc)) from exc


def cmd_train(args) -> int:
    spec = _spec_from_args(args)
    dataset = load_dataset(args.input, spec.task, labeled=True)
    trained = train_pipeline(dataset, spec)
    save_model(args.out, trained)
    report = evaluate_pipeline(trained, dataset)
    print(f"vocabulary size: {trained.feature_count}")
    print(f"training accuracy: {report.accuracy:.6f}")
    return 0


def _load_eval_dataset(path, task: Task):
    data = Path(path).read_bytes()
    try:
        return parse_dataset(data, task, labeled=True)
    except DatasetError as err:
        other = Task.B if task is Task.A else Task.A
        try:
            parse_dataset(data, other, labeled=True)
        except DatasetError:
            raise err from None
        raise TaskMismatchError(
            f"{path} holds task {other.value.upper()} labels, but the model is "
            f"task {task.value.upper()}"
        ) from None


def cmd_eval(args) -> int:
    trained = load_model(args.model)
    dataset = _load_eval_dataset(args.input, trained.spec.task)
    report = evaluate_pipeline(trained, dataset)
    Path(args.out).write_bytes(report.to_json().encode("utf-8"))
    summary = f"accuracy={report.accuracy:.6f} weighted_f1={report.weighted_f1:.6f}"
    if report.coarse_grained_f1 is not None:
        summary += (
            f" coarse_grained_f1={report.coarse_grained_f1:.6f}"
            f" fine_grained_f1={report.fine_grained_f1:.6f}"
        )
    print(summary)
    return 0


def cmd_predict(args) -> int:
    trained = load_model(args.model)
    dataset = load_dataset(args.input, trained.spec.task, labeled=False)
    rows = predict_dataset(trained, dataset)
    lines = ["id\tlabels"]
    lines.extend(f"{doc_id}\t{labels}" for doc_id, labels in rows)
    Path(args.out).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    print(f"predicted {len(rows)} documents")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineSpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except TaskMismatchError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except (DatasetError, ModelFileError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
