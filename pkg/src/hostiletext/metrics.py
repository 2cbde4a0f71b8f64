"""Accuracy, per-class precision/recall/F1, confusion matrices, and the
coarse-/fine-grained F1 summaries for the multi-label hostility task.

Conventions: rows of a confusion matrix are actual classes, columns are
predictions. Whenever a denominator is zero the score is defined as 0.
Weighted aggregates are means over per-class scores weighted by true-class
support. The coarse-grained F1 collapses task B label sets to hostile vs
non-hostile and takes the support-weighted F1 of that binary problem; the
fine-grained F1 is the support-weighted mean of the four hostile labels'
positive-class F1 scores.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corpus import (
    HOSTILE_LABELS,
    LabelSet,
    NON_HOSTILE,
    TASK_A_LABELS,
    TASK_B_LABELS,
    Task,
    validate_label_set,
)

_NEGATIVE_CLASS = "other"


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Square count matrix; ``counts[i][j]`` = actual class i, predicted j."""

    classes: tuple
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "counts", counts)
        k = len(self.classes)
        if counts.shape != (k, k):
            raise ValueError("counts must be square and match the class list")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        total = self.total
        return float(np.trace(self.counts)) / total if total else 0.0

    def support(self, label) -> int:
        return int(self.counts[self.classes.index(label)].sum())

    def to_dict(self) -> dict:
        return {"classes": list(self.classes), "counts": self.counts.tolist()}


@dataclass(frozen=True)
class ClassScore:
    """Precision/recall/F1 of one class plus its true support."""

    precision: float
    recall: float
    f1: float
    support: int

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
        }


def confusion_matrix(actual, predicted, classes) -> ConfusionMatrix:
    """Tally actual/predicted label pairs over an explicit class order."""
    actual = list(actual)
    predicted = list(predicted)
    if len(actual) != len(predicted):
        raise ValueError(
            f"length mismatch: {len(actual)} actual vs {len(predicted)} predicted"
        )
    classes = tuple(classes)
    position = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for a, p in zip(actual, predicted):
        if a not in position:
            raise ValueError(f"unknown actual label {a!r}")
        if p not in position:
            raise ValueError(f"unknown predicted label {p!r}")
        counts[position[a], position[p]] += 1
    return ConfusionMatrix(classes, counts)


def precision_recall_f1(cm: ConfusionMatrix, label) -> ClassScore:
    """Scores of one class read off a confusion matrix (0 when undefined)."""
    if label not in cm.classes:
        raise ValueError(f"unknown class {label!r}")
    i = cm.classes.index(label)
    tp = float(cm.counts[i, i])
    predicted = float(cm.counts[:, i].sum())
    support = int(cm.counts[i].sum())
    precision = tp / predicted if predicted else 0.0
    recall = tp / support if support else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassScore(precision, recall, f1, support)


def support_weighted_f1(f1_values, supports) -> float:
    """Support-weighted mean of F1 values; 0 when total support is 0."""
    f1_values = np.asarray(f1_values, dtype=np.float64)
    supports = np.asarray(supports, dtype=np.float64)
    if f1_values.shape != supports.shape:
        raise ValueError("f1 values and supports must align")
    total = supports.sum()
    return float((f1_values * supports).sum() / total) if total else 0.0


def weighted_f1(scores) -> float:
    """Support-weighted mean F1 over a collection of class scores."""
    scores = list(scores)
    if sum(s.support for s in scores) == 0:
        raise ValueError("zero total support")
    return support_weighted_f1([s.f1 for s in scores], [s.support for s in scores])


def _weighted(values, supports) -> float:
    supports = np.asarray(supports, dtype=np.float64)
    total = supports.sum()
    return float((np.asarray(values) * supports).sum() / total) if total else 0.0


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Full metric suite for one evaluation run.

    Task A fills ``confusion``; task B fills the per-label binary confusions,
    the coarse hostile/non-hostile confusion, and the two grained F1 scores.
    """

    task: Task
    accuracy: float
    per_class: dict[str, ClassScore]
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    confusion: ConfusionMatrix | None = None
    label_confusions: dict[str, ConfusionMatrix] | None = None
    coarse_confusion: ConfusionMatrix | None = None
    coarse_grained_f1: float | None = None
    fine_grained_f1: float | None = None

    def to_dict(self) -> dict:
        out = {
            "task": self.task.value,
            "accuracy": self.accuracy,
            "per_class": {label: s.to_dict() for label, s in self.per_class.items()},
            "weighted_precision": self.weighted_precision,
            "weighted_recall": self.weighted_recall,
            "weighted_f1": self.weighted_f1,
        }
        if self.task is Task.A:
            out["confusion"] = self.confusion.to_dict()
        else:
            out["confusion"] = {
                "per_label": {
                    label: cm.to_dict() for label, cm in self.label_confusions.items()
                },
                "coarse": self.coarse_confusion.to_dict(),
            }
            out["coarse_grained_f1"] = self.coarse_grained_f1
            out["fine_grained_f1"] = self.fine_grained_f1
        return out

    def to_json(self) -> str:
        # json renders floats with repr, i.e. full round-trip precision
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def evaluate_binary(actual, predicted) -> EvaluationReport:
    """Score task A predictions (lists of 'real'/'fake' tokens)."""
    actual = list(actual)
    predicted = list(predicted)
    if not actual:
        raise ValueError("nothing to evaluate")
    cm = confusion_matrix(actual, predicted, TASK_A_LABELS)
    per_class = {c: precision_recall_f1(cm, c) for c in TASK_A_LABELS}
    scores = list(per_class.values())
    supports = [s.support for s in scores]
    return EvaluationReport(
        task=Task.A,
        accuracy=cm.accuracy,
        per_class=per_class,
        weighted_precision=_weighted([s.precision for s in scores], supports),
        weighted_recall=_weighted([s.recall for s in scores], supports),
        weighted_f1=support_weighted_f1([s.f1 for s in scores], supports),
        confusion=cm,
    )


def _coerce_label_set(value) -> frozenset[str]:
    if isinstance(value, LabelSet):
        if value.task is not Task.B:
            raise ValueError("multi-label evaluation expects task B label sets")
        return value.labels
    return validate_label_set(Task.B, value)


def evaluate_multilabel(actual, predicted) -> EvaluationReport:
    """Score task B predictions (label sets per document).

    Accuracy is the exact-set-match rate. Per-label scores treat each label
    as its own binary presence problem; the weighted aggregates run over all
    five labels, the fine-grained F1 over the four hostile ones, and the
    coarse-grained F1 over the collapsed hostile/non-hostile problem.
    """
    actual = [_coerce_label_set(s) for s in actual]
    predicted = [_coerce_label_set(s) for s in predicted]
    if len(actual) != len(predicted):
        raise ValueError(
            f"length mismatch: {len(actual)} actual vs {len(predicted)} predicted"
        )
    if not actual:
        raise ValueError("nothing to evaluate")

    label_confusions = {}
    per_class = {}
    for label in TASK_B_LABELS:
        cm = confusion_matrix(
            [label if label in s else _NEGATIVE_CLASS for s in actual],
            [label if label in s else _NEGATIVE_CLASS for s in predicted],
            (label, _NEGATIVE_CLASS),
        )
        label_confusions[label] = cm
        per_class[label] = precision_recall_f1(cm, label)

    coarse_actual = [NON_HOSTILE if NON_HOSTILE in s else "hostile" for s in actual]
    coarse_predicted = [NON_HOSTILE if NON_HOSTILE in s else "hostile" for s in predicted]
    coarse_cm = confusion_matrix(coarse_actual, coarse_predicted, (NON_HOSTILE, "hostile"))
    coarse_scores = [precision_recall_f1(coarse_cm, c) for c in coarse_cm.classes]
    coarse = support_weighted_f1(
        [s.f1 for s in coarse_scores], [s.support for s in coarse_scores]
    )
    fine = support_weighted_f1(
        [per_class[l].f1 for l in HOSTILE_LABELS],
        [per_class[l].support for l in HOSTILE_LABELS],
    )

    scores = [per_class[l] for l in TASK_B_LABELS]
    supports = [s.support for s in scores]
    exact = sum(a == p for a, p in zip(actual, predicted))
    return EvaluationReport(
        task=Task.B,
        accuracy=exact / len(actual),
        per_class=per_class,
        weighted_precision=_weighted([s.precision for s in scores], supports),
        weighted_recall=_weighted([s.recall for s in scores], supports),
        weighted_f1=support_weighted_f1([s.f1 for s in scores], supports),
        label_confusions=label_confusions,
        coarse_confusion=coarse_cm,
        coarse_grained_f1=coarse,
        fine_grained_f1=fine,
    )
