"""Label powerset transformation for the multi-label hostility task.

Each distinct label combination observed in training becomes one atomic
class of a multi-class problem; predictions map back through the same table,
so the model can only ever emit combinations it has seen. Combinations are
encoded as bitmasks over the fixed label order defame, fake, hate,
offensive, non-hostile (bit 0 to bit 4).
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Dataset, Document, LabelSet, Task, TASK_B_LABELS, validate_label_set
from .features import Vocabulary, fit_vocabulary, tfidf_transform
from .svm import MultiClassModel, TrainOptions, class_scores, predict_class, train_one_vs_rest
from .textprep import NgramRange, normalize

_LABEL_BIT = {label: 1 << i for i, label in enumerate(TASK_B_LABELS)}
_ALL_BITS = (1 << len(TASK_B_LABELS)) - 1


class UnknownComboError(KeyError):
    """A label combination that never occurred in training."""


def combo_encode(labels) -> int:
    """Canonical bitmask of a valid task B label set (order independent)."""
    if isinstance(labels, LabelSet):
        if labels.task is not Task.B:
            raise ValueError("label powerset encoding applies to task B label sets")
        tokens = labels.labels
    else:
        tokens = validate_label_set(Task.B, labels)
    return sum(_LABEL_BIT[label] for label in tokens)


def mask_labels(mask: int) -> frozenset[str]:
    """Label tokens whose bits are set in ``mask``."""
    if not 0 <= mask <= _ALL_BITS:
        raise ValueError(f"mask {mask} outside the {len(TASK_B_LABELS)}-bit label space")
    return frozenset(l for l, bit in _LABEL_BIT.items() if mask & bit)


@dataclass(frozen=True)
class ComboTable:
    """Bijection between observed combination masks and dense atomic ids."""

    masks: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.masks)) != len(self.masks):
            raise ValueError("combination masks must be unique")
        for mask in self.masks:
            validate_label_set(Task.B, mask_labels(mask))

    @classmethod
    def from_label_sets(cls, label_sets) -> "ComboTable":
        """Assign atomic ids 0..K-1 in first-seen order."""
        return cls(tuple(dict.fromkeys(combo_encode(s) for s in label_sets)))

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, mask: int) -> bool:
        return mask in self.masks

    def id_of(self, mask: int) -> int:
        try:
            return self.masks.index(mask)
        except ValueError:
            raise UnknownComboError(
                f"label combination {sorted(mask_labels(mask))} was not seen in training"
            ) from None

    def label_sets(self) -> tuple[LabelSet, ...]:
        return tuple(LabelSet(Task.B, mask_labels(m)) for m in self.masks)


def combo_decode(mask: int, table: ComboTable) -> LabelSet:
    """Inverse of :func:`combo_encode`, restricted to masks in the table."""
    if mask not in table:
        raise UnknownComboError(
            f"label combination {sorted(mask_labels(mask))} was not seen in training"
        )
    return LabelSet(Task.B, mask_labels(mask))


@dataclass(eq=False)
class LabelPowersetModel:
    """tf-idf features + one-vs-rest linear SVM over atomic combination ids."""

    combos: ComboTable
    classifier: MultiClassModel
    vocabulary: Vocabulary

    def __post_init__(self):
        if len(self.classifier.classes) != len(self.combos):
            raise ValueError("classifier classes and combination table disagree")
        if self.classifier.dim != len(self.vocabulary):
            raise ValueError("classifier dimension does not match the vocabulary")


def fit_label_powerset(
    dataset: Dataset,
    *,
    ngram_range: NgramRange = NgramRange(1, 3),
    min_df: int = 5,
    options: TrainOptions = TrainOptions(C=1.7),
) -> LabelPowersetModel:
    """Train the label powerset pipeline on a labeled task B dataset."""
    if dataset.task is not Task.B:
        raise ValueError("label powerset training needs a task B dataset")
    if not len(dataset):
        raise ValueError("training dataset is empty")
    label_sets = []
    for doc in dataset:
        if doc.labels is None:
            raise ValueError(f"document {doc.id!r} has no labels")
        label_sets.append(doc.labels)
    table = ComboTable.from_label_sets(label_sets)
    if len(table) < 2:
        raise ValueError("need at least two distinct label combinations to train")

    token_lists = [normalize(doc.text) for doc in dataset]
    vocabulary = fit_vocabulary(token_lists, ngram_range, min_df)
    X = [tfidf_transform(vocabulary, tokens) for tokens in token_lists]
    y = [table.id_of(combo_encode(s)) for s in label_sets]
    classifier = train_one_vs_rest(X, y, options)
    return LabelPowersetModel(combos=table, classifier=classifier, vocabulary=vocabulary)


def predict_labels(model: LabelPowersetModel, doc: Document | str) -> LabelSet:
    """Predict the label set of a document; always one of the training
    combinations (fully out-of-vocabulary text still gets the argmax class)."""
    text = doc.text if isinstance(doc, Document) else doc
    features = tfidf_transform(model.vocabulary, normalize(text))
    atomic_id = predict_class(model.classifier, features)
    return combo_decode(model.combos.masks[atomic_id], model.combos)


def powerset_scores(model: LabelPowersetModel, doc: Document | str):
    """Per-combination decision scores (aligned with ``model.combos.masks``)."""
    text = doc.text if isinstance(doc, Document) else doc
    features = tfidf_transform(model.vocabulary, normalize(text))
    return class_scores(model.classifier, features)
