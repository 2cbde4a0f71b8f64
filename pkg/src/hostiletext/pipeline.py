"""End-to-end training and prediction pipelines.

Three model kinds are supported:

* ``svm-tfidf`` (task A): n-gram tf-idf vectors into a binary linear SVM.
* ``svm-w2v`` (task A): skip-gram word vectors mean-pooled per document,
  then a binary linear SVM.
* ``lpsvm`` (task B): label powerset over tf-idf n-grams with a one-vs-rest
  linear SVM.

``PipelineSpec.seed`` seeds every stochastic stage (solver sweep order and
embedding training), overriding the seeds inside the nested option objects,
so one value pins the whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .corpus import Dataset, Document, LabelSet, Task
from .embeddings import EmbeddingConfig, EmbeddingMatrix, doc_vector, train_sgns
from .features import Vocabulary, fit_vocabulary, tfidf_transform
from .metrics import EvaluationReport, evaluate_binary, evaluate_multilabel
from .multilabel import LabelPowersetModel, fit_label_powerset, predict_labels
from .svm import LinearModel, TrainOptions, decision_score, train_linear_svm
from .textprep import NgramRange, normalize

MODEL_SVM_TFIDF = "svm-tfidf"
MODEL_SVM_W2V = "svm-w2v"
MODEL_LPSVM = "lpsvm"
MODEL_KINDS = (MODEL_SVM_TFIDF, MODEL_SVM_W2V, MODEL_LPSVM)

# Task A sign convention: the positive SVM class is 'fake'.
POSITIVE_LABEL = "fake"
NEGATIVE_LABEL = "real"


class PipelineSpecError(ValueError):
    """Invalid task/model/hyperparameter combination."""


@dataclass(frozen=True)
class PipelineSpec:
    """Everything needed to train one model reproducibly."""

    task: Task
    model: str
    ngram_range: NgramRange = NgramRange(1, 2)
    min_df: int = 1
    options: TrainOptions = TrainOptions()
    embedding: EmbeddingConfig | None = None
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODEL_KINDS:
            raise PipelineSpecError(
                f"unknown model kind {self.model!r}; expected one of {MODEL_KINDS}"
            )
        if self.model == MODEL_LPSVM and self.task is not Task.B:
            raise PipelineSpecError("lpsvm is the task B model")
        if self.model in (MODEL_SVM_TFIDF, MODEL_SVM_W2V) and self.task is not Task.A:
            raise PipelineSpecError(f"{self.model} is a task A model")
        if self.min_df < 1:
            raise PipelineSpecError("min_df must be >= 1")
        if self.model == MODEL_SVM_W2V and self.embedding is None:
            object.__setattr__(self, "embedding", EmbeddingConfig())

    def effective_options(self) -> TrainOptions:
        return replace(self.options, seed=self.seed)

    def effective_embedding(self) -> EmbeddingConfig:
        return replace(self.embedding, seed=self.seed)


@dataclass(eq=False)
class TrainedPipeline:
    """A fitted pipeline; exactly the fields needed by its model kind."""

    spec: PipelineSpec
    vocabulary: Vocabulary | None = None
    embeddings: EmbeddingMatrix | None = None
    binary: LinearModel | None = None
    powerset: LabelPowersetModel | None = None

    def featurize(self, text: str):
        """Document feature vector for the task A kinds."""
        tokens = normalize(text)
        if self.spec.model == MODEL_SVM_TFIDF:
            return tfidf_transform(self.vocabulary, tokens)
        if self.spec.model == MODEL_SVM_W2V:
            return doc_vector(self.embeddings, tokens)
        raise ValueError("featurize applies to the task A pipelines")

    def decision_value(self, text: str) -> float:
        return decision_score(self.binary, self.featurize(text))

    def predict(self, doc: Document | str):
        """'real'/'fake' for task A, a LabelSet for task B."""
        text = doc.text if isinstance(doc, Document) else doc
        if self.spec.model == MODEL_LPSVM:
            return predict_labels(self.powerset, text)
        return POSITIVE_LABEL if self.decision_value(text) >= 0.0 else NEGATIVE_LABEL

    @property
    def feature_count(self) -> int:
        """Size of the fitted vocabulary (terms or embedded words)."""
        if self.spec.model == MODEL_SVM_W2V:
            return len(self.embeddings)
        if self.spec.model == MODEL_SVM_TFIDF:
            return len(self.vocabulary)
        return len(self.powerset.vocabulary)


def _require_labeled(dataset: Dataset):
    for doc in dataset:
        if doc.labels is None:
            raise ValueError(f"training document {doc.id!r} has no labels")


def _binary_targets(dataset: Dataset) -> list[int]:
    return [1 if POSITIVE_LABEL in doc.labels else -1 for doc in dataset]


def train_pipeline(dataset: Dataset, spec: PipelineSpec) -> TrainedPipeline:
    """Train the pipeline described by ``spec`` on a labeled dataset."""
    if dataset.task is not spec.task:
        raise PipelineSpecError(
            f"dataset is task {dataset.task.value.upper()}, spec wants task "
            f"{spec.task.value.upper()}"
        )
    _require_labeled(dataset)

    if spec.model == MODEL_LPSVM:
        model = fit_label_powerset(
            dataset,
            ngram_range=spec.ngram_range,
            min_df=spec.min_df,
            options=spec.effective_options(),
        )
        return TrainedPipeline(spec=spec, powerset=model)

    token_lists = [normalize(doc.text) for doc in dataset]
    y = _binary_targets(dataset)
    if spec.model == MODEL_SVM_TFIDF:
        vocabulary = fit_vocabulary(token_lists, spec.ngram_range, spec.min_df)
        X = [tfidf_transform(vocabulary, tokens) for tokens in token_lists]
        binary = train_linear_svm(X, y, spec.effective_options())
        return TrainedPipeline(spec=spec, vocabulary=vocabulary, binary=binary)

    embeddings = train_sgns(token_lists, spec.effective_embedding())
    X = np.array([doc_vector(embeddings, tokens) for tokens in token_lists])
    binary = train_linear_svm(X, y, spec.effective_options())
    return TrainedPipeline(spec=spec, embeddings=embeddings, binary=binary)


def evaluate_pipeline(trained: TrainedPipeline, dataset: Dataset) -> EvaluationReport:
    """Predict every document and score against the dataset's labels."""
    if dataset.task is not trained.spec.task:
        raise PipelineSpecError(
            f"dataset is task {dataset.task.value.upper()}, model is task "
            f"{trained.spec.task.value.upper()}"
        )
    actual = []
    for doc in dataset:
        if doc.labels is None:
            raise ValueError(f"document {doc.id!r} has no labels to evaluate against")
        actual.append(doc.labels)
    predictions = [trained.predict(doc) for doc in dataset]
    if trained.spec.task is Task.A:
        return evaluate_binary([next(iter(s)) for s in actual], predictions)
    return evaluate_multilabel(actual, predictions)


def predict_dataset(trained: TrainedPipeline, dataset: Dataset) -> list[tuple[str, str]]:
    """(id, serialized labels) rows for every document, in input order."""
    rows = []
    for doc in dataset:
        prediction = trained.predict(doc)
        if isinstance(prediction, LabelSet):
            rows.append((doc.id, ",".join(prediction.ordered())))
        else:
            rows.append((doc.id, prediction))
    return rows
