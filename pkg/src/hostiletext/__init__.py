"""Classical machine-learning toolkit for two social-media moderation tasks:
binary fake-news detection and multi-label hostile-post detection.

The pieces compose freely: TSV corpus handling (:mod:`corpus`), text
normalization and n-grams (:mod:`textprep`), tf-idf features
(:mod:`features`), skip-gram word vectors (:mod:`embeddings`), a linear SVM
solver (:mod:`svm`), the label powerset transformation (:mod:`multilabel`),
the evaluation suite (:mod:`metrics`), ready-made pipelines
(:mod:`pipeline`), model persistence (:mod:`modelfile`), and a CLI
(:mod:`cli`).
"""

from .corpus import (
    Dataset,
    DatasetError,
    Document,
    LabelSet,
    Task,
    class_support,
    load_dataset,
    parse_dataset,
    serialize_dataset,
)
from .embeddings import (
    EmbeddingConfig,
    EmbeddingMatrix,
    doc_vector,
    sgns_pair_loss,
    train_sgns,
)
from .features import SparseVector, Vocabulary, fit_vocabulary, tfidf_transform
from .metrics import (
    ClassScore,
    ConfusionMatrix,
    EvaluationReport,
    confusion_matrix,
    evaluate_binary,
    evaluate_multilabel,
    precision_recall_f1,
    support_weighted_f1,
    weighted_f1,
)
from .modelfile import load_model, save_model
from .multilabel import (
    ComboTable,
    LabelPowersetModel,
    combo_decode,
    combo_encode,
    fit_label_powerset,
    predict_labels,
)
from .pipeline import (
    PipelineSpec,
    PipelineSpecError,
    TrainedPipeline,
    evaluate_pipeline,
    train_pipeline,
)
from .svm import (
    LinearModel,
    MultiClassModel,
    TrainOptions,
    decision_score,
    predict_binary,
    predict_class,
    train_linear_svm,
    train_one_vs_rest,
)
from .textprep import NgramRange, ngrams, normalize

__version__ = "0.1.0"
