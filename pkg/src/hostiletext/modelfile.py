"""Versioned on-disk model format.

A model file is a UTF-8 JSON document: human-readable metadata plus float
arrays packed as base85-encoded little-endian float64 bytes, which round-trip
bit for bit. The payload carries a SHA-256 checksum so any corruption fails
loudly at load time instead of silently changing predictions. Saving is
canonical (sorted keys), so identical models produce identical bytes.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .corpus import Task
from .embeddings import EmbeddingConfig, EmbeddingMatrix
from .features import Vocabulary
from .multilabel import ComboTable, LabelPowersetModel, combo_encode
from .pipeline import (
    MODEL_LPSVM,
    MODEL_SVM_TFIDF,
    MODEL_SVM_W2V,
    PipelineSpec,
    TrainedPipeline,
)
from .svm import LinearModel, MultiClassModel, TrainOptions
from .textprep import NgramRange

FORMAT_VERSION = 1


class ModelFileError(ValueError):
    """Base class for model file problems."""


class ModelVersionError(ModelFileError):
    """The file declares a format version this code does not speak."""


class ModelTruncatedError(ModelFileError):
    """The file is cut short or is not a JSON model file at all."""


class ModelCorruptError(ModelFileError):
    """Structurally broken or checksum-failing content."""


class ModelDimensionError(ModelFileError):
    """Internally inconsistent dimensions between sections."""


def _encode_array(arr: np.ndarray) -> dict:
    data = np.ascontiguousarray(arr, dtype="<f8").tobytes()
    return {
        "shape": list(arr.shape),
        "data": base64.b85encode(data).decode("ascii"),
    }


def _decode_array(obj) -> np.ndarray:
    try:
        shape = tuple(int(s) for s in obj["shape"])
        raw = base64.b85decode(obj["data"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelCorruptError(f"bad array section: {exc}") from exc
    expected = int(np.prod(shape)) * 8 if shape else 8
    if len(raw) != expected:
        raise ModelCorruptError(
            f"array payload is {len(raw)} bytes, expected {expected}"
        )
    return np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(shape)


def _canonical_payload_bytes(payload: dict) -> bytes:
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def _spec_to_dict(spec: PipelineSpec) -> dict:
    return {
        "task": spec.task.value,
        "model": spec.model,
        "ngram": [spec.ngram_range.lo, spec.ngram_range.hi],
        "min_df": spec.min_df,
        "options": asdict(spec.options),
        "embedding": asdict(spec.embedding) if spec.embedding else None,
        "seed": spec.seed,
    }


def _spec_from_dict(obj: dict) -> PipelineSpec:
    embedding = obj.get("embedding")
    return PipelineSpec(
        task=Task(obj["task"]),
        model=obj["model"],
        ngram_range=NgramRange(*obj["ngram"]),
        min_df=obj["min_df"],
        options=TrainOptions(**obj["options"]),
        embedding=EmbeddingConfig(**embedding) if embedding else None,
        seed=obj["seed"],
    )


def _vocab_to_dict(vocab: Vocabulary) -> dict:
    return {
        "terms": list(vocab.terms),
        "df": vocab.df.tolist(),
        "idf": _encode_array(vocab.idf),
        "n_docs": vocab.n_docs,
        "ngram": [vocab.ngram_range.lo, vocab.ngram_range.hi],
        "min_df": vocab.min_df,
    }


def _vocab_from_dict(obj: dict) -> Vocabulary:
    terms = tuple(obj["terms"])
    df = np.asarray(obj["df"], dtype=np.int64)
    idf = _decode_array(obj["idf"])
    if not (len(terms) == df.size == idf.size):
        raise ModelDimensionError("vocabulary terms, df, and idf sizes disagree")
    return Vocabulary(
        terms=terms,
        index={t: i for i, t in enumerate(terms)},
        df=df,
        idf=idf,
        n_docs=int(obj["n_docs"]),
        ngram_range=NgramRange(*obj["ngram"]),
        min_df=int(obj["min_df"]),
    )


def _linear_to_dict(model: LinearModel) -> dict:
    return {
        "weights": _encode_array(model.weights),
        "bias": model.bias,
        "dim": model.dim,
        "C": model.C,
    }


def _linear_from_dict(obj: dict, expected_dim: int | None = None) -> LinearModel:
    weights = _decode_array(obj["weights"])
    dim = int(obj["dim"])
    if weights.shape != (dim,):
        raise ModelDimensionError(
            f"weight vector has shape {weights.shape}, declared dim {dim}"
        )
    if expected_dim is not None and dim != expected_dim:
        raise ModelDimensionError(
            f"model dim {dim} does not match feature space {expected_dim}"
        )
    return LinearModel(
        weights=weights, bias=float(obj["bias"]), dim=dim, C=float(obj["C"])
    )


def _embeddings_to_dict(emb: EmbeddingMatrix) -> dict:
    return {
        "terms": list(emb.terms),
        "input_vectors": _encode_array(emb.input_vectors),
        "output_vectors": _encode_array(emb.output_vectors),
    }


def _embeddings_from_dict(obj: dict) -> EmbeddingMatrix:
    terms = tuple(obj["terms"])
    input_vectors = _decode_array(obj["input_vectors"])
    output_vectors = _decode_array(obj["output_vectors"])
    if input_vectors.ndim != 2 or input_vectors.shape[0] != len(terms):
        raise ModelDimensionError("embedding matrix rows do not match the vocabulary")
    if input_vectors.shape != output_vectors.shape:
        raise ModelDimensionError("input and output embedding shapes disagree")
    return EmbeddingMatrix(
        terms=terms,
        index={t: i for i, t in enumerate(terms)},
        input_vectors=input_vectors,
        output_vectors=output_vectors,
    )


def _payload_from_trained(trained: TrainedPipeline) -> dict:
    payload: dict = {"spec": _spec_to_dict(trained.spec)}
    kind = trained.spec.model
    if kind == MODEL_SVM_TFIDF:
        payload["vocabulary"] = _vocab_to_dict(trained.vocabulary)
        payload["binary_model"] = _linear_to_dict(trained.binary)
    elif kind == MODEL_SVM_W2V:
        payload["embeddings"] = _embeddings_to_dict(trained.embeddings)
        payload["binary_model"] = _linear_to_dict(trained.binary)
    else:
        ps = trained.powerset
        payload["vocabulary"] = _vocab_to_dict(ps.vocabulary)
        payload["powerset"] = {
            # explicit label-name lists, index = atomic class id
            "combos": [list(s.ordered()) for s in ps.combos.label_sets()],
            "classes": list(ps.classifier.classes),
            "models": [_linear_to_dict(m) for m in ps.classifier.models],
        }
    return payload


def _trained_from_payload(payload: dict) -> TrainedPipeline:
    spec = _spec_from_dict(payload["spec"])
    if spec.model == MODEL_SVM_TFIDF:
        vocabulary = _vocab_from_dict(payload["vocabulary"])
        binary = _linear_from_dict(payload["binary_model"], expected_dim=len(vocabulary))
        return TrainedPipeline(spec=spec, vocabulary=vocabulary, binary=binary)
    if spec.model == MODEL_SVM_W2V:
        embeddings = _embeddings_from_dict(payload["embeddings"])
        binary = _linear_from_dict(payload["binary_model"], expected_dim=embeddings.dim)
        return TrainedPipeline(spec=spec, embeddings=embeddings, binary=binary)

    vocabulary = _vocab_from_dict(payload["vocabulary"])
    section = payload["powerset"]
    table = ComboTable(tuple(combo_encode(labels) for labels in section["combos"]))
    classes = tuple(int(c) for c in section["classes"])
    models = tuple(
        _linear_from_dict(m, expected_dim=len(vocabulary)) for m in section["models"]
    )
    if not (len(table) == len(classes) == len(models)):
        raise ModelDimensionError("powerset combos, classes, and models disagree")
    powerset = LabelPowersetModel(
        combos=table,
        classifier=MultiClassModel(classes=classes, models=models),
        vocabulary=vocabulary,
    )
    return TrainedPipeline(spec=spec, powerset=powerset)


def save_model(path, trained: TrainedPipeline) -> None:
    """Write a trained pipeline; identical models yield identical bytes."""
    payload = _payload_from_trained(trained)
    document = {
        "format_version": FORMAT_VERSION,
        "payload_sha256": hashlib.sha256(_canonical_payload_bytes(payload)).hexdigest(),
        "payload": payload,
    }
    text = json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    Path(path).write_bytes(text.encode("utf-8"))


def load_model(path) -> TrainedPipeline:
    """Read and validate a model file, failing with a precise error kind."""
    raw = Path(path).read_bytes()
    try:
        document = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelTruncatedError(f"truncated or non-JSON model file: {exc}") from exc
    if not isinstance(document, dict) or "format_version" not in document:
        raise ModelCorruptError("missing format_version")
    version = document["format_version"]
    if version != FORMAT_VERSION:
        raise ModelVersionError(
            f"model format version {version!r} is not supported (expected {FORMAT_VERSION})"
        )
    try:
        payload = document["payload"]
        declared = document["payload_sha256"]
    except KeyError as exc:
        raise ModelCorruptError(f"missing section {exc}") from exc
    actual = hashlib.sha256(_canonical_payload_bytes(payload)).hexdigest()
    if actual != declared:
        raise ModelCorruptError("payload checksum mismatch; file is corrupt")
    try:
        return _trained_from_payload(payload)
    except ModelFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelCorruptError(f"malformed payload: {exc}") from exc
