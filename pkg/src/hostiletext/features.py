"""N-gram vocabulary fitting and L2-normalized tf-idf document vectors.

The weighting is raw term count times a smoothed inverse document frequency,
idf(t) = ln((1 + N) / (1 + df(t))) + 1, followed by L2 normalization of the
document vector. The smoothing keeps idf strictly positive and defined even
for terms present in every document.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .textprep import NgramRange, ngrams


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Sparse vector with strictly increasing indices and non-zero values."""

    dim: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)
        if indices.shape != values.shape or indices.ndim != 1:
            raise ValueError("indices and values must be 1-D and the same length")
        if indices.size:
            if (np.diff(indices) <= 0).any():
                raise ValueError("indices must be strictly increasing")
            if indices[0] < 0 or indices[-1] >= self.dim:
                raise ValueError("index out of range")
            if not np.isfinite(values).all() or (values == 0).any():
                raise ValueError("values must be finite and non-zero")

    def __len__(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        dense[self.indices] = self.values
        return dense

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True, eq=False)
class Vocabulary:
    """Fitted term->index map with document-frequency statistics.

    Indices are dense, assigned in first-seen corpus order after pruning.
    """

    terms: tuple[str, ...]
    index: dict[str, int]
    df: np.ndarray
    idf: np.ndarray
    n_docs: int
    ngram_range: NgramRange
    min_df: int

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


def fit_vocabulary(token_lists, ngram_range: NgramRange, min_df: int = 1) -> Vocabulary:
    """Count document frequencies over the corpus and keep terms with
    df >= min_df, indexed densely in first-seen order."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df_counts: Counter[str] = Counter()
    n_docs = 0
    for tokens in token_lists:
        n_docs += 1
        # dict.fromkeys dedupes while preserving first-occurrence order, so
        # Counter insertion order equals first-seen corpus order.
        for term in dict.fromkeys(ngrams(tokens, ngram_range)):
            df_counts[term] += 1
    if n_docs == 0:
        raise ValueError("cannot fit a vocabulary on an empty corpus")
    terms = tuple(t for t, c in df_counts.items() if c >= min_df)
    df = np.array([df_counts[t] for t in terms], dtype=np.int64)
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
    return Vocabulary(
        terms=terms,
        index={t: i for i, t in enumerate(terms)},
        df=df,
        idf=idf,
        n_docs=n_docs,
        ngram_range=ngram_range,
        min_df=min_df,
    )


def tfidf_transform(vocab: Vocabulary, tokens) -> SparseVector:
    """Map one token list to a unit-length tf-idf vector over the vocabulary.

    Out-of-vocabulary terms are ignored; a document with no known terms maps
    to the zero vector (no entries).
    """
    counts = Counter(
        term for term in ngrams(tokens, vocab.ngram_range) if term in vocab.index
    )
    if not counts:
        return SparseVector(len(vocab), np.empty(0, np.int64), np.empty(0, np.float64))
    pairs = sorted((vocab.index[t], c) for t, c in counts.items())
    indices = np.array([i for i, _ in pairs], dtype=np.int64)
    values = np.array([c for _, c in pairs], dtype=np.float64) * vocab.idf[indices]
    values /= np.linalg.norm(values)
    return SparseVector(len(vocab), indices, values)
