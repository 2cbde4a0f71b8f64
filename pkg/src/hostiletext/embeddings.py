"""Skip-gram word vectors trained with negative sampling.

For a (center, context) pair with k sampled noise words the objective is

    loss = -log s(u.v_ctx) - sum_j log s(-u.v_neg_j)

where s is the logistic sigmoid, u the center word's input vector, and v_*
output vectors. Training runs plain SGD over every in-window pair, drawing
negatives from the unigram distribution raised to the 3/4 power, with the
learning rate decaying linearly to 1e-4 of its starting value. Everything is
seeded and single-threaded, so a given config always produces bitwise
identical matrices.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

NOISE_POWER = 0.75
FINAL_LR_FRACTION = 1e-4


@dataclass(frozen=True)
class EmbeddingConfig:
    """Hyperparameters for skip-gram training."""

    dim: int = 150
    window: int = 5
    negatives: int = 5
    epochs: int = 10
    learning_rate: float = 0.025
    min_count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.window < 1 or self.negatives < 1 or self.min_count < 1:
            raise ValueError("dim, window, negatives, and min_count must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Trained vocabulary with per-term input and output vectors."""

    terms: tuple[str, ...]
    index: dict[str, int]
    input_vectors: np.ndarray
    output_vectors: np.ndarray

    def __post_init__(self):
        if self.input_vectors.shape != self.output_vectors.shape:
            raise ValueError("input and output matrices must share a shape")
        if not (
            np.isfinite(self.input_vectors).all()
            and np.isfinite(self.output_vectors).all()
        ):
            raise ValueError("embedding matrices must be finite")

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    @property
    def dim(self) -> int:
        return int(self.input_vectors.shape[1])

    def vector(self, term: str) -> np.ndarray:
        return self.input_vectors[self.index[term]]


def _sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _log_sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    return np.minimum(x, 0.0) - np.log1p(np.exp(-np.abs(x)))


def sgns_pair_loss(center, context, negatives):
    """Loss and exact gradients for one (center, context, negatives) triple.

    Returns ``(loss, grad_center, grad_context, grad_negatives)`` where
    ``grad_negatives`` has one row per negative vector. ``negatives`` may be
    empty.
    """
    center = np.asarray(center, dtype=np.float64)
    context = np.asarray(context, dtype=np.float64)
    negatives = np.asarray(negatives, dtype=np.float64)
    if center.ndim != 1:
        raise ValueError("center must be a 1-D vector")
    if context.shape != center.shape:
        raise ValueError("context vector dimension mismatch")
    negatives = negatives.reshape(-1, center.shape[0]) if negatives.size else negatives.reshape(0, center.shape[0])
    if negatives.ndim != 2 or negatives.shape[1] != center.shape[0]:
        raise ValueError("negative vector dimension mismatch")

    pos_dot = float(center @ context)
    neg_dots = negatives @ center
    loss = -(float(_log_sigmoid(pos_dot)) + float(_log_sigmoid(-neg_dots).sum()))
    g_pos = float(_sigmoid(pos_dot)) - 1.0  # d loss / d pos_dot
    g_negs = _sigmoid(neg_dots)             # d loss / d neg_dot_j
    grad_center = g_pos * context + g_negs @ negatives
    grad_context = g_pos * center
    grad_negatives = np.outer(g_negs, center)
    return loss, grad_center, grad_context, grad_negatives


class UnigramSampler:
    """Draws vocabulary indices with probability proportional to
    ``count ** power``."""

    def __init__(self, counts, power: float = NOISE_POWER):
        counts = np.asarray(counts, dtype=np.float64)
        if counts.ndim != 1 or counts.size == 0 or (counts <= 0).any():
            raise ValueError("counts must be a non-empty vector of positive numbers")
        self.power = power
        self._cumulative = np.cumsum(counts**power)

    def sample(self, rng: np.random.Generator, size=None) -> np.ndarray:
        points = rng.random(size) * self._cumulative[-1]
        return np.searchsorted(self._cumulative, points, side="right")


def train_sgns(token_lists, config: EmbeddingConfig) -> EmbeddingMatrix:
    """Train skip-gram vectors over a corpus of token lists.

    Tokens below ``min_count`` are dropped before windowing (remaining tokens
    close ranks). Negatives drawn equal to the pair's context word are
    discarded for that pair.
    """
    counts: Counter[str] = Counter()
    for tokens in token_lists:
        counts.update(tokens)
    terms = tuple(t for t, c in counts.items() if c >= config.min_count)
    if not terms:
        raise ValueError("no terms survive min_count; effective vocabulary is empty")
    index = {t: i for i, t in enumerate(terms)}
    frequencies = np.array([counts[t] for t in terms], dtype=np.float64)

    rng = np.random.default_rng(config.seed)
    dim = config.dim
    input_vectors = rng.uniform(-0.5 / dim, 0.5 / dim, size=(len(terms), dim))
    output_vectors = np.zeros((len(terms), dim))

    sentences = [
        np.array([index[t] for t in tokens if t in index], dtype=np.intp)
        for tokens in token_lists
    ]
    sentences = [s for s in sentences if s.size]
    total_centers = config.epochs * sum(s.size for s in sentences)
    if total_centers == 0:
        return EmbeddingMatrix(terms, index, input_vectors, output_vectors)

    sampler = UnigramSampler(frequencies)
    lr_start = config.learning_rate
    lr_final = FINAL_LR_FRACTION * lr_start
    window = config.window
    k = config.negatives
    processed = 0
    for _ in range(config.epochs):
        for sentence in sentences:
            n = sentence.size
            for pos in range(n):
                lr = lr_start + (lr_final - lr_start) * (processed / total_centers)
                center = sentence[pos]
                u = input_vectors[center]
                for ctx_pos in range(max(0, pos - window), min(n, pos + window + 1)):
                    if ctx_pos == pos:
                        continue
                    ctx = sentence[ctx_pos]
                    negs = sampler.sample(rng, k)
                    negs = negs[negs != ctx]
                    _, g_u, g_ctx, g_negs = sgns_pair_loss(
                        u, output_vectors[ctx], output_vectors[negs]
                    )
                    input_vectors[center] = u = u - lr * g_u
                    output_vectors[ctx] -= lr * g_ctx
                    # np.add.at handles repeated negative indices correctly
                    np.add.at(output_vectors, negs, -lr * g_negs)
                processed += 1
    return EmbeddingMatrix(terms, index, input_vectors, output_vectors)


def doc_vector(embeddings: EmbeddingMatrix, tokens) -> np.ndarray:
    """Mean of the input vectors of in-vocabulary tokens; zero vector when
    nothing is in vocabulary."""
    rows = [embeddings.index[t] for t in tokens if t in embeddings.index]
    if not rows:
        return np.zeros(embeddings.dim)
    return embeddings.input_vectors[rows].mean(axis=0)
