"""Linear SVM with L1 hinge loss trained by dual coordinate descent.

The primal problem is

    min_w  0.5*||w||^2 + C * sum_i max(0, 1 - y_i * (w . x_i))

with the bias handled by appending a constant-1 feature to every row (so the
bias is mildly regularized along with the weights). The dual has one box
variable alpha_i in [0, C] per training point and is solved by exact
coordinate minimization: each sweep visits the points in a fresh seeded
random permutation, and training stops once no coordinate's projected
gradient exceeds ``tol`` (verified by a read-only pass).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .features import SparseVector

# Coordinates whose projected gradient is below this are skipped outright.
_ZERO_VIOLATION = 1e-12


@dataclass(frozen=True)
class TrainOptions:
    """Solver settings; ``seed`` fixes the per-epoch visiting order."""

    C: float = 1.0
    tol: float = 1e-4
    max_iter: int = 1000
    seed: int = 0
    fit_bias: bool = True

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("C must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(eq=False)
class LinearModel:
    """Trained binary classifier: decision value is ``weights . x + bias``.

    The fields after ``C`` are training diagnostics and are not serialized.
    """

    weights: np.ndarray
    bias: float
    dim: int
    C: float
    alpha: np.ndarray | None = None
    dual_objectives: tuple[float, ...] = ()
    final_violation: float = math.inf
    epochs_run: int = 0
    converged: bool = False


@dataclass(eq=False)
class MultiClassModel:
    """One-vs-rest ensemble; ``classes`` keeps first-appearance order."""

    classes: tuple
    models: tuple[LinearModel, ...]

    def __post_init__(self):
        if len(self.classes) != len(self.models):
            raise ValueError("need exactly one model per class")
        if len({m.dim for m in self.models}) > 1:
            raise ValueError("submodels disagree on feature dimension")

    @property
    def dim(self) -> int:
        return self.models[0].dim


def _as_rows(X) -> tuple[list[tuple[np.ndarray, np.ndarray]], int]:
    """Normalize input rows to (indices, values) pairs plus the shared dim."""
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise ValueError("dense input must be a 2-D array")
        X = list(X)
    rows = []
    dim = None
    for x in X:
        if isinstance(x, SparseVector):
            row_dim = x.dim
            pair = (x.indices, x.values)
        else:
            arr = np.asarray(x, dtype=np.float64)
            if arr.ndim != 1:
                raise ValueError("each dense row must be 1-D")
            row_dim = arr.shape[0]
            pair = (np.arange(row_dim, dtype=np.int64), arr)
        if dim is None:
            dim = row_dim
        elif row_dim != dim:
            raise ValueError(f"dimension mismatch: expected {dim}, got {row_dim}")
        rows.append(pair)
    if dim is None:
        raise ValueError("training data is empty")
    return rows, dim


def _projected_gradient(gradient: float, alpha: float, C: float) -> float:
    if alpha <= 0.0:
        return min(gradient, 0.0)
    if alpha >= C:
        return max(gradient, 0.0)
    return gradient


def _max_violation(rows, y, alpha, w, C) -> float:
    worst = 0.0
    for i, (idx, vals) in enumerate(rows):
        gradient = y[i] * float(w[idx] @ vals) - 1.0
        worst = max(worst, abs(_projected_gradient(gradient, float(alpha[i]), C)))
    return worst


def train_linear_svm(X, y, options: TrainOptions = TrainOptions()) -> LinearModel:
    """Fit the hinge-loss SVM on +1/-1 labels.

    ``X`` may be a list of :class:`SparseVector`, a 2-D array, or a list of
    1-D arrays. Raises on a single-class ``y`` or inconsistent dimensions.
    The dual objective is checked to be non-decreasing after every sweep.
    """
    rows, dim = _as_rows(X)
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.shape[0] != len(rows):
        raise ValueError("X and y lengths differ")
    if not np.isin(y, (-1.0, 1.0)).all():
        raise ValueError("labels must be +1 or -1")
    if len(set(y.tolist())) < 2:
        raise ValueError("training data contains a single class")

    if options.fit_bias:
        rows = [
            (np.append(idx, dim), np.append(vals, 1.0)) for idx, vals in rows
        ]
    diag = np.array([float(vals @ vals) for _, vals in rows])
    n = len(rows)
    C = options.C
    w = np.zeros(dim + 1 if options.fit_bias else dim)
    alpha = np.zeros(n)
    rng = np.random.default_rng(options.seed)

    objectives: list[float] = []
    epochs_run = 0
    converged = False
    for epoch in range(options.max_iter):
        sweep_violation = 0.0
        for i in rng.permutation(n):
            idx, vals = rows[i]
            yi = y[i]
            gradient = yi * float(w[idx] @ vals) - 1.0
            a = float(alpha[i])
            violation = abs(_projected_gradient(gradient, a, C))
            sweep_violation = max(sweep_violation, violation)
            if violation <= _ZERO_VIOLATION:
                continue
            if diag[i] > 0.0:
                a_new = min(max(a - gradient / diag[i], 0.0), C)
            else:
                # zero row: dual term is linear in alpha_i, jump to a bound
                a_new = C if gradient < 0.0 else 0.0
            if a_new != a:
                w[idx] += (a_new - a) * yi * vals
                alpha[i] = a_new
        epochs_run = epoch + 1
        objective = float(alpha.sum() - 0.5 * float(w @ w))
        if objectives and objective < objectives[-1] - 1e-9 * max(1.0, abs(objectives[-1])):
            raise RuntimeError(
                f"dual objective decreased ({objectives[-1]} -> {objective}); "
                "solver invariant violated"
            )
        objectives.append(objective)
        if sweep_violation < options.tol:
            # verify on frozen alphas; mid-sweep measurements are stale
            if _max_violation(rows, y, alpha, w, C) < options.tol:
                converged = True
                break

    final_violation = _max_violation(rows, y, alpha, w, C)
    if options.fit_bias:
        weights, bias = w[:dim].copy(), float(w[dim])
    else:
        weights, bias = w.copy(), 0.0
    return LinearModel(
        weights=weights,
        bias=bias,
        dim=dim,
        C=C,
        alpha=alpha,
        dual_objectives=tuple(objectives),
        final_violation=final_violation,
        epochs_run=epochs_run,
        converged=converged or final_violation < options.tol,
    )


def decision_score(model: LinearModel, x) -> float:
    """Signed distance surrogate ``weights . x + bias``."""
    if isinstance(x, SparseVector):
        if x.dim != model.dim:
            raise ValueError(f"dimension mismatch: model {model.dim}, input {x.dim}")
        return float(model.weights[x.indices] @ x.values) + model.bias
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (model.dim,):
        raise ValueError(f"dimension mismatch: model {model.dim}, input {arr.shape}")
    return float(model.weights @ arr) + model.bias


def predict_binary(model: LinearModel, x) -> int:
    """+1 when the decision score is >= 0, else -1 (ties go positive)."""
    return 1 if decision_score(model, x) >= 0.0 else -1


def train_one_vs_rest(X, y, options: TrainOptions = TrainOptions()) -> MultiClassModel:
    """Train one binary model per distinct class (that class vs the rest).

    Classes are ordered by first appearance in ``y``; every submodel uses the
    same options and seed, so retraining is reproducible.
    """
    y = list(y)
    classes = tuple(dict.fromkeys(y))
    if len(classes) < 2:
        raise ValueError("one-vs-rest needs at least two distinct classes")
    models = tuple(
        train_linear_svm(X, [1 if label == c else -1 for label in y], options)
        for c in classes
    )
    return MultiClassModel(classes=classes, models=models)


def class_scores(model: MultiClassModel, x) -> np.ndarray:
    """Per-class decision scores, aligned with ``model.classes``."""
    return np.array([decision_score(m, x) for m in model.models])


def predict_class(model: MultiClassModel, x):
    """Class with the highest decision score; ties break toward the class
    seen earliest in training."""
    return model.classes[int(np.argmax(class_scores(model, x)))]
