"""Hard-margin linear SVM trained by sequential minimal optimization.

The dual

    min_a  1/2 a^T Q a - e^T a,   Q_ij = y_i y_j <x_i, x_j>
    s.t.   y^T a = 0,  0 <= a_i <= C

is solved on the precomputed linear Gram matrix. A large box bound C stands
in for the unbounded hard-margin problem: separable folds never reach it,
non-separable folds stay bounded.

Working-set selection follows the second-order rule used by LIBSVM:

- i maximizes -y_t G_t over the "up" set
- j minimizes -(G_max + y_t G_t)^2 / (K_ii + K_tt - 2 K_it) over the "low" set

and training stops once the maximal KKT violation drops below ``kkt_tol``.
Labels are +1 for Class1 and -1 for Class2; a decision value of exactly 0
predicts Class1.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from cogphase.classifiers.base import (
    BaseClassifier,
    ClassifierRegistry,
    ClassifierType,
    check_test_features,
    check_training_arrays,
)
from cogphase.config import DEFAULT_CONFIG
from cogphase.core import ClassLabel, LabeledDataset, Signal
from cogphase.errors import ConvergenceWarning, InvalidParamsError, NotConvergedError

logger = logging.getLogger(__name__)

# Replacement for non-positive curvature along the working-set direction
_TAU = 1e-12


@dataclass(frozen=True)
class SVMParams:
    """SMO parameters.

    Attributes:
        c_cap: Box bound on every alpha (hard-margin surrogate)
        kkt_tol: Stop when the maximal KKT violation is below this
        max_passes: Pair updates allowed = max_passes * n_train
        strict: Raise NotConvergedError instead of warning
    """
    c_cap: float = field(default=DEFAULT_CONFIG.svm_c_cap)
    kkt_tol: float = field(default=DEFAULT_CONFIG.svm_kkt_tol)
    max_passes: int = field(default=DEFAULT_CONFIG.svm_max_passes)
    strict: bool = False

    def __post_init__(self):
        if not self.c_cap > 0:
            raise InvalidParamsError(f"c_cap must be positive, got {self.c_cap}")
        if not self.kkt_tol > 0:
            raise InvalidParamsError(f"kkt_tol must be positive, got {self.kkt_tol}")
        if int(self.max_passes) < 1:
            raise InvalidParamsError(f"max_passes must be >= 1, got {self.max_passes}")


@dataclass(frozen=True, eq=False)
class SVMModel:
    """Trained linear SVM.

    ``support_indices`` index into the training set the model was fitted on;
    ``alphas`` and ``targets`` are restricted to those support vectors.
    """
    alphas: np.ndarray
    targets: np.ndarray
    support_indices: np.ndarray
    w: np.ndarray
    b: float
    converged: bool
    iterations: int
    kernel: str = "linear"

    @property
    def n_features(self) -> int:
        return int(self.w.size)

    @property
    def n_support(self) -> int:
        return int(self.support_indices.size)

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        x = check_test_features(features, self.n_features)
        return x @ self.w + self.b

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready dump (w is omitted; it follows from the support set)."""
        return {
            "kind": "svm",
            "kernel": self.kernel,
            "b": self.b,
            "support_indices": self.support_indices.tolist(),
            "alphas": self.alphas.tolist(),
            "targets": self.targets.tolist(),
            "converged": self.converged,
            "iterations": self.iterations,
        }


def _smo(gram: np.ndarray, y: np.ndarray, params: SVMParams) -> Tuple[np.ndarray, float, bool, int]:
    """Solve the dual; returns (alpha, rho, converged, iterations)."""
    n = y.size
    c = float(params.c_cap)
    q = (y[:, None] * y[None, :]) * gram
    diag = np.diag(gram).copy()
    alpha = np.zeros(n)
    grad = -np.ones(n)
    max_iter = int(params.max_passes) * n

    converged = False
    iterations = 0
    while iterations < max_iter:
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c))
        minus_yg = -y * grad

        candidates = np.where(up, minus_yg, -np.inf)
        i = int(np.argmax(candidates))
        g_max = candidates[i]
        g_min = np.min(np.where(low, minus_yg, np.inf))
        if g_max - g_min < params.kkt_tol:
            converged = True
            break

        grad_diff = g_max - minus_yg
        quad = diag[i] + diag - 2.0 * gram[i]
        quad = np.where(quad > 0, quad, _TAU)
        objective = np.where(low & (grad_diff > 0), -(grad_diff ** 2) / quad, np.inf)
        j = int(np.argmin(objective))

        old_i, old_j = alpha[i], alpha[j]
        if y[i] != y[j]:
            curv = diag[i] + diag[j] + 2.0 * q[i, j]
            curv = curv if curv > 0 else _TAU
            delta = (-grad[i] - grad[j]) / curv
            diff = old_i - old_j
            ai, aj = old_i + delta, old_j + delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > c:
                    ai, aj = c, c - diff
            elif aj > c:
                aj, ai = c, c + diff
        else:
            curv = diag[i] + diag[j] - 2.0 * q[i, j]
            curv = curv if curv > 0 else _TAU
            delta = (grad[i] - grad[j]) / curv
            total = old_i + old_j
            ai, aj = old_i - delta, old_j + delta
            if total > c:
                if ai > c:
                    ai, aj = c, total - c
            elif aj < 0:
                aj, ai = 0.0, total
            if total > c:
                if aj > c:
                    aj, ai = c, total - c
            elif ai < 0:
                ai, aj = 0.0, total

        alpha[i], alpha[j] = ai, aj
        grad += q[:, i] * (ai - old_i) + q[:, j] * (aj - old_j)
        iterations += 1

    rho = _offset(alpha, grad, y, c)
    return alpha, rho, converged, iterations


def _offset(alpha: np.ndarray, grad: np.ndarray, y: np.ndarray, c: float) -> float:
    """rho from the free alphas, else the midpoint of the feasible interval."""
    yg = y * grad
    free = (alpha > 0) & (alpha < c)
    if np.any(free):
        return float(np.mean(yg[free]))
    at_upper = alpha >= c
    at_lower = ~free & ~at_upper
    # upper bound on rho: upper-bounded negatives and lower-bounded positives
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = float(np.min(yg[ub_mask])) if np.any(ub_mask) else np.inf
    lb = float(np.max(yg[lb_mask])) if np.any(lb_mask) else -np.inf
    return (ub + lb) / 2.0


def _fit(features: np.ndarray, labels: Sequence, params: SVMParams) -> SVMModel:
    x, labels_arr = check_training_arrays(features, labels)
    y = np.where(labels_arr == ClassLabel.CLASS1.value, 1.0, -1.0)
    gram = x @ x.T

    alpha, rho, converged, iterations = _smo(gram, y, params)
    if not converged:
        message = (
            f"SMO did not converge within {iterations} pair updates "
            f"(max_passes={params.max_passes}, n_train={y.size})"
        )
        if params.strict:
            raise NotConvergedError(message)
        logger.warning(message)
        warnings.warn(message, ConvergenceWarning, stacklevel=3)

    support = np.flatnonzero(alpha > 0)
    coef = alpha[support] * y[support]
    w = coef @ x[support] if support.size else np.zeros(x.shape[1])

    arrays = (alpha[support], y[support], support, w)
    for arr in arrays:
        arr.setflags(write=False)
    return SVMModel(*arrays, b=-rho, converged=converged, iterations=iterations)


def _decide(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    labels = np.where(values >= 0, ClassLabel.CLASS1.value, ClassLabel.CLASS2.value)
    return labels.astype(np.int64), values


def svm_train(train: LabeledDataset, params: Optional[SVMParams] = None) -> SVMModel:
    """Train the linear SVM on a dataset.

    Non-convergence is reported through ``model.converged`` and a
    ``ConvergenceWarning`` unless ``params.strict`` is set.

    Raises:
        EmptyClassError: a class has no training samples
        NotConvergedError: strict mode and the pass budget ran out
    """
    return _fit(train.feature_matrix, train.label_array, params or SVMParams())


def svm_predict(model: SVMModel, x: Signal) -> Tuple[ClassLabel, float]:
    """Predict one sample: (label, signed decision value)."""
    labels, values = _decide(model.decision_function(x.values))
    return ClassLabel(int(labels[0])), float(values[0])


@ClassifierRegistry.register
class SVMClassifier(BaseClassifier):
    """Registry backend for the linear SVM. The score is the decision value."""

    classifier_type = ClassifierType.SVM

    def __init__(self, params: Optional[SVMParams] = None):
        self.params = params or SVMParams()

    def fit(self, features: np.ndarray, labels: Sequence) -> SVMModel:
        return _fit(features, labels, self.params)

    def predict(self, model: SVMModel, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return _decide(model.decision_function(features))

    def describe(self) -> Dict[str, Any]:
        return {
            "svm.kernel": "linear",
            "svm.c_cap": self.params.c_cap,
            "svm.kkt_tol": self.params.kkt_tol,
            "svm.max_passes": self.params.max_passes,
        }
