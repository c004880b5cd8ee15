"""Gaussian Naive Bayes.

Each feature is modelled per class as an independent Gaussian with the
population (divide-by-count) variance. Variances are floored at

    eps = variance_floor_scale * max(largest feature variance over the training set, 1)

so constant features contribute identical likelihoods to both classes and the
log-posterior stays finite for finite inputs.

Log-posteriors are normalized, i.e. log P(class | x), and equal posteriors
resolve to Class1.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from cogphase.classifiers.base import (
    BaseClassifier,
    ClassifierRegistry,
    ClassifierType,
    check_test_features,
    check_training_arrays,
)
from cogphase.config import DEFAULT_CONFIG
from cogphase.core import ClassLabel, LabeledDataset, Signal
from cogphase.errors import InvalidParamsError

logger = logging.getLogger(__name__)

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class NBParams:
    """Naive Bayes parameters."""
    variance_floor_scale: float = field(default=DEFAULT_CONFIG.variance_floor_scale)

    def __post_init__(self):
        if not self.variance_floor_scale > 0:
            raise InvalidParamsError(
                f"variance_floor_scale must be positive, got {self.variance_floor_scale}"
            )


@dataclass(frozen=True, eq=False)
class NBModel:
    """Trained Gaussian NB model.

    Row 0 of ``means``/``variances`` is Class1, row 1 is Class2.
    """
    priors: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    variance_floor: float

    @property
    def n_features(self) -> int:
        return int(self.means.shape[1])

    def log_posteriors(self, features: np.ndarray) -> np.ndarray:
        """(n_samples, 2) normalized log-posteriors."""
        x = check_test_features(features, self.n_features)
        joint = np.empty((x.shape[0], 2))
        for c in range(2):
            var = self.variances[c]
            log_lik = -0.5 * (_LOG_2PI + np.log(var) + (x - self.means[c]) ** 2 / var)
            joint[:, c] = np.log(self.priors[c]) + log_lik.sum(axis=1)
        return joint - logsumexp(joint, axis=1, keepdims=True)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready dump of the model parameters."""
        return {
            "kind": "naive_bayes",
            "likelihood": "gaussian",
            "priors": self.priors.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "variance_floor": self.variance_floor,
        }


def _fit(features: np.ndarray, labels: Sequence, params: NBParams) -> NBModel:
    x, y = check_training_arrays(features, labels)
    floor = params.variance_floor_scale * max(float(np.max(x.var(axis=0))), 1.0)

    priors = np.empty(2)
    means = np.empty((2, x.shape[1]))
    variances = np.empty((2, x.shape[1]))
    for c in ClassLabel:
        rows = x[y == c.value]
        priors[c.index] = rows.shape[0] / x.shape[0]
        means[c.index] = rows.mean(axis=0)
        variances[c.index] = np.maximum(rows.var(axis=0), floor)

    for arr in (priors, means, variances):
        arr.setflags(write=False)
    return NBModel(priors, means, variances, floor)


def _decide(log_post: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # strict comparison: equal posteriors go to Class1
    class2 = log_post[:, 1] > log_post[:, 0]
    labels = np.where(class2, ClassLabel.CLASS2.value, ClassLabel.CLASS1.value)
    return labels.astype(np.int64), log_post[:, 0] - log_post[:, 1]


def nb_train(train: LabeledDataset, params: Optional[NBParams] = None) -> NBModel:
    """Train Gaussian NB on a dataset.

    Raises:
        EmptyClassError: a class has no training samples
    """
    return _fit(train.feature_matrix, train.label_array, params or NBParams())


def nb_predict(model: NBModel, x: Signal) -> Tuple[ClassLabel, Tuple[float, float]]:
    """Predict one sample.

    Returns:
        (label, (log P(Class1 | x), log P(Class2 | x)))

    Raises:
        DimensionMismatchError: x has the wrong length
    """
    log_post = model.log_posteriors(x.values)
    labels, _ = _decide(log_post)
    return ClassLabel(int(labels[0])), (float(log_post[0, 0]), float(log_post[0, 1]))


@ClassifierRegistry.register
class NaiveBayesClassifier(BaseClassifier):
    """Registry backend for Gaussian NB. The score is log P(C1|x) - log P(C2|x)."""

    classifier_type = ClassifierType.NAIVE_BAYES

    def __init__(self, params: Optional[NBParams] = None):
        self.params = params or NBParams()

    def fit(self, features: np.ndarray, labels: Sequence) -> NBModel:
        return _fit(features, labels, self.params)

    def predict(self, model: NBModel, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return _decide(model.log_posteriors(features))

    def describe(self) -> Dict[str, Any]:
        return {
            "nb.likelihood": "gaussian",
            "nb.variance": "population",
            "nb.variance_floor_scale": self.params.variance_floor_scale,
        }
