"""Classifier backend abstraction.

Both classifiers work on plain real feature matrices, so the same evaluation
loop can run Naive Bayes or the linear SVM without code changes.

The architecture separates:
1. Parameters (frozen dataclasses, defaults from the central config)
2. Training - returns an immutable model
3. Prediction - label plus a per-sample score

Example::

    from cogphase.classifiers import ClassifierType, get_classifier

    nb = get_classifier(ClassifierType.NAIVE_BAYES)
    model = nb.fit(features, labels)
    predicted, scores = nb.predict(model, test_features)
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, List, Optional, Protocol, Sequence, Tuple, Type, runtime_checkable

import numpy as np

from cogphase.core import ClassLabel, LabeledDataset, Signal
from cogphase.errors import DimensionMismatchError, EmptyClassError


# =============================================================================
# Classifier Types
# =============================================================================

class ClassifierType(Enum):
    """Available classifier backends."""
    NAIVE_BAYES = "nb"
    SVM = "svm"


def labels_to_array(labels: Sequence) -> np.ndarray:
    """ClassLabel / 1 / 2 sequence as an int array of 1/2."""
    return np.array([ClassLabel.from_value(getattr(lab, "value", lab)).value for lab in labels],
                    dtype=np.int64)


def check_training_arrays(features: np.ndarray, labels: Sequence) -> Tuple[np.ndarray, np.ndarray]:
    """Validate a training matrix and label vector; both classes must be present."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise DimensionMismatchError(f"features must be 2-D, got shape {features.shape}")
    y = labels_to_array(labels)
    if y.size != features.shape[0]:
        raise DimensionMismatchError(
            f"{features.shape[0]} training samples but {y.size} labels"
        )
    missing = [c for c in ClassLabel if not np.any(y == c.value)]
    if missing:
        names = ", ".join(f"class {c.value} ({c.display_name})" for c in missing)
        raise EmptyClassError(f"training set has no samples of {names}")
    return features, y


def check_test_features(features: np.ndarray, n_features: int) -> np.ndarray:
    """Promote a single sample to a 1-row matrix and check its width."""
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if x.shape[-1] != n_features:
        raise DimensionMismatchError(
            f"model expects {n_features} features, got {x.shape[-1]}"
        )
    return x


# =============================================================================
# Classifier Protocol
# =============================================================================

@runtime_checkable
class Classifier(Protocol):
    """Protocol for classifier backends.

    Implementations must provide:
    - classifier_type: Identifier for this classifier
    - fit(): Train on a feature matrix and labels
    - predict(): Labels and scores for a batch of samples
    """

    @property
    def classifier_type(self) -> ClassifierType:
        ...

    def fit(self, features: np.ndarray, labels: Sequence) -> Any:
        ...

    def predict(self, model: Any, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Return (labels as int 1/2, per-sample score)."""
        ...

    def describe(self) -> Dict[str, Any]:
        """Parameter record for reports."""
        ...


class BaseClassifier(ABC):
    """Base class for classifier backends with the dataset-level helpers."""

    classifier_type: ClassifierType

    @abstractmethod
    def fit(self, features: np.ndarray, labels: Sequence) -> Any:
        pass

    @abstractmethod
    def predict(self, model: Any, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        pass

    def fit_dataset(self, ds: LabeledDataset) -> Any:
        return self.fit(ds.feature_matrix, ds.label_array)

    def predict_signal(self, model: Any, x: Signal) -> Tuple[ClassLabel, float]:
        """Predict one sample: (label, score)."""
        labels, scores = self.predict(model, x.values)
        return ClassLabel(int(labels[0])), float(scores[0])


# =============================================================================
# Classifier Registry
# =============================================================================

class ClassifierRegistry:
    """Registry of available classifier backends."""
    _classifiers: Dict[ClassifierType, Type[BaseClassifier]] = {}

    @classmethod
    def register(cls, classifier_class: Type[BaseClassifier]):
        """Register a classifier backend class (usable as a decorator)."""
        cls._classifiers[classifier_class.classifier_type] = classifier_class
        return classifier_class

    @classmethod
    def get(cls, classifier_type: ClassifierType, params: Optional[Any] = None) -> BaseClassifier:
        """Instantiate a backend, optionally with its parameter object."""
        classifier_type = ClassifierType(classifier_type)
        if classifier_type not in cls._classifiers:
            raise KeyError(f"Unknown classifier backend: {classifier_type}")
        backend = cls._classifiers[classifier_type]
        return backend() if params is None else backend(params)

    @classmethod
    def list_classifiers(cls) -> List[ClassifierType]:
        return list(cls._classifiers.keys())


def get_classifier(classifier_type: ClassifierType, params: Optional[Any] = None) -> BaseClassifier:
    """Get a classifier backend.

    Args:
        classifier_type: NAIVE_BAYES or SVM
        params: NBParams / SVMParams, or None for defaults

    Returns:
        Classifier instance
    """
    return ClassifierRegistry.get(classifier_type, params)
