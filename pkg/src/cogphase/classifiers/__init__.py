"""From-scratch classifiers: Gaussian Naive Bayes and hard-margin linear SVM.

Importing this package registers both backends with
:class:`~cogphase.classifiers.base.ClassifierRegistry`.
"""

from cogphase.classifiers.base import (
    BaseClassifier,
    Classifier,
    ClassifierRegistry,
    ClassifierType,
    get_classifier,
)
from cogphase.classifiers.naive_bayes import (
    NaiveBayesClassifier,
    NBModel,
    NBParams,
    nb_predict,
    nb_train,
)
from cogphase.classifiers.svm import (
    SVMClassifier,
    SVMModel,
    SVMParams,
    svm_predict,
    svm_train,
)

__all__ = [
    # Backend abstraction
    "ClassifierType",
    "Classifier",
    "BaseClassifier",
    "ClassifierRegistry",
    "get_classifier",
    # Naive Bayes
    "NBParams",
    "NBModel",
    "nb_train",
    "nb_predict",
    "NaiveBayesClassifier",
    # SVM
    "SVMParams",
    "SVMModel",
    "svm_train",
    "svm_predict",
    "SVMClassifier",
]
