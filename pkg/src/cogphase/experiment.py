"""Pipeline configurations C1-C8 and the evaluation protocol.

Configurations (odd ids use Naive Bayes, even ids the linear SVM):

    C1/C2  raw features
    C3/C4  sieve
    C5/C6  sieve -> arg(DFT)
    C7/C8  sieve -> arg(DHT)

Each configuration is evaluated by leave-one-out cross-validation. Sieve
configurations are repeated (default 50 times) with one fresh mask per
repetition, drawn from random stream r of the run seed; C1 and C2 have no
randomness and always run once.

Repetitions run concurrently when there are several of them, otherwise the
folds of the single repetition do. Results are reduced by (repetition, fold)
index, so reports do not depend on the thread count.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from cogphase.classifiers import (
    BaseClassifier,
    ClassifierType,
    NBParams,
    SVMParams,
    get_classifier,
)
from cogphase.config import DEFAULT_CONFIG
from cogphase.core import ClassLabel, LabeledDataset, RngSeed, SieveMask, validate_dataset
from cogphase.errors import ConfigDimensionMismatchError, InvalidParamsError
from cogphase.sieve import apply_sieve_matrix, resolve_m, sample_mask
from cogphase.spectral import DhtMode, count_near_zero, dft_array, dht_source_array, wrap_angles

logger = logging.getLogger(__name__)


# =============================================================================
# Configurations
# =============================================================================

class FeatureStage(Enum):
    """Transform chain applied before classification."""
    RAW = "raw"
    SIEVE = "sieve"
    SIEVE_DFT_PHASE = "sieve>arg(dft)"
    SIEVE_DHT_PHASE = "sieve>arg(dht)"

    @property
    def uses_sieve(self) -> bool:
        return self is not FeatureStage.RAW

    @property
    def uses_phase(self) -> bool:
        return self in (FeatureStage.SIEVE_DFT_PHASE, FeatureStage.SIEVE_DHT_PHASE)


class ConfigId(Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"

    @property
    def number(self) -> int:
        return int(self.value[1:])

    @property
    def stage(self) -> FeatureStage:
        return _STAGES[(self.number - 1) // 2]

    @property
    def classifier_type(self) -> ClassifierType:
        return ClassifierType.NAIVE_BAYES if self.number % 2 else ClassifierType.SVM

    @classmethod
    def parse(cls, text: str) -> "ConfigId":
        """Case-insensitive lookup, e.g. ``"c5"`` -> C5."""
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise InvalidParamsError(f"unknown configuration {text!r}; expected C1..C8") from None


_STAGES = (
    FeatureStage.RAW,
    FeatureStage.SIEVE,
    FeatureStage.SIEVE_DFT_PHASE,
    FeatureStage.SIEVE_DHT_PHASE,
)


def parse_configs(selection: Union[str, Sequence[str]]) -> Tuple[ConfigId, ...]:
    """``"all"``, ``"c1,c5"`` or a list of ids -> ordered, de-duplicated ids."""
    if isinstance(selection, str):
        selection = [s for s in selection.split(",") if s.strip()]
    if any(s.strip().lower() == "all" for s in selection):
        return tuple(ConfigId)
    ids = {ConfigId.parse(s) for s in selection}
    if not ids:
        raise InvalidParamsError("no configurations selected")
    return tuple(c for c in ConfigId if c in ids)


@dataclass(frozen=True)
class PipelineConfig:
    """One configuration with its sieve, transform and classifier settings.

    Attributes:
        config_id: C1..C8
        sieve_n: Expected feature dimension N (None: take it from the dataset)
        sieve_m: Sieved positions per mask (None: floor(N / 2))
        dht_mode: Phase mode for C7/C8
    """
    config_id: ConfigId
    sieve_n: Optional[int] = None
    sieve_m: Optional[int] = None
    dht_mode: DhtMode = DhtMode.ANALYTIC
    nb_params: NBParams = field(default_factory=NBParams)
    svm_params: SVMParams = field(default_factory=SVMParams)

    def __post_init__(self):
        object.__setattr__(self, "config_id", ConfigId(self.config_id))
        object.__setattr__(self, "dht_mode", DhtMode(self.dht_mode))
        if self.sieve_n is not None and self.sieve_n < 1:
            raise InvalidParamsError(f"sieve_n must be >= 1, got {self.sieve_n}")

    @property
    def stage(self) -> FeatureStage:
        return self.config_id.stage

    @property
    def classifier_type(self) -> ClassifierType:
        return self.config_id.classifier_type

    def classifier(self) -> BaseClassifier:
        if self.classifier_type is ClassifierType.NAIVE_BAYES:
            return get_classifier(self.classifier_type, self.nb_params)
        return get_classifier(self.classifier_type, self.svm_params)

    def resolve_n(self, ds: LabeledDataset) -> int:
        """Dataset feature dimension, checked against ``sieve_n``."""
        if self.sieve_n is not None and self.sieve_n != ds.feature_dim:
            raise ConfigDimensionMismatchError(
                f"{self.config_id.value}: sieve N {self.sieve_n} != dataset feature_dim "
                f"{ds.feature_dim} (normalize the dataset first)"
            )
        return ds.feature_dim

    def describe(self, n_total: int) -> Dict[str, Any]:
        params: Dict[str, Any] = {
            "stage": self.stage.value,
            "classifier": self.classifier_type.value,
            "sieve.n": n_total,
        }
        if self.stage.uses_sieve:
            params["sieve.m"] = resolve_m(n_total, self.sieve_m)
        if self.stage is FeatureStage.SIEVE_DHT_PHASE:
            params["spectral.dht_mode"] = self.dht_mode.value
        params.update(self.classifier().describe())
        return params


# =============================================================================
# Results
# =============================================================================

@dataclass(frozen=True)
class FoldResult:
    """Outcome of one held-out sample."""
    index: int
    true_label: ClassLabel
    predicted_label: ClassLabel
    score: float
    converged: bool = True

    @property
    def correct(self) -> bool:
        return self.true_label is self.predicted_label


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """2x2 counts; rows are true classes, columns predicted classes."""
    counts: np.ndarray

    @classmethod
    def from_folds(cls, folds: Sequence[FoldResult]) -> "ConfusionMatrix":
        counts = np.zeros((2, 2), dtype=np.int64)
        for f in folds:
            counts[f.true_label.index, f.predicted_label.index] += 1
        return cls(counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def accuracy(self) -> float:
        """Percentage of correct predictions."""
        return float(np.trace(self.counts)) / self.total * 100.0 if self.total else 0.0

    def to_list(self) -> List[List[int]]:
        return self.counts.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)


@dataclass(frozen=True)
class RepetitionResult:
    """One LOOCV pass under one sieve mask."""
    repetition: int
    accuracy: float
    confusion: ConfusionMatrix
    folds: Tuple[FoldResult, ...]
    mask: Optional[SieveMask] = None
    near_zero_bins: Optional[int] = None

    @property
    def not_converged(self) -> int:
        return sum(1 for f in self.folds if not f.converged)


@dataclass(frozen=True)
class ConfigReport:
    """All repetitions of one configuration plus their summary statistics."""
    config: PipelineConfig
    repetitions: Tuple[RepetitionResult, ...]
    parameters: Dict[str, Any]

    @property
    def config_id(self) -> ConfigId:
        return self.config.config_id

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([r.accuracy for r in self.repetitions])

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def std_accuracy(self) -> float:
        """Sample standard deviation over repetitions (0.0 for a single one)."""
        if len(self.repetitions) < 2:
            return 0.0
        return float(np.std(self.accuracies, ddof=1))

    @property
    def mean_confusion(self) -> np.ndarray:
        stacked = np.stack([r.confusion.counts for r in self.repetitions])
        return np.round(stacked.mean(axis=0), 2)

    def to_dict(self, export_masks: bool = False) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "config": self.config_id.value,
            "stage": self.config.stage.value,
            "classifier": self.config.classifier_type.value,
            "parameters": dict(self.parameters),
            "repetitions": len(self.repetitions),
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "accuracies": self.accuracies.tolist(),
            "confusion_matrices": [r.confusion.to_list() for r in self.repetitions],
            "mean_confusion": self.mean_confusion.tolist(),
            "svm_not_converged": sum(r.not_converged for r in self.repetitions),
        }
        if self.config.stage.uses_phase:
            d["near_zero_bins"] = [r.near_zero_bins for r in self.repetitions]
        if export_masks and self.config.stage.uses_sieve:
            d["masks"] = [list(r.mask.zero_indices) for r in self.repetitions]
        return d


@dataclass(frozen=True)
class EvalReport:
    """Evaluation of one subject's dataset under one or more configurations."""
    subject_id: str
    dataset: Dict[str, Any]
    seed: int
    requested_repetitions: int
    configs: Tuple[ConfigReport, ...]
    decisions: Dict[str, Any]
    export_masks: bool = False

    def get(self, config_id: Union[ConfigId, str]) -> ConfigReport:
        cid = config_id if isinstance(config_id, ConfigId) else ConfigId.parse(config_id)
        for c in self.configs:
            if c.config_id is cid:
                return c
        raise KeyError(f"{cid.value} not in report")

    def rows(self) -> List[Tuple[str, float, float]]:
        """(config, mean %, std) per configuration."""
        return [(c.config_id.value, c.mean_accuracy, c.std_accuracy) for c in self.configs]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject_id": self.subject_id,
            "dataset": dict(self.dataset),
            "seed": self.seed,
            "repetitions": self.requested_repetitions,
            "decisions": dict(self.decisions),
            "configs": [c.to_dict(self.export_masks) for c in self.configs],
        }

    def to_json(self) -> str:
        """Deterministic JSON (sorted keys, no timestamps)."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# =============================================================================
# Transforms
# =============================================================================

def transform_features(
    config: PipelineConfig,
    features: np.ndarray,
    mask: Optional[SieveMask] = None,
) -> Tuple[np.ndarray, Optional[int]]:
    """Run the configuration's stage chain over every row.

    Returns:
        (transformed features, near-zero coefficient count for phase stages else None)
    """
    stage = config.stage
    if not stage.uses_sieve:
        return np.asarray(features, dtype=np.float64), None
    if mask is None:
        raise InvalidParamsError(f"{config.config_id.value} needs a sieve mask")

    sieved = apply_sieve_matrix(features, mask)
    if stage is FeatureStage.SIEVE:
        return sieved, None
    if stage is FeatureStage.SIEVE_DFT_PHASE:
        source = dft_array(sieved)
    else:
        source = dht_source_array(sieved, config.dht_mode)
    return wrap_angles(source), count_near_zero(source, sieved)


# =============================================================================
# Leave-one-out cross-validation
# =============================================================================

def _fold(clf: BaseClassifier, x: np.ndarray, y: np.ndarray, i: int) -> FoldResult:
    keep = np.ones(y.size, dtype=bool)
    keep[i] = False
    model = clf.fit(x[keep], y[keep])
    labels, scores = clf.predict(model, x[i])
    return FoldResult(
        index=i,
        true_label=ClassLabel(int(y[i])),
        predicted_label=ClassLabel(int(labels[0])),
        score=float(scores[0]),
        converged=bool(getattr(model, "converged", True)),
    )


def _loocv_arrays(
    clf: BaseClassifier,
    x: np.ndarray,
    y: np.ndarray,
    n_jobs: int = 1,
) -> Tuple[float, ConfusionMatrix, Tuple[FoldResult, ...]]:
    if n_jobs == 1:
        folds = [_fold(clf, x, y, i) for i in range(y.size)]
    else:
        folds = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_fold)(clf, x, y, i) for i in range(y.size)
        )
    confusion = ConfusionMatrix.from_folds(folds)
    return confusion.accuracy, confusion, tuple(folds)


def loocv(
    ds: LabeledDataset,
    classifier: Union[ClassifierType, BaseClassifier],
    n_jobs: int = 1,
) -> Tuple[float, ConfusionMatrix, Tuple[FoldResult, ...]]:
    """Leave-one-out cross-validation on an already transformed dataset.

    Sample i is held out in fold i and predicted by a model trained on all
    other samples.

    Args:
        ds: Transformed dataset
        classifier: Backend instance, or a ClassifierType for default parameters
        n_jobs: Worker threads for the folds

    Returns:
        (accuracy %, confusion matrix, fold results ordered by sample index)

    Raises:
        EmptyClassError: a class has fewer than two samples
    """
    validate_dataset(ds, min_per_class=2)
    clf = classifier if isinstance(classifier, BaseClassifier) else get_classifier(classifier)
    return _loocv_arrays(clf, ds.feature_matrix, ds.label_array, n_jobs)


# =============================================================================
# Repetitions
# =============================================================================

def _repetition(
    config: PipelineConfig,
    clf: BaseClassifier,
    x: np.ndarray,
    y: np.ndarray,
    seed: RngSeed,
    r: int,
    m: Optional[int],
    n_jobs: int,
) -> RepetitionResult:
    mask = sample_mask(x.shape[1], m, seed.derive(r)) if config.stage.uses_sieve else None
    features, near_zero = transform_features(config, x, mask)
    accuracy, confusion, folds = _loocv_arrays(clf, features, y, n_jobs)
    return RepetitionResult(r, accuracy, confusion, folds, mask, near_zero)


def _as_seed(seed: Union[RngSeed, int]) -> RngSeed:
    return seed if isinstance(seed, RngSeed) else RngSeed(int(seed))


def _evaluate_config(
    config: PipelineConfig,
    ds: LabeledDataset,
    seed: RngSeed,
    repetitions: int,
    n_jobs: int,
) -> ConfigReport:
    n_total = config.resolve_n(ds)
    m = resolve_m(n_total, config.sieve_m) if config.stage.uses_sieve else None
    if not config.stage.uses_sieve and repetitions != 1:
        logger.info("%s has no randomness; running 1 repetition instead of %d",
                    config.config_id.value, repetitions)
        repetitions = 1

    clf = config.classifier()
    x, y = ds.feature_matrix, ds.label_array
    if repetitions > 1 and n_jobs != 1:
        results = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_repetition)(config, clf, x, y, seed, r, m, 1) for r in range(repetitions)
        )
    else:
        fold_jobs = n_jobs if repetitions == 1 else 1
        results = [_repetition(config, clf, x, y, seed, r, m, fold_jobs)
                   for r in range(repetitions)]

    report = ConfigReport(config, tuple(results), config.describe(n_total))
    logger.info("%s: %.2f%% +- %.2f over %d repetition(s)", config.config_id.value,
                report.mean_accuracy, report.std_accuracy, repetitions)
    if any(r.not_converged for r in results):
        logger.warning("%s: %d fold(s) hit the SMO pass budget", config.config_id.value,
                       sum(r.not_converged for r in results))
    return report


def _decisions(
    configs: Sequence[PipelineConfig],
    ds: LabeledDataset,
    seed: RngSeed,
    repetitions: int,
) -> Dict[str, Any]:
    n_total = ds.feature_dim
    first = configs[0]
    sieved = next((c for c in configs if c.stage.uses_sieve), None)
    decisions: Dict[str, Any] = {
        "seed": seed.seed,
        "rng": "philox/seedsequence, stream = repetition index",
        "experiment.repetitions": repetitions,
        "experiment.repetitions_without_sieve": 1,
        "experiment.std": "sample",
        "experiment.confusion_mean_decimals": 2,
        "experiment.tie_break": "class1",
        "sieve.replacement": False,
        "sieve.n": n_total,
        "sieve.m": None if sieved is None else resolve_m(n_total, sieved.sieve_m),
        "spectral.convention": "zero_based",
        "spectral.dht_mode": first.dht_mode.value,
        "spectral.near_zero_rel": DEFAULT_CONFIG.near_zero_rel,
        "nb.likelihood": "gaussian",
        "nb.variance": "population",
        "nb.variance_floor_scale": first.nb_params.variance_floor_scale,
        "svm.kernel": "linear",
        "svm.c_cap": first.svm_params.c_cap,
        "svm.kkt_tol": first.svm_params.kkt_tol,
        "svm.max_passes": first.svm_params.max_passes,
        "dataio.normalization": ds.metadata.normalization,
    }
    return decisions


def _dataset_summary(ds: LabeledDataset) -> Dict[str, Any]:
    counts = ds.class_counts()
    summary = ds.metadata.to_dict()
    summary.update({
        "n_samples": ds.n_samples,
        "feature_dim": ds.feature_dim,
        "class_counts": {str(c.value): counts[c] for c in ClassLabel},
    })
    return summary


def evaluate(
    configs: Sequence[PipelineConfig],
    ds: LabeledDataset,
    seed: Union[RngSeed, int],
    repetitions: int = DEFAULT_CONFIG.repetitions,
    n_jobs: int = 1,
    export_masks: bool = False,
) -> EvalReport:
    """Evaluate several configurations on one dataset under one seed.

    Raises:
        EmptyClassError: a class has fewer than two samples (checked first)
        ConfigDimensionMismatchError: a configuration's sieve N differs from the data
    """
    if repetitions < 1:
        raise InvalidParamsError(f"repetitions must be >= 1, got {repetitions}")
    if not configs:
        raise InvalidParamsError("no configurations selected")
    validate_dataset(ds, min_per_class=2)
    seed = _as_seed(seed)
    for config in configs:
        config.resolve_n(ds)

    reports = tuple(_evaluate_config(c, ds, seed, repetitions, n_jobs) for c in configs)
    return EvalReport(
        subject_id=ds.metadata.subject_id,
        dataset=_dataset_summary(ds),
        seed=seed.seed,
        requested_repetitions=repetitions,
        configs=reports,
        decisions=_decisions(configs, ds, seed, repetitions),
        export_masks=export_masks,
    )


def run_pipeline(
    config: PipelineConfig,
    ds: LabeledDataset,
    seed: Union[RngSeed, int],
    repetitions: int = DEFAULT_CONFIG.repetitions,
    n_jobs: int = 1,
    export_masks: bool = False,
) -> EvalReport:
    """Evaluate one configuration (C1/C2 always run a single repetition)."""
    return evaluate([config], ds, seed, repetitions, n_jobs, export_masks)


def run_all(
    ds: LabeledDataset,
    seed: Union[RngSeed, int],
    repetitions: int = DEFAULT_CONFIG.repetitions,
    configs: Optional[Sequence[ConfigId]] = None,
    sieve_n: Optional[int] = None,
    sieve_m: Optional[int] = None,
    dht_mode: DhtMode = DhtMode.ANALYTIC,
    nb_params: Optional[NBParams] = None,
    svm_params: Optional[SVMParams] = None,
    n_jobs: int = 1,
    export_masks: bool = False,
) -> EvalReport:
    """Evaluate C1..C8 (or a subset) with shared sieve, seed and classifier settings."""
    ids = tuple(configs) if configs else tuple(ConfigId)
    pipeline = [
        PipelineConfig(
            config_id=cid,
            sieve_n=sieve_n,
            sieve_m=sieve_m,
            dht_mode=dht_mode,
            nb_params=nb_params or NBParams(),
            svm_params=svm_params or SVMParams(),
        )
        for cid in ids
    ]
    return evaluate(pipeline, ds, seed, repetitions, n_jobs, export_masks)
