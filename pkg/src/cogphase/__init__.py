"""cogphase - random-sieve phase features for cognitive task decoding."""

__version__ = "0.1.0"

from cogphase.config import (
    DEFAULT_REPETITIONS,
    STARPLUS_SIEVE_N,
    CogPhaseConfig,
    DEFAULT_CONFIG,
    get_config,
)
from cogphase.errors import (
    CogPhaseError,
    DatasetError,
    DimensionMismatchError,
    NonFiniteValueError,
    EmptyClassError,
    DatasetTooSmallError,
    ConfigDimensionMismatchError,
    InvalidParamsError,
    MOutOfRangeError,
    NotConvergedError,
    ConvergenceWarning,
    DataFileError,
    ParseError,
    LabelOutOfRangeError,
    SidecarMismatchError,
)

# Domain types
from cogphase.core import (
    ClassLabel,
    Signal,
    SieveMask,
    IndexConvention,
    Spectrum,
    PhaseVector,
    DatasetMetadata,
    LabeledDataset,
    RngSeed,
    validate_dataset,
)

# Feature stages
from cogphase.sieve import sample_mask, apply_sieve, apply_sieve_matrix
from cogphase.spectral import (
    DhtMode,
    HilbertMultiplier,
    dft,
    naive_dft,
    phase,
    hilbert,
    dht_phase,
)

# Classifiers
from cogphase.classifiers import (
    ClassifierType,
    get_classifier,
    NBParams,
    NBModel,
    nb_train,
    nb_predict,
    SVMParams,
    SVMModel,
    svm_train,
    svm_predict,
)

# Evaluation
from cogphase.experiment import (
    ConfigId,
    FeatureStage,
    PipelineConfig,
    FoldResult,
    ConfusionMatrix,
    RepetitionResult,
    ConfigReport,
    EvalReport,
    transform_features,
    loocv,
    run_pipeline,
    run_all,
)
from cogphase.report import (
    format_summary_table,
    format_confusion,
    write_report_json,
    summarize_subjects,
)

# Data files
from cogphase.dataio import (
    SynthParams,
    save_dataset,
    is_generated,
    load_dataset,
    normalize_dim,
    generate_synthetic,
)

__all__ = [
    "__version__",
    # Config
    "DEFAULT_REPETITIONS",
    "STARPLUS_SIEVE_N",
    "CogPhaseConfig",
    "DEFAULT_CONFIG",
    "get_config",
    # Errors
    "CogPhaseError",
    "DatasetError",
    "DimensionMismatchError",
    "NonFiniteValueError",
    "EmptyClassError",
    "DatasetTooSmallError",
    "ConfigDimensionMismatchError",
    "InvalidParamsError",
    "MOutOfRangeError",
    "NotConvergedError",
    "ConvergenceWarning",
    "DataFileError",
    "ParseError",
    "LabelOutOfRangeError",
    "SidecarMismatchError",
    # Core
    "ClassLabel",
    "Signal",
    "SieveMask",
    "IndexConvention",
    "Spectrum",
    "PhaseVector",
    "DatasetMetadata",
    "LabeledDataset",
    "RngSeed",
    "validate_dataset",
    # Sieve / spectral
    "sample_mask",
    "apply_sieve",
    "apply_sieve_matrix",
    "DhtMode",
    "HilbertMultiplier",
    "dft",
    "naive_dft",
    "phase",
    "hilbert",
    "dht_phase",
    # Classifiers
    "ClassifierType",
    "get_classifier",
    "NBParams",
    "NBModel",
    "nb_train",
    "nb_predict",
    "SVMParams",
    "SVMModel",
    "svm_train",
    "svm_predict",
    # Evaluation
    "ConfigId",
    "FeatureStage",
    "PipelineConfig",
    "FoldResult",
    "ConfusionMatrix",
    "RepetitionResult",
    "ConfigReport",
    "EvalReport",
    "transform_features",
    "loocv",
    "run_pipeline",
    "run_all",
    "format_summary_table",
    "format_confusion",
    "write_report_json",
    "summarize_subjects",
    # Data files
    "SynthParams",
    "save_dataset",
    "is_generated",
    "load_dataset",
    "normalize_dim",
    "generate_synthetic",
]
