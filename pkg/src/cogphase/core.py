"""Domain types shared by every stage of the pipeline.

Index convention: storage is 0-based throughout. Anything that crosses the
API boundary towards users (file formats, CLI messages, exported masks) uses
1-based indices (``SieveMask.zero_indices``, ``SieveMask.from_one_based``,
``Spectrum.one_based_bin``).

All types are immutable after construction; numpy arrays held by them are
flagged read-only so they can be shared across worker threads.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from cogphase.errors import (
    DimensionMismatchError,
    EmptyClassError,
    InvalidParamsError,
    NonFiniteValueError,
)

_UINT64_MAX = 2**64 - 1


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


# =============================================================================
# Labels
# =============================================================================

class ClassLabel(Enum):
    """The two cognitive tasks."""
    CLASS1 = 1
    CLASS2 = 2

    @property
    def display_name(self) -> str:
        return "picture" if self is ClassLabel.CLASS1 else "sentence"

    @property
    def sign(self) -> int:
        """SVM target: +1 for Class1, -1 for Class2."""
        return 1 if self is ClassLabel.CLASS1 else -1

    @property
    def index(self) -> int:
        """0-based row/column in a confusion matrix."""
        return self.value - 1

    @classmethod
    def from_value(cls, value: int) -> "ClassLabel":
        return cls(int(value))


# =============================================================================
# Signals and transforms
# =============================================================================

@dataclass(frozen=True, eq=False)
class Signal:
    """One sample's real feature sequence f(n), n = 1..N."""
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, np.float64)
        if arr.ndim != 1:
            raise DimensionMismatchError(f"Signal must be 1-D, got shape {arr.shape}")
        if arr.size < 1:
            raise DimensionMismatchError("Signal must have length >= 1")
        if not np.all(np.isfinite(arr)):
            bad = np.flatnonzero(~np.isfinite(arr)) + 1
            raise NonFiniteValueError(
                f"Signal has non-finite values at positions {bad[:10].tolist()}"
            )
        object.__setattr__(self, "values", arr)

    @property
    def length(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"Signal(N={self.length})"


@dataclass(frozen=True, eq=False)
class SieveMask:
    """Binary sieve vector gamma(n) and its zero-position set X(j).

    ``zero_positions`` holds sorted 0-based positions; ``zero_indices`` gives
    the same set 1-based.
    """
    n_total: int
    zero_positions: np.ndarray

    def __post_init__(self):
        if self.n_total < 1:
            raise InvalidParamsError(f"n_total must be positive, got {self.n_total}")
        pos = np.unique(np.asarray(self.zero_positions, dtype=np.int64))
        if pos.size != np.asarray(self.zero_positions).size:
            raise InvalidParamsError("zero positions must be distinct")
        if pos.size and (pos[0] < 0 or pos[-1] >= self.n_total):
            raise InvalidParamsError(f"zero positions must lie in [0, {self.n_total - 1}]")
        pos.setflags(write=False)
        object.__setattr__(self, "zero_positions", pos)

    @classmethod
    def from_one_based(cls, n_total: int, zero_indices: Sequence[int]) -> "SieveMask":
        return cls(n_total, np.asarray(list(zero_indices), dtype=np.int64) - 1)

    @property
    def m(self) -> int:
        return int(self.zero_positions.size)

    @property
    def zero_indices(self) -> Tuple[int, ...]:
        """1-based zero indices, ascending."""
        return tuple(int(i) + 1 for i in self.zero_positions)

    @cached_property
    def gamma(self) -> np.ndarray:
        g = np.ones(self.n_total, dtype=np.float64)
        g[self.zero_positions] = 0.0
        g.setflags(write=False)
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, SieveMask):
            return NotImplemented
        return self.n_total == other.n_total and np.array_equal(
            self.zero_positions, other.zero_positions
        )

    def __hash__(self) -> int:
        return hash((self.n_total, self.zero_positions.tobytes()))

    def __repr__(self) -> str:
        return f"SieveMask(N={self.n_total}, m={self.m})"


class IndexConvention(Enum):
    """How stored spectrum bins map to the 1-based k = 1..N of the forward sum."""
    ZERO_BASED = "zero_based"  # bin j holds G(k) for k = j, with G(N) stored at bin 0


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex spectrum G(k) or H(k), stored 0-based (DC at bin 0)."""
    bins: np.ndarray
    index_convention: IndexConvention = IndexConvention.ZERO_BASED

    def __post_init__(self):
        object.__setattr__(self, "bins", _frozen_array(self.bins, np.complex128))

    @property
    def length(self) -> int:
        return int(self.bins.size)

    def one_based_bin(self, k: int) -> complex:
        """G(k) for the 1-based k = 1..N of the forward sum (k = N is DC)."""
        if not 1 <= k <= self.length:
            raise IndexError(f"k must be in [1, {self.length}], got {k}")
        return complex(self.bins[k % self.length])


@dataclass(frozen=True, eq=False)
class PhaseVector:
    """Angles in (-pi, pi]."""
    angles: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "angles", _frozen_array(self.angles, np.float64))

    @property
    def length(self) -> int:
        return int(self.angles.size)

    def as_signal(self) -> Signal:
        """Phase features as a plain real vector for the classifiers."""
        return Signal(self.angles)


# =============================================================================
# Datasets
# =============================================================================

@dataclass(frozen=True)
class DatasetMetadata:
    """Provenance carried alongside the samples."""
    subject_id: str = "unknown"
    roi_names: Tuple[str, ...] = ()
    sampling_period_s: Optional[float] = None
    provenance: str = ""
    normalization: str = "unchanged"

    def to_dict(self) -> Dict:
        return {
            "subject_id": self.subject_id,
            "roi_names": list(self.roi_names),
            "sampling_period_s": self.sampling_period_s,
            "provenance": self.provenance,
            "normalization": self.normalization,
        }


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Labelled samples plus provenance.

    Construction does not enforce the dataset invariants; call
    :func:`validate_dataset` to get them checked with per-sample reports.
    """
    signals: Tuple[Signal, ...]
    labels: Tuple[ClassLabel, ...]
    metadata: DatasetMetadata = field(default_factory=DatasetMetadata)

    def __post_init__(self):
        object.__setattr__(self, "signals", tuple(self.signals))
        object.__setattr__(self, "labels", tuple(ClassLabel(lab) for lab in self.labels))
        if len(self.signals) != len(self.labels):
            raise DimensionMismatchError(
                f"{len(self.signals)} signals but {len(self.labels)} labels"
            )

    @classmethod
    def from_matrix(
        cls,
        features: np.ndarray,
        labels: Sequence,
        metadata: Optional[DatasetMetadata] = None,
    ) -> "LabeledDataset":
        """Build from an (n_samples, N) array and labels (ClassLabel or 1/2)."""
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2:
            raise DimensionMismatchError(f"features must be 2-D, got shape {features.shape}")
        return cls(
            signals=tuple(Signal(row) for row in features),
            labels=tuple(ClassLabel.from_value(getattr(lab, "value", lab)) for lab in labels),
            metadata=metadata or DatasetMetadata(),
        )

    @property
    def n_samples(self) -> int:
        return len(self.signals)

    @property
    def feature_dim(self) -> int:
        """Common N (length of the first signal)."""
        return self.signals[0].length if self.signals else 0

    @property
    def samples(self) -> List[Tuple[Signal, ClassLabel]]:
        return list(zip(self.signals, self.labels))

    def __iter__(self) -> Iterator[Tuple[Signal, ClassLabel]]:
        return iter(zip(self.signals, self.labels))

    def __len__(self) -> int:
        return self.n_samples

    @cached_property
    def feature_matrix(self) -> np.ndarray:
        """(n_samples, N) float64 array, read-only."""
        mat = np.vstack([s.values for s in self.signals]) if self.signals else np.empty((0, 0))
        mat.setflags(write=False)
        return mat

    @cached_property
    def label_array(self) -> np.ndarray:
        """Labels as an int array of 1/2."""
        arr = np.array([lab.value for lab in self.labels], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def class_counts(self) -> Dict[ClassLabel, int]:
        return {c: sum(1 for lab in self.labels if lab is c) for c in ClassLabel}

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        return LabeledDataset(
            signals=tuple(self.signals[i] for i in indices),
            labels=tuple(self.labels[i] for i in indices),
            metadata=self.metadata,
        )

    def with_features(self, features: np.ndarray) -> "LabeledDataset":
        """Same labels and metadata, new feature rows."""
        return LabeledDataset.from_matrix(features, self.labels, self.metadata)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.metadata == other.metadata
            and len(self.signals) == len(other.signals)
            and all(a == b for a, b in zip(self.signals, other.signals))
        )

    def __repr__(self) -> str:
        counts = self.class_counts()
        return (
            f"LabeledDataset(subject={self.metadata.subject_id!r}, n={self.n_samples}, "
            f"N={self.feature_dim}, class1={counts[ClassLabel.CLASS1]}, "
            f"class2={counts[ClassLabel.CLASS2]})"
        )


def validate_dataset(ds: LabeledDataset, min_per_class: int = 1) -> LabeledDataset:
    """Check the dataset invariants and return the dataset unchanged.

    Every violation is collected before raising, and the raised error lists
    them in ``violations``.

    Raises:
        DimensionMismatchError: signals of unequal length
        NonFiniteValueError: NaN/Inf in a signal
        EmptyClassError: fewer than ``min_per_class`` samples in a class
    """
    if ds.n_samples == 0:
        raise EmptyClassError("dataset has no samples", ["dataset is empty"])

    lengths = [s.length for s in ds.signals]
    expected = max(set(lengths), key=lengths.count)
    length_violations = [
        f"sample {i + 1}: length {n} != {expected}"
        for i, n in enumerate(lengths)
        if n != expected
    ]
    finite_violations = [
        f"sample {i + 1}: non-finite values"
        for i, s in enumerate(ds.signals)
        if not np.all(np.isfinite(s.values))
    ]
    counts = ds.class_counts()
    class_violations = [
        f"class {c.value} ({c.display_name}): {n} samples, need >= {min_per_class}"
        for c, n in counts.items()
        if n < min_per_class
    ]

    if length_violations:
        raise DimensionMismatchError(
            f"{len(length_violations)} sample(s) differ from feature_dim {expected}",
            length_violations,
        )
    if finite_violations:
        raise NonFiniteValueError(
            f"{len(finite_violations)} sample(s) contain NaN/Inf", finite_violations
        )
    if class_violations:
        raise EmptyClassError("; ".join(class_violations), class_violations)
    return ds


# =============================================================================
# Randomness
# =============================================================================

@dataclass(frozen=True)
class RngSeed:
    """Seed for a reproducible random stream.

    Streams are numpy ``Philox`` (counter-based) generators keyed through
    ``SeedSequence(seed, spawn_key=(stream_id,))``; both are specified
    independently of platform and thread scheduling.
    """
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name, val in (("seed", self.seed), ("stream_id", self.stream_id)):
            if not 0 <= int(val) <= _UINT64_MAX:
                raise InvalidParamsError(f"{name} must be a 64-bit unsigned integer, got {val}")

    def derive(self, stream_id: int) -> "RngSeed":
        """Same seed, different sub-stream (e.g. repetition index)."""
        return RngSeed(self.seed, stream_id)

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(seq))
