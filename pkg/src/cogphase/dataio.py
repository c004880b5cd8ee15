"""Dataset interchange (CSV + JSON sidecar), dimension normalization and the
synthetic two-class generator.

CSV body: one row per sample, no header. Column 1 is the label (1 or 2), the
remaining columns are the feature values, written with 17 significant digits
so that float64 values survive a save/load round trip bit-exactly.

JSON sidecar (``<name>.json`` next to the CSV by default)::

    {
      "subject_id": "05680",
      "roi_names": ["CALC", "LIPL", "LT", "LTRIA", "LOPER", "LIPS", "LDLPFC"],
      "sampling_period_s": 0.5,
      "feature_dim": 14000,
      "n_samples": 80,
      "provenance": "converted from StarPlus trial files",
      "normalization": "unchanged"
    }

``feature_dim`` is required; ``n_samples`` is checked when present. Other keys
are not loaded into the metadata. Synthetic datasets carry a ``generator``
record, which ``is_generated`` reports.
"""

import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from cogphase.config import (
    DEFAULT_CONFIG,
    SYNTH_GAIN_RANGE,
    SYNTH_N_FEATURES,
    SYNTH_NOISE_SIGMA,
    SYNTH_SAMPLES_PER_CLASS,
    SYNTH_SCALE_DECADES,
    SYNTH_SEED,
    SYNTH_SIGN_FLIP,
)
from cogphase.core import ClassLabel, DatasetMetadata, LabeledDataset, RngSeed, validate_dataset
from cogphase.errors import (
    DatasetTooSmallError,
    InvalidParamsError,
    LabelOutOfRangeError,
    ParseError,
    SidecarMismatchError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def sidecar_path_for(csv_path: PathLike) -> Path:
    """Default sidecar location: same stem, ``.json`` suffix."""
    return Path(csv_path).with_suffix(".json")


# =============================================================================
# Save / load
# =============================================================================

def save_dataset(
    ds: LabeledDataset,
    path: PathLike,
    sidecar_path: Optional[PathLike] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> Tuple[Path, Path]:
    """Write the CSV body and its JSON sidecar.

    Args:
        ds: Dataset to write
        path: CSV destination
        sidecar_path: Sidecar destination (default: ``path`` with ``.json``)
        extra: Additional sidecar keys

    Returns:
        (csv path, sidecar path)
    """
    path = Path(path)
    sidecar = Path(sidecar_path) if sidecar_path else sidecar_path_for(path)

    body = np.column_stack([ds.label_array.astype(np.float64), ds.feature_matrix])
    fmt = ["%d"] + [DEFAULT_CONFIG.csv_float_format] * ds.feature_dim
    np.savetxt(path, body, fmt=fmt, delimiter=",")

    meta = ds.metadata.to_dict()
    meta["feature_dim"] = ds.feature_dim
    meta["n_samples"] = ds.n_samples
    meta.update(extra or {})
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    logger.info("Wrote %d x %d dataset to %s (sidecar %s)", ds.n_samples, ds.feature_dim,
                path, sidecar)
    return path, sidecar


def _parse_label(cell: str, row: int) -> ClassLabel:
    text = cell.strip()
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"label {text!r} is not a number", row, 1) from None
    if value not in (1.0, 2.0):
        raise LabelOutOfRangeError(text, row)
    return ClassLabel(int(value))


def _read_body(path: Path) -> Tuple[np.ndarray, list]:
    rows, labels = [], []
    width = None
    with path.open(newline="", encoding="utf-8") as f:
        for row_no, cells in enumerate(csv.reader(f), start=1):
            if not cells or all(not c.strip() for c in cells):
                continue
            if width is None:
                width = len(cells)
                if width < 2:
                    raise ParseError("need a label and at least one feature", row_no)
            elif len(cells) != width:
                raise ParseError(f"expected {width} columns, got {len(cells)}", row_no)

            labels.append(_parse_label(cells[0], row_no))
            values = np.empty(width - 1)
            for col, cell in enumerate(cells[1:], start=2):
                try:
                    values[col - 2] = float(cell)
                except ValueError:
                    msg = f"value {cell.strip()!r} is not a number"
                    raise ParseError(msg, row_no, col) from None
                if not np.isfinite(values[col - 2]):
                    raise ParseError(f"value {cell.strip()!r} is not finite", row_no, col)
            rows.append(values)

    if not rows:
        return np.empty((0, 0)), labels
    return np.vstack(rows), labels


def _read_sidecar(path: Path) -> Dict[str, Any]:
    try:
        meta = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SidecarMismatchError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(meta, dict):
        raise SidecarMismatchError(f"{path}: sidecar must be a JSON object")
    if "feature_dim" not in meta:
        raise SidecarMismatchError(f"{path}: sidecar has no feature_dim")
    return meta


def load_dataset(path: PathLike, sidecar_path: Optional[PathLike] = None) -> LabeledDataset:
    """Read a CSV dataset and cross-check it against its sidecar.

    A missing default sidecar is tolerated (metadata defaults are used); an
    explicitly given sidecar must exist.

    Raises:
        ParseError: unreadable cell or ragged row (row/column reported)
        LabelOutOfRangeError: label other than 1 or 2
        SidecarMismatchError: sidecar feature_dim / n_samples disagree with the body
    """
    path = Path(path)
    features, labels = _read_body(path)

    sidecar = Path(sidecar_path) if sidecar_path else sidecar_path_for(path)
    if sidecar_path is None and not sidecar.exists():
        logger.warning("No sidecar found for %s; using default metadata", path)
        meta: Dict[str, Any] = {"feature_dim": features.shape[1] if labels else 0}
    else:
        meta = _read_sidecar(sidecar)

    feature_dim = features.shape[1] if labels else 0
    if int(meta["feature_dim"]) != feature_dim:
        raise SidecarMismatchError(
            f"sidecar feature_dim {meta['feature_dim']} != CSV feature count {feature_dim}"
        )
    if "n_samples" in meta and int(meta["n_samples"]) != len(labels):
        raise SidecarMismatchError(
            f"sidecar n_samples {meta['n_samples']} != CSV rows {len(labels)}"
        )

    metadata = DatasetMetadata(
        subject_id=str(meta.get("subject_id", path.stem)),
        roi_names=tuple(meta.get("roi_names", ())),
        sampling_period_s=meta.get("sampling_period_s"),
        provenance=str(meta.get("provenance", "")),
        normalization=str(meta.get("normalization", "unchanged")),
    )
    if not labels:
        return LabeledDataset((), (), metadata)
    ds = LabeledDataset.from_matrix(features, labels, metadata)
    logger.info("Loaded %r from %s", ds, path)
    return validate_dataset(ds)


def is_generated(path: PathLike, sidecar_path: Optional[PathLike] = None) -> bool:
    """True when the dataset's sidecar carries a ``generator`` record."""
    sidecar = Path(sidecar_path) if sidecar_path else sidecar_path_for(path)
    if sidecar_path is None and not sidecar.exists():
        return False
    return "generator" in _read_sidecar(sidecar)


# =============================================================================
# Dimension normalization
# =============================================================================

def normalize_dim(ds: LabeledDataset, target_n: int) -> LabeledDataset:
    """Truncate every sample to its first ``target_n`` coordinates.

    Shorter datasets are rejected rather than padded. The action taken is
    recorded in ``metadata.normalization``.

    Raises:
        InvalidParamsError: target_n < 1
        DatasetTooSmallError: feature_dim < target_n
    """
    if target_n < 1:
        raise InvalidParamsError(f"target_n must be >= 1, got {target_n}")
    k = ds.feature_dim
    if k < target_n:
        raise DatasetTooSmallError(f"feature_dim {k} is below target N {target_n}")
    if k == target_n:
        return ds
    logger.info("Truncating %s from %d to %d features", ds.metadata.subject_id, k, target_n)
    metadata = DatasetMetadata(
        subject_id=ds.metadata.subject_id,
        roi_names=ds.metadata.roi_names,
        sampling_period_s=ds.metadata.sampling_period_s,
        provenance=ds.metadata.provenance,
        normalization=f"truncated from {k}",
    )
    return LabeledDataset.from_matrix(ds.feature_matrix[:, :target_n], ds.labels, metadata)


# =============================================================================
# Synthetic generator
# =============================================================================

@dataclass(frozen=True)
class SynthParams:
    """Parameters of the two-class quasi-periodic generator.

    Each sample is

        x(n) = scale * (sign * gain * sum_h cos(2 pi b_h (n - 1) / N + phi_{c,h}) + noise(n))

    with gain ~ U(gain_range), noise ~ N(0, noise_sigma^2) and
    phi_{2,h} = phi_{1,h} + delta_phi. ``class1_phases`` defaults to
    -delta_phi / 2 for every harmonic, which keeps both classes clear of the
    +-pi wrap.

    With ``sign_flip`` exactly half of each class (rounded down) has sign -1,
    otherwise every sign is +1. ``scale`` is 10 ** U(-scale_decades / 2,
    scale_decades / 2), so ``scale_decades=0`` gives unit scale. Neither moves
    a harmonic phase by anything but 0 or pi, while both hide the class in the
    raw intensities.
    """
    n_features: int = SYNTH_N_FEATURES
    samples_per_class: int = SYNTH_SAMPLES_PER_CLASS
    harmonics: Tuple[int, ...] = field(default=DEFAULT_CONFIG.synth_harmonics)
    delta_phi: float = float(np.pi / 2)
    class1_phases: Optional[Tuple[float, ...]] = None
    gain_range: Tuple[float, float] = SYNTH_GAIN_RANGE
    noise_sigma: float = SYNTH_NOISE_SIGMA
    sign_flip: bool = SYNTH_SIGN_FLIP
    scale_decades: float = SYNTH_SCALE_DECADES
    seed: int = SYNTH_SEED

    def __post_init__(self):
        object.__setattr__(self, "harmonics", tuple(int(b) for b in self.harmonics))
        object.__setattr__(self, "gain_range", tuple(float(g) for g in self.gain_range))
        if self.class1_phases is None:
            phases = (-self.delta_phi / 2.0,) * len(self.harmonics)
        else:
            phases = tuple(float(p) for p in self.class1_phases)
        object.__setattr__(self, "class1_phases", phases)
        self._validate()

    def _validate(self) -> None:
        if self.n_features < 2:
            raise InvalidParamsError(f"n_features must be >= 2, got {self.n_features}")
        if self.samples_per_class < 1:
            raise InvalidParamsError(
                f"samples_per_class must be >= 1, got {self.samples_per_class}"
            )
        if not self.harmonics:
            raise InvalidParamsError("at least one harmonic bin is required")
        bad = [b for b in self.harmonics if not 1 <= b < self.n_features / 2]
        if bad:
            raise InvalidParamsError(
                f"harmonic bins must lie in [1, N/2) for N={self.n_features}, got {bad}"
            )
        if len(self.class1_phases) != len(self.harmonics):
            raise InvalidParamsError(
                f"{len(self.class1_phases)} class-1 phases for {len(self.harmonics)} harmonics"
            )
        if not 0 < self.delta_phi <= np.pi:
            raise InvalidParamsError(f"delta_phi must lie in (0, pi], got {self.delta_phi}")
        if len(self.gain_range) != 2 or not 0 < self.gain_range[0] <= self.gain_range[1]:
            raise InvalidParamsError(
                f"gain_range must satisfy 0 < low <= high, got {self.gain_range}"
            )
        if self.noise_sigma < 0:
            raise InvalidParamsError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if not 0 <= self.scale_decades < 300:
            raise InvalidParamsError(
                f"scale_decades must lie in [0, 300), got {self.scale_decades}"
            )
        RngSeed(self.seed)

    def class_phases(self, label: ClassLabel) -> np.ndarray:
        phases = np.asarray(self.class1_phases)
        return phases if label is ClassLabel.CLASS1 else phases + self.delta_phi

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["harmonics"] = list(self.harmonics)
        d["class1_phases"] = list(self.class1_phases)
        d["gain_range"] = list(self.gain_range)
        return d


def generate_synthetic(p: Optional[SynthParams] = None) -> LabeledDataset:
    """Generate a balanced, phase-coded two-class dataset.

    Class1 samples come first, then Class2. After dividing out each sample's
    scale, the amplitude spectra of the two classes agree in expectation and
    only the harmonic phases differ.
    """
    p = p or SynthParams()
    rng = RngSeed(p.seed).generator()
    n_per = p.samples_per_class
    n = np.arange(p.n_features)
    bins = np.asarray(p.harmonics, dtype=np.float64)
    ramp = 2.0 * np.pi * np.outer(n, bins) / p.n_features  # (N, H)

    labels = [ClassLabel.CLASS1] * n_per + [ClassLabel.CLASS2] * n_per
    gains = rng.uniform(p.gain_range[0], p.gain_range[1], size=2 * n_per)
    noise = rng.normal(0.0, p.noise_sigma, size=(2 * n_per, p.n_features))

    signs = np.ones(2 * n_per)
    for start in (0, n_per):
        flipped = rng.permutation(n_per) < n_per // 2
        if p.sign_flip:
            signs[start:start + n_per][flipped] = -1.0
    half = p.scale_decades / 2.0
    scales = 10.0 ** rng.uniform(-half, half, size=2 * n_per)

    templates = {c: np.cos(ramp + p.class_phases(c)).sum(axis=1) for c in ClassLabel}
    signal = np.vstack([templates[lab] for lab in labels])
    features = scales[:, None] * ((signs * gains)[:, None] * signal + noise)

    metadata = DatasetMetadata(
        subject_id="synthetic",
        provenance=f"generate_synthetic(seed={p.seed})",
    )
    logger.info(
        "Generated synthetic dataset: %d x %d, harmonics=%s, delta_phi=%.4f, sigma=%g, "
        "sign_flip=%s, scale_decades=%g",
        2 * n_per, p.n_features, p.harmonics, p.delta_phi, p.noise_sigma,
        p.sign_flip, p.scale_decades,
    )
    return LabeledDataset.from_matrix(features, labels, metadata)
