"""Fourier and Hilbert transforms and phase extraction.

Bin convention
--------------
The forward sum is written with 1-based k, G(k) = sum_n g(n) e^{-i 2 pi k (n-1) / N},
which puts DC at k = N. Here the standard 0-based DFT is computed (DC at bin 0),
so G(k) is stored at bin ``k mod N``; ``Spectrum.one_based_bin`` does the lookup.
Both classifiers are invariant to a fixed feature permutation, so the
convention cannot change accuracy.

Hilbert transform
-----------------
The discrete Hilbert transform multiplies the spectrum by

    sigma_H = -i  (positive-frequency bins)
              +i  (negative-frequency bins)
               0  (DC, and Nyquist when N is even)

and inverts. Bins k and N - k get conjugate factors, so real input gives real
output up to rounding.

Phase features for the Hilbert branch come in two modes:

- ``analytic``: arg(g + i * H{g}), the instantaneous phase (default)
- ``literal``:  arg(H{g}) of the real transform, i.e. 0 or pi per coordinate

All functions accept either a :class:`~cogphase.core.Signal` or an array;
array inputs are transformed along the last axis so whole feature matrices
can be processed at once.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy import fft as sp_fft

from cogphase.config import DEFAULT_CONFIG
from cogphase.core import PhaseVector, Signal, Spectrum
from cogphase.errors import DimensionMismatchError

SignalLike = Union[Signal, np.ndarray]


class DhtMode(Enum):
    """How phase is read off the Hilbert transform."""
    ANALYTIC = "analytic"
    LITERAL = "literal"


def _values(g: SignalLike) -> np.ndarray:
    if isinstance(g, Signal):
        return g.values
    return np.asarray(g, dtype=np.float64)


def _check_length(values: np.ndarray, minimum: int, op: str) -> None:
    if values.shape[-1] < minimum:
        raise DimensionMismatchError(
            f"{op} needs length >= {minimum}, got {values.shape[-1]}"
        )


# =============================================================================
# Fourier transform
# =============================================================================

def dft(g: SignalLike) -> Spectrum:
    """Discrete Fourier transform of one signal (0-based storage, DC at bin 0)."""
    values = _values(g)
    _check_length(values, 1, "dft")
    return Spectrum(sp_fft.fft(values))


def naive_dft(g: SignalLike) -> np.ndarray:
    """Direct O(N^2) evaluation of the forward sum with 1-based k.

    Returns an array whose entry ``k - 1`` is G(k) for k = 1..N, i.e. the
    last entry is the DC term. Reference implementation for tests and audits.
    """
    values = _values(g)
    n_total = values.shape[-1]
    n = np.arange(n_total)
    k = np.arange(1, n_total + 1)
    kernel = np.exp(-2j * np.pi * np.outer(k, n) / n_total)
    return kernel @ values


def wrap_angles(z: np.ndarray) -> np.ndarray:
    """arg(z) in (-pi, pi] with arg(0) := 0."""
    z = np.asarray(z)
    angles = np.angle(z)
    angles = np.where(angles <= -np.pi, np.pi, angles)
    return np.where(z == 0, 0.0, angles)


def phase(s: Union[Spectrum, np.ndarray]) -> PhaseVector:
    """Angle of every bin of a spectrum."""
    bins = s.bins if isinstance(s, Spectrum) else np.asarray(s)
    return PhaseVector(wrap_angles(bins))


# =============================================================================
# Hilbert transform
# =============================================================================

@dataclass(frozen=True, eq=False)
class HilbertMultiplier:
    """Per-bin factors of sigma_H for a length-N spectrum (0-based bins)."""
    n_total: int
    factors: np.ndarray

    @classmethod
    def for_length(cls, n_total: int) -> "HilbertMultiplier":
        if n_total < 1:
            raise DimensionMismatchError(f"length must be positive, got {n_total}")
        factors = np.zeros(n_total, dtype=np.complex128)
        half = (n_total + 1) // 2  # bins 1..half-1 are positive frequencies
        factors[1:half] = -1j
        factors[n_total // 2 + 1:] = 1j
        factors.setflags(write=False)
        return cls(n_total, factors)


def hilbert_complex(g: SignalLike) -> np.ndarray:
    """IDFT{DFT(g) * sigma_H} before discarding the imaginary residue."""
    values = _values(g)
    _check_length(values, 2, "hilbert")
    multiplier = HilbertMultiplier.for_length(values.shape[-1])
    return sp_fft.ifft(sp_fft.fft(values, axis=-1) * multiplier.factors, axis=-1)


def hilbert_array(values: np.ndarray) -> np.ndarray:
    """Real Hilbert transform along the last axis of an array."""
    return hilbert_complex(values).real


def hilbert(g: SignalLike) -> Signal:
    """Discrete Hilbert transform of a real signal (real part returned)."""
    return Signal(hilbert_array(_values(g)))


def dht_source_array(values: np.ndarray, mode: DhtMode = DhtMode.ANALYTIC) -> np.ndarray:
    """Complex values whose angles are the Hilbert-branch features.

    ``analytic`` gives g + i * H{g}; ``literal`` gives H{g} itself.
    """
    values = np.asarray(values, dtype=np.float64)
    transformed = hilbert_array(values)
    if DhtMode(mode) is DhtMode.ANALYTIC:
        return values + 1j * transformed
    return transformed.astype(np.complex128)


def dht_phase_array(values: np.ndarray, mode: DhtMode = DhtMode.ANALYTIC) -> np.ndarray:
    """Hilbert-branch phase features along the last axis of an array."""
    return wrap_angles(dht_source_array(values, mode))


def dht_phase(g: SignalLike, mode: DhtMode = DhtMode.ANALYTIC) -> PhaseVector:
    """Phase of the Hilbert transform in the chosen mode."""
    values = _values(g)
    _check_length(values, 2, "dht_phase")
    return PhaseVector(dht_phase_array(values, mode))


def dft_array(values: np.ndarray) -> np.ndarray:
    """DFT along the last axis of an array (0-based bins)."""
    values = np.asarray(values, dtype=np.float64)
    _check_length(values, 1, "dft")
    return sp_fft.fft(values, axis=-1)


def dft_phase_array(values: np.ndarray) -> np.ndarray:
    """arg(DFT) along the last axis of an array."""
    return wrap_angles(dft_array(values))


# =============================================================================
# Audits
# =============================================================================

def count_near_zero(
    coefficients: np.ndarray,
    reference: np.ndarray,
    rel: float = DEFAULT_CONFIG.near_zero_rel,
) -> int:
    """Count coefficients with |c| < rel * ||reference||, row by row.

    ``coefficients`` and ``reference`` are matched row-wise when 2-D.
    """
    coefficients = np.atleast_2d(coefficients)
    norms = np.linalg.norm(np.atleast_2d(reference), axis=-1, keepdims=True)
    return int(np.count_nonzero(np.abs(coefficients) < rel * norms))
