"""Random sieve function S_gamma.

A sieve zeroes m randomly chosen coordinates of a feature vector:

    g(n) = f(n) * gamma(n),  gamma(n) = 0 if n in X, else 1

where X holds m distinct positions drawn uniformly without replacement.
Sampling without replacement gives exactly m zeros; every report records
this as ``sieve.replacement=false``.

One mask is drawn per repetition and shared by every training and test
sample in that repetition, so all samples live in the same feature space.
"""

from typing import Optional, Union

import numpy as np

from cogphase.config import DEFAULT_CONFIG
from cogphase.core import RngSeed, SieveMask, Signal
from cogphase.errors import DimensionMismatchError, MOutOfRangeError

RngLike = Union[np.random.Generator, RngSeed]


def resolve_m(n_total: int, m: Optional[int] = None) -> int:
    """Sieve size to use: ``m`` if given, else floor(N / 2)."""
    m = DEFAULT_CONFIG.default_sieve_m(n_total) if m is None else int(m)
    if not 0 <= m <= n_total:
        raise MOutOfRangeError(f"sieve m must be in [0, {n_total}], got {m}")
    return m


def sample_mask(n_total: int, m: int, rng: RngLike) -> SieveMask:
    """Draw a sieve mask with exactly ``m`` zeros.

    Args:
        n_total: Signal length N
        m: Number of positions to zero, 0 <= m <= N
        rng: numpy Generator, or an RngSeed whose stream is used

    Returns:
        SieveMask whose zero set is uniform over all m-subsets of [1, N]

    Raises:
        MOutOfRangeError: m outside [0, N]
    """
    if n_total < 1:
        raise MOutOfRangeError(f"n_total must be positive, got {n_total}")
    if not 0 <= m <= n_total:
        raise MOutOfRangeError(f"sieve m must be in [0, {n_total}], got {m}")
    if isinstance(rng, RngSeed):
        rng = rng.generator()
    positions = rng.choice(n_total, size=m, replace=False)
    return SieveMask(n_total, positions)


def apply_sieve(f: Signal, mask: SieveMask) -> Signal:
    """Coordinate-wise product g = f * gamma.

    Unsieved coordinates are copied, not multiplied, so they stay
    bit-identical to the input.

    Raises:
        DimensionMismatchError: len(f) != mask.n_total
    """
    if f.length != mask.n_total:
        raise DimensionMismatchError(
            f"signal length {f.length} != sieve N {mask.n_total}"
        )
    g = f.values.copy()
    g[mask.zero_positions] = 0.0
    return Signal(g)


def apply_sieve_matrix(features: np.ndarray, mask: SieveMask) -> np.ndarray:
    """Sieve every row of an (n_samples, N) array with the same mask."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape[-1] != mask.n_total:
        raise DimensionMismatchError(
            f"feature length {features.shape[-1]} != sieve N {mask.n_total}"
        )
    out = features.copy()
    out[..., mask.zero_positions] = 0.0
    return out
