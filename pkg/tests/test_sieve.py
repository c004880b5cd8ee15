"""Tests for random sieve masks."""

import numpy as np
import pytest

from cogphase.core import RngSeed, SieveMask, Signal
from cogphase.errors import DimensionMismatchError, MOutOfRangeError
from cogphase.sieve import apply_sieve, apply_sieve_matrix, resolve_m, sample_mask


def test_masks_have_exactly_m_zeros():
    rng = RngSeed(11).generator()
    for _ in range(1000):
        mask = sample_mask(100, 37, rng)
        assert mask.m == 37
        assert int((mask.gamma == 0).sum()) == 37


def test_mask_positions_are_uniform():
    """Chi-square over index frequencies stays within df + 5 * sqrt(2 df)."""
    n_total, m, draws = 50, 10, 1000
    rng = RngSeed(5).generator()
    counts = np.zeros(n_total)
    for _ in range(draws):
        counts[sample_mask(n_total, m, rng).zero_positions] += 1
    expected = draws * m / n_total
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    df = n_total - 1
    assert chi2 < df + 5 * np.sqrt(2 * df)


def test_each_index_zeroed_at_rate_m_over_n():
    """Per-index zero counts over 10^4 masks stay within 5 binomial sigmas of draws * m / N."""
    n_total, m, draws = 20, 5, 10_000
    rng = RngSeed(13).generator()
    counts = np.zeros(n_total)
    for _ in range(draws):
        counts[sample_mask(n_total, m, rng).zero_positions] += 1
    p = m / n_total
    sigma = np.sqrt(draws * p * (1 - p))
    assert counts.sum() == draws * m
    assert np.all(np.abs(counts - draws * p) <= 5 * sigma)


def test_sieve_is_idempotent():
    f = Signal(RngSeed(4).generator().normal(size=30))
    mask = sample_mask(30, 11, RngSeed(6))
    once = apply_sieve(f, mask)
    assert apply_sieve(once, mask) == once
    x = RngSeed(8).generator().normal(size=(3, 30))
    once_matrix = apply_sieve_matrix(x, mask)
    assert np.array_equal(apply_sieve_matrix(once_matrix, mask), once_matrix)


def test_same_stream_same_mask():
    assert sample_mask(64, 32, RngSeed(7, 2)) == sample_mask(64, 32, RngSeed(7, 2))
    assert sample_mask(64, 32, RngSeed(7, 2)) != sample_mask(64, 32, RngSeed(7, 3))


def test_apply_sieve_keeps_other_coordinates_bit_identical():
    values = RngSeed(1).generator().normal(size=40) * 1e-7
    mask = sample_mask(40, 13, RngSeed(2))
    g = apply_sieve(Signal(values), mask).values
    assert np.all(g[mask.zero_positions] == 0.0)
    keep = np.ones(40, dtype=bool)
    keep[mask.zero_positions] = False
    assert np.array_equal(g[keep], values[keep])


def test_sieve_extremes():
    f = Signal(np.arange(1.0, 9.0))
    assert apply_sieve(f, sample_mask(8, 0, RngSeed(0))) == f
    assert np.all(apply_sieve(f, sample_mask(8, 8, RngSeed(0))).values == 0.0)


def test_example_mask():
    f = Signal([1.0, 2.0, 3.0, 4.0])
    g = apply_sieve(f, SieveMask.from_one_based(4, [2, 4]))
    assert g.values.tolist() == [1.0, 0.0, 3.0, 0.0]


def test_matrix_sieve_shares_mask():
    x = np.ones((5, 10))
    mask = sample_mask(10, 4, RngSeed(9))
    out = apply_sieve_matrix(x, mask)
    zero_cols = np.flatnonzero(np.all(out == 0.0, axis=0))
    assert zero_cols.tolist() == mask.zero_positions.tolist()
    assert np.all(x == 1.0)


def test_sieve_errors():
    with pytest.raises(MOutOfRangeError):
        sample_mask(10, 11, RngSeed(0))
    with pytest.raises(MOutOfRangeError):
        sample_mask(10, -1, RngSeed(0))
    with pytest.raises(DimensionMismatchError):
        apply_sieve(Signal(np.ones(5)), sample_mask(6, 2, RngSeed(0)))
    with pytest.raises(MOutOfRangeError):
        resolve_m(10, 12)


def test_default_m_is_half():
    assert resolve_m(14000) == 7000
    assert resolve_m(7) == 3
    assert resolve_m(10, 4) == 4
