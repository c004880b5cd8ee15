"""Tests for DFT, Hilbert transform and phase extraction."""

import numpy as np
import pytest

from cogphase.core import RngSeed, Signal
from cogphase.errors import DimensionMismatchError
from cogphase.spectral import (
    DhtMode,
    HilbertMultiplier,
    count_near_zero,
    dft,
    dft_phase_array,
    dht_phase,
    hilbert,
    hilbert_complex,
    naive_dft,
    phase,
    wrap_angles,
)


def _one_based(spectrum):
    n_total = spectrum.length
    return spectrum.bins[np.arange(1, n_total + 1) % n_total]


def _theta(n_total):
    return 2 * np.pi * np.arange(n_total) / n_total


# =============================================================================
# DFT
# =============================================================================

def test_dft_constant_signal():
    n_total, c = 8, 2.5
    spec = dft(Signal(np.full(n_total, c)))
    for k in range(1, n_total):
        assert abs(spec.one_based_bin(k)) < 1e-12
    assert abs(spec.one_based_bin(n_total) - n_total * c) < 1e-12


def test_dft_delta():
    spec = dft(Signal([1.0, 0.0, 0.0, 0.0]))
    assert np.allclose(spec.bins, 1.0, atol=1e-15)


@pytest.mark.parametrize("n_total", [4, 7, 64, 128, 1024])
def test_dft_matches_direct_sum(n_total):
    rng = RngSeed(n_total).generator()
    for _ in range(20):
        g = rng.normal(size=n_total)
        err = np.max(np.abs(_one_based(dft(Signal(g))) - naive_dft(g)))
        assert err < 1e-9 * n_total


def test_parseval_and_linearity():
    rng = RngSeed(3).generator()
    x, y = rng.normal(size=(2, 4096))
    big_x = dft(Signal(x)).bins
    energy = np.sum(x ** 2)
    assert abs(energy - np.sum(np.abs(big_x) ** 2) / x.size) < 1e-9 * energy

    combo = dft(Signal(2.0 * x - 0.5 * y)).bins
    assert np.max(np.abs(combo - (2.0 * big_x - 0.5 * dft(Signal(y)).bins))) < 1e-9


# =============================================================================
# Phase
# =============================================================================

def test_phase_examples():
    assert np.all(phase(np.array([1 + 0j, 1 + 0j])).angles == 0.0)
    assert abs(phase(np.array([1j])).angles[0] - np.pi / 2) < 1e-15
    assert phase(np.array([0j])).angles[0] == 0.0


def test_phase_range_excludes_minus_pi():
    angles = wrap_angles(np.array([complex(-1.0, -0.0), complex(-1.0, 0.0)]))
    assert np.all(angles == np.pi)


def test_phase_of_sine_fundamental():
    n_total = 32
    spec = dft(Signal(np.sin(_theta(n_total))))
    angle = np.angle(spec.one_based_bin(1))
    assert abs(angle + np.pi / 2) < 1e-9


# =============================================================================
# Hilbert transform
# =============================================================================

@pytest.mark.parametrize("n_total", [16, 64, 1024])
def test_hilbert_of_cosine_is_sine(n_total):
    theta = _theta(n_total)
    h = hilbert(Signal(np.cos(theta))).values
    assert np.max(np.abs(h - np.sin(theta))) < 1e-9


@pytest.mark.parametrize("n_total", [63, 64])
def test_double_hilbert_negates_dc_and_nyquist_free_part(n_total):
    g = RngSeed(n_total).generator().normal(size=n_total)
    n = np.arange(n_total)
    nyquist = np.zeros(n_total)
    if n_total % 2 == 0:
        alternating = (-1.0) ** n
        nyquist = np.sum(g * alternating) / n_total * alternating
    expected = -(g - g.mean() - nyquist)
    assert np.max(np.abs(hilbert(hilbert(Signal(g))).values - expected)) < 1e-9


def test_hilbert_constant_is_zero():
    assert np.max(np.abs(hilbert(Signal(np.full(10, 3.0))).values)) < 1e-12


def test_hilbert_real_output_and_energy():
    rng = RngSeed(8).generator()
    for n_total in (17, 256):
        g = rng.normal(size=n_total)
        raw = hilbert_complex(g)
        assert np.max(np.abs(raw.imag)) < 1e-9 * np.linalg.norm(g)
        assert np.sum(raw.real ** 2) <= np.sum(g ** 2)


def test_hilbert_needs_two_samples():
    with pytest.raises(DimensionMismatchError):
        hilbert(Signal([1.0]))


@pytest.mark.parametrize("n_total", [7, 8])
def test_multiplier_structure(n_total):
    factors = HilbertMultiplier.for_length(n_total).factors
    assert set(np.abs(factors).tolist()) <= {0.0, 1.0}
    assert factors[0] == 0
    for k in range(1, n_total):
        assert factors[k] == np.conj(factors[n_total - k]) or (
            n_total % 2 == 0 and k == n_total // 2
        )
    if n_total % 2 == 0:
        assert factors[n_total // 2] == 0
    assert factors[1] == -1j


def test_analytic_phase_of_cosine():
    theta = _theta(64)
    angles = dht_phase(Signal(np.cos(theta))).angles
    assert np.max(np.abs(np.exp(1j * angles) - np.exp(1j * theta))) < 1e-9


def test_literal_phase_is_zero_or_pi():
    g = RngSeed(4).generator().normal(size=32)
    angles = dht_phase(Signal(g), DhtMode.LITERAL).angles
    expected = np.where(hilbert(Signal(g)).values < 0, np.pi, 0.0)
    assert np.array_equal(angles, expected)
    assert wrap_angles(np.array([1.0, -1.0, 1.0, -1.0])).tolist() == [0.0, np.pi, 0.0, np.pi]


def test_analytic_phase_of_zero_vector():
    assert np.all(dht_phase(Signal(np.zeros(16))).angles == 0.0)


def test_identical_signals_identical_features():
    g = RngSeed(6).generator().normal(size=(2, 1))[:, 0]
    x = np.vstack([np.arange(10.0) + g[0], np.arange(10.0) + g[0]])
    phases = dft_phase_array(x)
    assert np.array_equal(phases[0], phases[1])


def test_count_near_zero():
    g = np.full(16, 2.0)
    assert count_near_zero(dft(Signal(g)).bins, g) == 15
    assert count_near_zero(np.zeros(4), np.zeros(4)) == 0
