import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from linetransient.sim import TimeSeries
from linetransient.spectrum import amplitude_spectrum, analyze_channel, fft, next_pow2


def dft(x):
    """Direct O(N^2) transform, one exponential per (k, n) pair."""
    x = np.asarray(x, dtype=complex)
    n = x.size
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ x


def sine_series(freq, amp=1.0, fs=10_000.0, duration=0.5):
    n = int(round(duration * fs)) + 1
    t = np.arange(n) / fs
    return TimeSeries(t, {"i": amp * np.sin(2 * np.pi * freq * t)}, 1 / fs, 0.0)


def test_constant_sequence():
    out = fft(np.ones(8))
    assert abs(out[0] - 8) < 1e-12
    assert np.max(np.abs(out[1:])) < 1e-12


def test_impulse():
    x = np.zeros(8)
    x[0] = 1
    assert np.max(np.abs(fft(x) - 1)) < 1e-12


def test_matches_direct_dft(rng):
    x = rng.standard_normal(1024)
    assert np.max(np.abs(fft(x) - dft(x))) < 1e-9 * np.linalg.norm(x)


def test_complex_input_matches_direct_dft(rng):
    x = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    assert np.max(np.abs(fft(x) - dft(x))) < 1e-10 * np.linalg.norm(x)


@pytest.mark.parametrize("n", [0, 3, 100, 5001])
def test_rejects_non_power_of_two(n):
    with pytest.raises(ValueError, match="power of two"):
        fft(np.zeros(n))


def test_next_pow2():
    assert [next_pow2(n) for n in (1, 2, 3, 1024, 1025, 5001)] == [1, 2, 4, 1024, 2048, 8192]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10).flatmap(lambda e: arrays(np.float64, 2**e, elements=st.floats(-1e6, 1e6))))
def test_parseval(x):
    energy = np.sum(x**2)
    spec = np.sum(np.abs(fft(x)) ** 2) / x.size
    assert spec == pytest.approx(energy, rel=1e-9, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 9),
    st.floats(-10, 10),
    st.floats(-10, 10),
    st.integers(0, 2**32 - 1),
)
def test_linearity(e, a, b, seed):
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, 2**e))
    lhs = fft(a * x + b * y)
    rhs = a * fft(x) + b * fft(y)
    scale = max(np.max(np.abs(lhs)), 1e-300)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * scale + 1e-12


@pytest.mark.parametrize("m", [1, 7, 100, 511])
def test_on_bin_sinusoid_amplitude(m):
    n, amp = 1024, 3.7
    x = amp * np.cos(2 * np.pi * m * np.arange(n) / n + 0.3)
    freqs, mags, n_fft = amplitude_spectrum(x, fs=float(n))
    assert n_fft == n
    assert mags[m] == pytest.approx(amp, rel=1e-6)
    assert freqs[m] == m


def test_spectrum_shape_invariants(peak_series):
    sp = analyze_channel(peak_series, "i", (0.0, 0.5))
    assert sp.n_samples == 5001 and sp.n_fft == 8192
    assert sp.freqs.size == sp.magnitudes.size == 8192 // 2 + 1
    assert sp.resolution * (sp.freqs.size - 1) == pytest.approx(5000.0, rel=1e-9)
    assert np.all(sp.magnitudes >= 0)
    assert sp.dominant[1] >= sp.secondary[1]


def test_reference_peak_spectrum(peak_series):
    sp = analyze_channel(peak_series, "i", (0.0, 0.5))
    assert abs(sp.dominant[0] - 60.0) <= sp.resolution
    assert 195 <= sp.secondary[0] <= 215


def test_zero_crossing_weaker_secondary(peak_series, zero_series):
    peak = analyze_channel(peak_series, "i", (0.0, 0.5))
    zero = analyze_channel(zero_series, "i", (0.0, 0.5))
    assert zero.secondary[1] < peak.secondary[1]
    assert abs(zero.dominant[0] - 60.0) <= zero.resolution


def test_pure_sine_has_only_leakage():
    sp = analyze_channel(sine_series(60.0, amp=2.0), "i")
    assert abs(sp.dominant[0] - 60.0) <= sp.resolution
    assert sp.secondary[1] < 0.05 * sp.dominant[1]


def test_dc_is_ignored():
    # power-of-two record: no padding, so the offset stays in bin 0
    n, fs = 4096, 4096.0
    t = np.arange(n) / fs
    s = TimeSeries(t, {"i": 10.0 + np.sin(2 * np.pi * 150.0 * t)}, 1 / fs, 0.0)
    sp = analyze_channel(s, "i")
    assert sp.magnitudes[0] == pytest.approx(10.0, rel=1e-12)
    assert sp.dominant == (150.0, pytest.approx(1.0, rel=1e-9))


@pytest.mark.parametrize("k", [0.5, 3.0, 1e4])
def test_scaling_moves_no_peaks(peak_series, k):
    base = analyze_channel(peak_series, "i")
    scaled_series = TimeSeries(peak_series.t, {"i": k * peak_series["i"]}, peak_series.dt, 0.0)
    sp = analyze_channel(scaled_series, "i")
    assert sp.dominant[0] == base.dominant[0] and sp.secondary[0] == base.secondary[0]
    assert sp.dominant[1] == pytest.approx(k * base.dominant[1], rel=1e-12)
    assert sp.secondary[1] == pytest.approx(k * base.secondary[1], rel=1e-12)


def test_exclusion_band_is_configurable(peak_series):
    wide = analyze_channel(peak_series, "i", exclusion_halfwidth=200.0)
    assert abs(wide.secondary[0] - wide.dominant[0]) > 200.0
    assert wide.secondary[1] < analyze_channel(peak_series, "i").secondary[1]


def test_errors(peak_series):
    with pytest.raises(KeyError):
        analyze_channel(peak_series, "nope")
    with pytest.raises(ValueError, match="outside"):
        analyze_channel(peak_series, "i", (0.0, 0.7))
    with pytest.raises(ValueError, match="fewer than two"):
        analyze_channel(peak_series, "i", (0.30001, 0.30002))


def test_window_selects_samples(peak_series):
    sp = analyze_channel(peak_series, "i", (0.25, 0.5))
    assert sp.n_samples == 2501 and sp.n_fft == 4096
    # without the pre-switch zeros the natural mode outweighs the 60 Hz line
    assert 195 <= sp.dominant[0] <= 215
    assert abs(sp.secondary[0] - 60.0) <= sp.resolution
