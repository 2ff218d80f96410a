"""Amplitude spectra of recorded channels and their two strongest lines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .sim import TimeSeries

__all__ = [
    "Spectrum",
    "fft",
    "next_pow2",
    "amplitude_spectrum",
    "dominant_and_secondary",
    "analyze_channel",
]


@dataclass(frozen=True)
class Spectrum:
    freqs: np.ndarray
    magnitudes: np.ndarray
    resolution: float
    dominant: tuple[float, float]
    secondary: tuple[float, float]
    n_samples: int = 0
    n_fft: int = 0


def fft(samples) -> np.ndarray:
    """Unnormalized forward DFT, ``X[k] = sum_n x[n] exp(-2j pi k n / N)``.

    The length must be a power of two.
    """
    x = np.asarray(samples)
    if x.ndim != 1:
        raise ValueError("fft expects a 1-D sequence")
    n = x.size
    if n == 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    return _backend.fft_radix2(x.astype(complex))


def next_pow2(n: int) -> int:
    return 1 << max(0, (int(n) - 1).bit_length())


def amplitude_spectrum(samples, fs: float) -> tuple[np.ndarray, np.ndarray, int]:
    """One-sided amplitude spectrum of ``samples`` zero-padded to a power of two.

    Bins are scaled by ``2/n`` (DC and Nyquist by ``1/n``), where ``n`` is the
    number of real samples, so a sinusoid of amplitude A that falls on a bin
    reads A. Returns ``(freqs, magnitudes, n_fft)``.
    """
    x = np.asarray(samples, dtype=float)
    n = x.size
    n_fft = next_pow2(n)
    padded = np.zeros(n_fft)
    padded[:n] = x
    bins = fft(padded)[: n_fft // 2 + 1]
    mags = np.abs(bins) * (2.0 / n)
    mags[0] /= 2.0
    if n_fft > 1:
        mags[-1] /= 2.0
    freqs = np.arange(n_fft // 2 + 1) * (fs / n_fft)
    return freqs, mags, n_fft


def dominant_and_secondary(freqs, mags, exclusion_halfwidth):
    if mags.size < 2:
        raise ValueError("spectrum has no non-DC bins")
    k_dom = 1 + int(np.argmax(mags[1:]))
    allowed = np.abs(freqs - freqs[k_dom]) > exclusion_halfwidth
    allowed[0] = False
    if not allowed.any():
        secondary = (float("nan"), 0.0)
    else:
        candidates = np.where(allowed, mags, -np.inf)
        k_sec = int(np.argmax(candidates))
        secondary = (float(freqs[k_sec]), float(mags[k_sec]))
    return (float(freqs[k_dom]), float(mags[k_dom])), secondary


def analyze_channel(
    series: TimeSeries,
    channel: str,
    window: tuple[float, float] | None = None,
    exclusion_halfwidth: float = 20.0,
) -> Spectrum:
    """Spectrum of one channel over ``window`` with dominant/secondary lines.

    A rectangular window is used. DC is ignored in the peak search, and the
    secondary line is the largest bin farther than ``exclusion_halfwidth`` Hz
    from the dominant one.
    """
    values = series.channel(channel)
    if window is None:
        window = (float(series.t[0]), float(series.t[-1]))
    t_start, t_end = window
    if t_start < series.t[0] - 1e-9 * series.dt or t_end > series.t[-1] + 1e-9 * series.dt:
        raise ValueError(f"window {window} is outside the record")
    mask = series.window(t_start, t_end)
    if mask.sum() < 2:
        raise ValueError(f"window {window} contains fewer than two samples")
    samples = values[mask]
    freqs, mags, n_fft = amplitude_spectrum(samples, 1.0 / series.dt)
    dominant, secondary = dominant_and_secondary(freqs, mags, exclusion_halfwidth)
    return Spectrum(
        freqs=freqs,
        magnitudes=mags,
        resolution=1.0 / (series.dt * n_fft),
        dominant=dominant,
        secondary=secondary,
        n_samples=int(samples.size),
        n_fft=n_fft,
    )
