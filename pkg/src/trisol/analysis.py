"""Trace analysis: beat-period extraction and dominant-frequency estimates."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = ["SpectrumPeak", "beat_period", "dominant_frequency", "moving_minimum"]


def _uniform_dt(ts: np.ndarray) -> float:
    dt = np.diff(ts)
    if dt.size == 0 or not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise DomainError("a uniform time grid is required")
    return float(dt[0])


def moving_minimum(values: np.ndarray, window: int) -> np.ndarray:
    """Minimum over a sliding window of ``window`` samples (len n - window + 1)."""
    if window < 1 or window > values.size:
        raise DomainError("window must lie in 1..len(values)")
    view = np.lib.stride_tricks.sliding_window_view(values, window)
    return view.min(axis=1)


def beat_period(ts, signal, window_time: float) -> tuple[float, list[float]]:
    """Period of the slow envelope of an oscillating trace.

    The lower envelope is the moving-window minimum over one fast period
    (``window_time``); times of its local minima, refined by a three-point
    parabola, mark the deepest beat troughs.  Returns the mean spacing and
    the trough times.  Needs at least two troughs inside the trace.
    """
    ts = np.asarray(ts, dtype=float)
    signal = np.asarray(signal, dtype=float)
    dt = _uniform_dt(ts)
    w = max(2, int(round(window_time / dt)))
    env = moving_minimum(signal, w)
    centers = ts[: env.size] + 0.5 * (w - 1) * dt

    # plateau-tolerant local minima: a sample that is the strict minimum of
    # its +-w neighbourhood; consecutive hits collapse to their midpoint
    n = env.size
    hits = []
    for i in range(n):
        lo = max(0, i - w)
        hi = min(n, i + w + 1)
        if env[i] == env[lo:hi].min():
            hits.append(i)
    clusters: list[list[int]] = []
    for i in hits:
        if clusters and i - clusters[-1][-1] <= w // 2:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    # drop clusters touching the ends: their troughs are not bracketed
    clusters = [cl for cl in clusters if cl[0] > 0 and cl[-1] < n - 1]

    troughs = []
    half = max(1, w // 2)
    for cl in clusters:
        i = cl[len(cl) // 2]
        lo, hi = i - half, i + half
        if lo < 0 or hi >= n:
            troughs.append(float(centers[i]))
            continue
        denom = env[lo] - 2.0 * env[i] + env[hi]
        if denom <= 0.0:
            troughs.append(float(centers[i]))
        else:
            shift = 0.5 * (env[lo] - env[hi]) / denom
            troughs.append(float(centers[i] + shift * half * dt))
    if len(troughs) < 2:
        raise DomainError(
            f"need at least two envelope troughs, found {len(troughs)};"
            " extend the trace"
        )
    gaps = np.diff(troughs)
    return float(gaps.mean()), troughs


class SpectrumPeak(NamedTuple):
    frequency: float
    bin_width: float
    magnitude: float


def dominant_frequency(ts, signal, detrend_window_time: float) -> SpectrumPeak:
    """Strongest nonzero line of the discrete spectrum after detrending.

    Detrending subtracts a centered moving average over
    ``detrend_window_time`` (reflect-padded), removing the slow beat
    content so the fast spectral line dominates.
    """
    ts = np.asarray(ts, dtype=float)
    signal = np.asarray(signal, dtype=float)
    dt = _uniform_dt(ts)
    w = max(1, int(round(detrend_window_time / dt)))
    padded = np.pad(signal, w, mode="reflect")
    kernel = np.ones(w) / w
    trend = np.convolve(padded, kernel, mode="same")[w:-w]
    detrended = signal - trend

    amp = np.abs(np.fft.rfft(detrended))
    freqs = np.fft.rfftfreq(signal.size, d=dt)
    if amp.size < 2:
        raise DomainError("signal too short for a spectrum")
    peak = 1 + int(np.argmax(amp[1:]))
    return SpectrumPeak(
        frequency=float(freqs[peak]),
        bin_width=float(freqs[1]),
        magnitude=float(amp[peak]),
    )
