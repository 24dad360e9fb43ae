#!/usr/bin/env python3
"""
Empirical exponent and log-period estimates from computed relaxation curves
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ..core.errors import SampleError

MIN_DECADES = 3.0
DEFAULT_HARMONICS = 12


def _log_samples(t, y) -> Tuple[np.ndarray, np.ndarray]:
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise SampleError("t and y must be flat arrays of equal length")
    if np.any(t <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise SampleError("samples must be positive and finite")
    if np.any(np.diff(t) <= 0):
        raise SampleError("sample times must be strictly increasing")
    return np.log(t), np.log(y)


def _least_squares(design: np.ndarray, target: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    coef, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise SampleError("sample grid cannot resolve the regression")
    dof = max(1, len(target) - design.shape[1])
    sigma2 = float(np.sum((target - design @ coef) ** 2)) / dof
    cov = sigma2 * np.linalg.pinv(design.T @ design)
    return coef, np.sqrt(np.abs(np.diag(cov)))


def fit_power_exponent(t, y, log_period: Optional[float] = None,
                       harmonics: int = DEFAULT_HARMONICS,
                       min_decades: float = MIN_DECADES) -> Tuple[float, float]:
    """
    beta such that y ~ t^-beta, with its standard error.

    With a log_period hint the regression of log y on log t carries
    cos/sin terms of that period and its harmonics, so whole-period
    modulation cannot bias the slope on any grid.
    """
    x, ly = _log_samples(t, y)
    if (x[-1] - x[0]) / math.log(10) < min_decades - 1e-9:
        raise SampleError(f"need at least {min_decades:g} decades of samples")

    columns = [np.ones_like(x), x]
    if log_period is not None:
        if not log_period > 0:
            raise SampleError(f"log-period hint must be positive, got {log_period}")
        phase = 2 * math.pi * x / log_period
        for h in range(1, harmonics + 1):
            columns += [np.cos(h * phase), np.sin(h * phase)]
    design = np.column_stack(columns)
    if len(x) <= design.shape[1]:
        raise SampleError(f"{len(x)} samples cannot fit {design.shape[1]} parameters")

    coef, stderr = _least_squares(design, ly)
    return float(-coef[1]), float(stderr[1])


def period_average(t, u, log_period: float, start: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Means of u over consecutive whole periods in log t.

    Windows begin half a grid step before `start` (default t[0]) so a grid
    commensurate with the period puts the same number of samples in each.
    Returns the geometric window centers and the window means.
    """
    x = np.log(np.asarray(t, dtype=float))
    u = np.asarray(u, dtype=float)
    if x.shape != u.shape or len(x) < 2:
        raise SampleError("t and u must be flat arrays of equal length")
    if not log_period > 0:
        raise SampleError(f"log-period must be positive, got {log_period}")
    step = float(np.min(np.diff(x)))
    origin = (math.log(start) if start is not None else x[0]) - step / 2
    window = np.floor((x - origin) / log_period).astype(int)
    complete = int(np.floor((x[-1] + step / 2 - origin) / log_period + 1e-9))
    if complete < 1:
        raise SampleError("samples do not span a whole period")

    centers, means = [], []
    for w in range(complete):
        inside = window == w
        if np.any(inside):
            centers.append(math.exp(origin + (w + 0.5) * log_period))
            means.append(float(np.mean(u[inside])))
    return np.array(centers), np.array(means)


def log_periodicity_deviation(t, u, kappa: float) -> float:
    """max |u(kappa t) - u(t)| / mean |u| over the grid, by cubic interpolation in log t"""
    x = np.log(np.asarray(t, dtype=float))
    u = np.asarray(u, dtype=float)
    if x.shape != u.shape or len(x) < 4:
        raise SampleError("need at least 4 samples of equal-length t and u")
    if not kappa > 1:
        raise SampleError(f"kappa must exceed 1, got {kappa}")
    shift = math.log(kappa)
    if x[-1] - x[0] < 2 * shift - 1e-12:
        raise SampleError("samples must span at least two periods")

    spline = CubicSpline(x, u)
    base = x[x + shift <= x[-1] + 1e-12]
    shifted = spline(np.minimum(base + shift, x[-1]))
    return float(np.max(np.abs(shifted - spline(base))) / np.mean(np.abs(u)))


def fit_log_period(t, y, beta: Optional[float] = None, oversample: int = 16) -> float:
    """
    Log-period of the modulation of y from the dominant Fourier component
    in log t. Without beta the power-law trend is removed by a straight-line fit.
    """
    x, ly = _log_samples(t, y)
    if beta is None:
        slope, intercept = np.polyfit(x, ly, 1)
        residual = ly - (slope * x + intercept)
    else:
        residual = ly + beta * x

    n = max(len(x), 64)
    grid = np.linspace(x[0], x[-1], n)
    signal = np.interp(grid, x, residual)
    signal = (signal - np.mean(signal)) * np.hanning(n)
    spectrum = np.abs(np.fft.rfft(signal, n=oversample * n))
    freqs = np.fft.rfftfreq(oversample * n, d=grid[1] - grid[0])
    spectrum[0] = 0.0
    peak = int(np.argmax(spectrum))
    if peak == 0 or spectrum[peak] <= 1e-14 * np.sum(spectrum):
        raise SampleError("no oscillating component found")
    if 0 < peak < len(spectrum) - 1:
        left, mid, right = np.log(spectrum[peak - 1:peak + 2] + 1e-300)
        offset = 0.5 * (left - right) / (left - 2 * mid + right)
    else:
        offset = 0.0
    frequency = freqs[peak] + offset * (freqs[1] - freqs[0])
    return float(1.0 / frequency)
