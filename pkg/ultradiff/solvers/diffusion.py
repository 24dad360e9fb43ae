#!/usr/bin/env python3
"""
Pure diffusion from spherically symmetric initial data
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.errors import ConfigError, HierarchyError
from .series import HEAD_CUTOFF, ExponentialSeries
from .spectrum import Spectrum

DEFAULT_TOL = 1e-12
# |c_i| increasing over this many trailing terms is treated as divergent
GROWTH_WINDOW = 8


@dataclass
class SphereProfile:
    """Per-point occupation on spheres S_0..S_K at time t"""
    t: float
    values: np.ndarray
    masses: np.ndarray
    terms_used: int
    residual_bound: float

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    def to_rows(self) -> List[Dict[str, float]]:
        return [
            {'t': self.t, 'k': k, 'f_point': float(self.values[k]),
             'f_sphere_mass': float(self.masses[k]),
             'terms_used': self.terms_used, 'residual_bound': self.residual_bound}
            for k in range(len(self.values))
        ]


class CenterValueSeries(ExponentialSeries):
    """f(x_0, t) = sum_i a_i exp(-lambda_i t); the weight tail past n is 1/N_n"""

    def __init__(self, spectrum: Spectrum):
        self.spectrum = spectrum

    @property
    def max_terms(self) -> Optional[int]:
        return self.spectrum.levels if self.spectrum.is_finite else None

    def terms(self, n: int):
        self.spectrum = self.spectrum.ensure(n)
        return self.spectrum.weight[:n], self.spectrum.lam[:n]

    def tail_bound(self, n: int) -> float:
        return self.spectrum.weight_tail(n)


def center_value(spec: Spectrum, t: float, tol: float = DEFAULT_TOL) -> float:
    """Occupation of the center at time t for a point source"""
    return CenterValueSeries(spec).evaluate(t, tol).value


def _sphere_masses(spec: Spectrum, K: int) -> np.ndarray:
    h = spec.hierarchy
    return np.array([float(h.M(k)) for k in range(K + 1)])


def _check_sphere_range(spec: Spectrum, K: int):
    if K < 0:
        raise HierarchyError("sphere index must be non-negative", K)
    if spec.is_finite and K > spec.depth:
        raise HierarchyError(f"depth-{spec.depth} space has no sphere {K}", K)


def solve_point_source(spec: Spectrum, t: float, K: int, tol: float = DEFAULT_TOL) -> SphereProfile:
    """Per-point values on S_0..S_K for the point source at the center"""
    _check_sphere_range(spec, K)
    series = CenterValueSeries(spec)
    n = series.evaluate(t, tol).terms_used
    spec = series.spectrum.ensure(max(n, K + 1))
    n = max(n, K + 1) if not spec.is_finite else spec.levels

    exponent = spec.lam[:n] * t
    decayed = np.where(exponent <= HEAD_CUTOFF, np.exp(-np.minimum(exponent, HEAD_CUTOFF)), 0.0)
    # suffix[k] = sum_{i > k} a_i exp(-lambda_i t)
    suffix = np.cumsum((spec.weight[:n] * decayed)[::-1])[::-1]

    values = suffix[:K + 1].copy()
    for k in range(1, K + 1):
        values[k] -= spec.inv_prev[k] * decayed[k - 1]

    return SphereProfile(t=t, values=values, masses=values * _sphere_masses(spec, K),
                         terms_used=n, residual_bound=spec.weight_tail(n))


def solve_general(spec: Spectrum, coeffs: Sequence[float], t: float, K: int,
                  tol: float = DEFAULT_TOL) -> SphereProfile:
    """
    f(x, t) = sum_i c_i exp(-lambda_i t) phi_i(x) on S_0..S_K.

    The coefficients are a finite prefix; its tail is unknown, so the
    residual bound is reported as NaN.
    """
    _check_sphere_range(spec, K)
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1:
        raise ConfigError("coefficients must be a flat sequence")
    tail = np.abs(c[-(GROWTH_WINDOW + 1):])
    if len(c) > GROWTH_WINDOW and np.all(np.diff(tail) > 0):
        raise ConfigError("coefficient prefix keeps growing; not square-summable")

    n = max(len(c), K + 1)
    spec = spec.ensure(n)
    if spec.is_finite and len(c) > spec.levels:
        raise HierarchyError(f"{len(c)} coefficients for a space with {spec.levels} modes", len(c))
    n = min(n, spec.levels)
    padded = np.zeros(n)
    padded[:len(c)] = c

    g = padded * np.exp(-spec.lam[:n] * t)
    inner = np.cumsum((g * spec.inner_value[:n])[::-1])[::-1]
    values = inner[:K + 1].copy()
    for k in range(1, K + 1):
        values[k] -= g[k - 1] * spec.edge_value[k - 1]

    return SphereProfile(t=t, values=values, masses=values * _sphere_masses(spec, K),
                         terms_used=len(c), residual_bound=float("nan"))
