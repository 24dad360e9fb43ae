#!/usr/bin/env python3
"""
Point reaction sink at the center
Laplace-domain algebra, interlaced poles, residues and the pole-sum solution
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import (HierarchyError, PoleProximityError, PoleSearchError,
                           TruncationError)
from .series import ExponentialSeries, SeriesValue
from .spectrum import Spectrum

DEFAULT_TOL = 1e-14
DEFAULT_POLES = 40
MAX_POLES = 320
POLE_MASS_TOL = 1e-11
POLE_RTOL = 1e-13
BISECT_RTOL = 1e-14
MAX_BISECTIONS = 400
MAX_DOUBLINGS = 60
# b_i / nu_i below this fraction of the running sum ends the default pole count
POLE_TAIL_CUTOFF = 1e-16


def _tail_distance(s: np.ndarray, lam_beyond: float) -> np.ndarray:
    """Distance from s to the segment [-lam_beyond, 0] holding the unresolved poles"""
    x = np.real(s)
    return np.hypot(x - np.clip(x, -lam_beyond, 0.0), np.imag(s))


def _resolvent(spec: Spectrum, s, power: int = 1, tol: float = DEFAULT_TOL,
               numerators: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray, Spectrum]:
    """
    sum_i w_i / (s + lambda_i)^power for an array of s, deepening the
    spectrum until the tail bound (1/N_n) / dist^power meets tol relative
    to 1 + sum |terms|. Explicit numerators are a finite prefix with no tail.
    Returns the sums, the sums of |terms| and the spectrum used.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    while True:
        lam = spec.lam
        denom = s[:, None] + lam[None, :]
        near = np.abs(denom) <= POLE_RTOL * np.where(lam > 0, lam, 0.0)
        if np.any(near) or np.any(denom == 0):
            raise PoleProximityError(f"evaluation point within {POLE_RTOL:g} (relative) of a pole")

        if numerators is None:
            w, tail_weight = spec.weight, spec.tail_weight
        else:
            w = np.zeros(spec.levels)
            m = min(len(numerators), spec.levels)
            w[:m] = numerators[:m]
            tail_weight = 0.0

        terms = w[None, :] / denom ** power
        total = terms.sum(axis=1)
        scale = np.abs(terms).sum(axis=1)
        with np.errstate(divide='ignore'):
            dist = _tail_distance(s, spec.next_lambda)
            tail = np.where(tail_weight > 0, tail_weight / dist ** power, 0.0)
        if np.all(tail <= tol * (1.0 + scale)):
            return total, scale, spec
        try:
            spec = spec.extended()
        except TruncationError as exc:
            raise TruncationError("resolvent series tail bound not met", float(np.max(tail))) from exc


def _scalar_or_array(value: np.ndarray, like):
    return complex(value[0]) if np.ndim(like) == 0 else value


def j_function(spec: Spectrum, s, tol: float = DEFAULT_TOL, coeffs: Optional[Sequence[float]] = None):
    """
    J(s) = sum_j a_j / (s + lambda_j). With coeffs c, the general
    C(s) = sum_j sqrt(a_j) c_j / (s + lambda_j) over the supplied prefix.
    """
    numerators = None
    if coeffs is not None:
        c = np.asarray(coeffs, dtype=float)
        spec = spec.ensure(len(c))
        numerators = np.sqrt(spec.weight[:len(c)]) * c[:spec.levels]
    value, _, _ = _resolvent(spec, s, 1, tol, numerators)
    return _scalar_or_array(value, s)


def _pole_equation(spec: Spectrum, k_rate: float, nu: np.ndarray, tol: float):
    """1 + k J(-nu), the sum of |k terms| and the spectrum actually used"""
    J, scale, spec = _resolvent(spec, -nu, 1, tol)
    return 1.0 + k_rate * J.real, k_rate * scale, spec


def _pole_count(spec: Spectrum, count: Optional[int]) -> int:
    if spec.is_finite:
        return spec.levels if count is None else min(count, spec.levels)
    return DEFAULT_POLES if count is None else count


def _locate_poles(spec: Spectrum, k_rate: float, count: Optional[int], tol: float):
    if not k_rate > 0:
        raise PoleSearchError(f"sink rate must be positive, got {k_rate}")
    n = _pole_count(spec, count)
    if n < 1:
        raise HierarchyError("need at least one pole", n)
    spec = spec.ensure(n + 1)
    lam = spec.lam

    upper = 2 * lam[0]
    for _ in range(MAX_DOUBLINGS):
        F, _, spec = _pole_equation(spec, k_rate, np.array([upper]), DEFAULT_TOL)
        if F[0] > 0:
            break
        upper *= 2
    else:
        raise PoleSearchError("no sign change above lambda_1 after 60 doublings")

    lo = lam[:n].copy()
    hi = np.concatenate([[upper], lam[:n - 1]])
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        F, _, spec = _pole_equation(spec, k_rate, mid, DEFAULT_TOL)
        if not np.all(np.isfinite(F)):
            raise PoleSearchError("pole equation not finite inside a bracket")
        below = F < 0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= tol * lo):
            break
        if np.any(hi <= lo):
            raise PoleSearchError("bisection interval collapsed without isolating a root")
    else:
        raise PoleSearchError(f"bisection did not reach relative width {tol:g}")

    nu = 0.5 * (lo + hi)
    F, scale, spec = _pole_equation(spec, k_rate, nu, DEFAULT_TOL)
    return nu, np.abs(F) / (1.0 + scale), spec


def find_poles(spec: Spectrum, k_rate: float, count: Optional[int] = None,
               tol: float = BISECT_RTOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Roots nu_1 > nu_2 > ... of 1 + k J(-nu) = 0, one per interval
    (lambda_j, lambda_{j-1}) and nu_1 above lambda_1, with the relative
    residual |1 + k J(-nu)| / (1 + k sum |terms|).
    """
    nu, residual, _ = _locate_poles(spec, k_rate, count, tol)
    return nu, residual


def residues(spec: Spectrum, k_rate: float, nu: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """b_i = 1 / (k^2 |J'(-nu_i)|), with |J'(-nu)| = sum a_j / (lambda_j - nu)^2"""
    derivative, _, _ = _resolvent(spec, -np.asarray(nu, dtype=float), 2, tol)
    return 1.0 / (k_rate ** 2 * np.abs(derivative.real))


def _relative_gap(nu: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """nu_i / lambda_i - 1; infinite for the zero mode of a finite space"""
    with np.errstate(divide='ignore'):
        return np.where(lam > 0, nu / np.where(lam > 0, lam, 1.0) - 1.0, np.inf)


@dataclass(eq=False)
class SinkSpectrum:
    """Poles, residues and relative gaps of the sink problem at rate k"""
    k_rate: float
    nu: np.ndarray
    b: np.ndarray
    delta: np.ndarray
    residual: np.ndarray
    spectrum: Spectrum

    @property
    def count(self) -> int:
        return len(self.nu)

    @property
    def decay_weight(self) -> np.ndarray:
        """b_i / nu_i"""
        return self.b / self.nu

    def to_rows(self) -> List[Dict[str, float]]:
        return [
            {'i': i + 1, 'lambda_i': float(self.spectrum.lam[i]), 'nu_i': float(self.nu[i]),
             'delta_i': float(self.delta[i]), 'b_i': float(self.b[i]),
             'residual': float(self.residual[i])}
            for i in range(self.count)
        ]


def sink_spectrum(spec: Spectrum, k_rate: float, count: Optional[int] = None,
                  tol: float = BISECT_RTOL) -> SinkSpectrum:
    """
    Poles and residues. By default 40 poles, doubled up to MAX_POLES while
    the residue mass 1 - k sum b_i/nu_i exceeds POLE_MASS_TOL, then trimmed
    where b_i/nu_i is negligible.
    """
    n = count
    while True:
        nu, residual, used = _locate_poles(spec, k_rate, n, tol)
        b = residues(used, k_rate, nu)
        if count is not None or used.is_finite:
            break
        n = len(nu)
        missing = abs(1.0 - k_rate * float(np.sum(b / nu)))
        if missing <= POLE_MASS_TOL or n >= MAX_POLES:
            break
        n = min(2 * n, MAX_POLES)
    spec = used
    if count is None and not spec.is_finite:
        ratio = b / nu
        negligible = ratio < POLE_TAIL_CUTOFF * np.cumsum(ratio)
        if np.any(negligible):
            keep = int(np.argmax(negligible))
            nu, b, residual = nu[:keep], b[:keep], residual[:keep]
    delta = _relative_gap(nu, spec.lam[:len(nu)])
    return SinkSpectrum(k_rate=k_rate, nu=nu, b=b, delta=delta, residual=residual, spectrum=spec)


class PoleSeries(ExponentialSeries):
    """
    Pole-sum solutions: survival k sum (b_i/nu_i) e^(-nu_i t) or the center
    value sum b_i e^(-nu_i t). The missing survival mass is 1 - k sum b_i/nu_i.
    """

    def __init__(self, sink: SinkSpectrum, survival: bool = True):
        self.sink = sink
        self.survival = survival

    @property
    def max_terms(self) -> int:
        return self.sink.count

    def terms(self, n: int):
        n = min(n, self.sink.count)
        weights = self.sink.k_rate * self.sink.decay_weight if self.survival else self.sink.b
        return weights[:n], self.sink.nu[:n]

    def tail_bound(self, n: int) -> float:
        sink = self.sink
        n = min(n, sink.count)
        missing = abs(1.0 - sink.k_rate * float(np.sum(sink.decay_weight[:n])))
        if self.survival:
            return missing
        if sink.spectrum.is_finite and n == sink.spectrum.levels:
            return missing * float(sink.nu[-1]) / sink.k_rate
        # every later pole sits below lambda_n
        return missing * sink.spectrum.lambda_beyond(n - 1) / sink.k_rate


def _pole_sum(sink: SinkSpectrum, t: float, tol: float, survival: bool) -> float:
    result: SeriesValue = PoleSeries(sink, survival).evaluate(t, tol)
    if result.residual_bound > tol:
        what = "survival" if survival else "center value"
        raise TruncationError(f"{sink.count} poles cannot resolve the {what} to tol={tol:g}",
                              result.residual_bound)
    return result.value


def survival(sink: SinkSpectrum, t: float, tol: float = 1e-8) -> float:
    """S(t), the mass not yet absorbed"""
    return _pole_sum(sink, t, tol, survival=True)


def center_value_sink(sink: SinkSpectrum, t: float, tol: float = 1e-8) -> float:
    """Occupation of the center under the sink"""
    return _pole_sum(sink, t, tol, survival=False)


def delta_sequence(sink: SinkSpectrum, tol: float = 1e-8) -> Tuple[np.ndarray, float, np.ndarray]:
    """
    Delta_i = nu_i / lambda_i - 1, the tail estimate (mean of the last
    quarter) and the relative residual of the rearranged pole equation
        1/Delta_j = sum_{i != j} (a_i/a_j) / (lambda_i/lambda_j - 1 - Delta_j) + lambda_j / (k a_j)
    at every index. Residuals above tol raise.
    """
    spec = sink.spectrum
    lam, a = spec.lam, spec.weight
    n = sink.count
    residual = np.full(n, np.nan)
    for j in np.flatnonzero(lam[:n] > 0):
        dj = sink.delta[j]
        others = np.arange(spec.levels) != j
        rhs = np.sum((a[others] / a[j]) / (lam[others] / lam[j] - 1.0 - dj)) + lam[j] / (sink.k_rate * a[j])
        # unresolved modes have lambda_i / lambda_j in (0, q]; each term lies in
        # [-1/(1 + dj - q), -1/(1 + dj)] times its weight
        q = spec.next_lambda / lam[j]
        scaled_tail = spec.tail_weight / a[j]
        rhs -= scaled_tail / (1.0 + dj)
        spread = scaled_tail * (1.0 / (1.0 + dj - q) - 1.0 / (1.0 + dj))
        residual[j] = (abs(1.0 / dj - rhs) + spread) * dj
    if np.any(np.nan_to_num(residual) > tol):
        worst = int(np.nanargmax(residual))
        raise PoleSearchError(f"pole identity residual {residual[worst]:.2e} at index {worst + 1}")
    finite = sink.delta[np.isfinite(sink.delta)]
    quarter = max(1, len(finite) // 4)
    return sink.delta.copy(), float(np.mean(finite[-quarter:])), residual


def center_transform(spec: Spectrum, k_rate: float, s, tol: float = DEFAULT_TOL):
    """Laplace transform of the center occupation, J / (1 + kJ)"""
    J, _, _ = _resolvent(spec, s, 1, tol)
    return _scalar_or_array(J / (1.0 + k_rate * J), s)


def survival_transform(spec: Spectrum, k_rate: float, s, tol: float = DEFAULT_TOL):
    """Laplace transform of the survival, (1/s)(1 - k f0(s))"""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    f0 = np.atleast_1d(center_transform(spec, k_rate, s_arr, tol))
    return _scalar_or_array((1.0 - k_rate * f0) / s_arr, s)


def laplace_value(spec: Spectrum, k_rate: float, coeffs: Sequence[float], sphere: int,
                  s: complex, tol: float = DEFAULT_TOL) -> complex:
    """
    Laplace transform of the sink solution on sphere S_sphere for initial
    coefficients c in the radial basis:
        f~_i(s) = c_i/(s + lambda_i) - sqrt(a_i) k C(s) / ((1 + k J(s)) (s + lambda_i))
    """
    s = complex(s)
    if not s.real > 0:
        raise ValueError(f"laplace_value needs Re(s) > 0, got {s}")
    if sphere < 0:
        raise HierarchyError("sphere index must be non-negative", sphere)
    c = np.asarray(coeffs, dtype=float)
    spec = spec.ensure(max(len(c), sphere + 1))

    J, _, spec = _resolvent(spec, s, 1, tol)
    n = spec.levels
    if spec.is_finite and (sphere > spec.depth or len(c) > n):
        raise HierarchyError(f"depth-{spec.depth} space cannot hold this request", sphere)
    padded = np.zeros(n)
    padded[:len(c)] = c[:n]
    c0 = np.sqrt(spec.weight)
    denom = s + spec.lam

    C = np.sum(c0 * padded / denom)
    f0 = C / (1.0 + k_rate * J[0])
    coeff_t = (padded - c0 * k_rate * f0) / denom

    value = np.sum(coeff_t[sphere:] * spec.inner_value[sphere:])
    if sphere >= 1:
        value -= coeff_t[sphere - 1] * spec.edge_value[sphere - 1]
    return complex(value)
