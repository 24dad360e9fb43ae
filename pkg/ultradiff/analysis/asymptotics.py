#!/usr/bin/env python3
"""
Closed-form asymptotic laws
Power law times a log-periodic Fourier-Gamma modulation, for a generic
exponential series and for the center value and survival of a hierarchy
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..core.errors import HypothesisViolation, SampleError
from ..core.hierarchy import AsymptoticParams
from ..solvers.series import ExponentialSeries
from ..solvers.sink import SinkSpectrum
from ..solvers.spectrum import eta
from .special import complex_gamma

DEFAULT_MODES = 12
# modes=None keeps adding Fourier modes until |Gamma| drops below this
AUTO_MODE_CUTOFF = 1e-16
MAX_AUTO_MODES = 64
# two-sided residue lattice stops once both new terms drop below this fraction
LATTICE_CUTOFF = 1e-16
MAX_LATTICE_TERMS = 10_000


@dataclass(frozen=True)
class AsymptoticModel:
    """
    y(t) ~ t^(-beta) * modulation(t) with

        modulation(t) = prefactor * sum_{|m|<=M} exp(2 pi i m log(scale t) / L) Gamma(beta - 2 pi i m / L)

    where L is the log-period. modulation(e^L t) = modulation(t) for every M.
    """
    beta: float
    log_period: float
    scale: float = 1.0
    prefactor: float = 1.0
    modes: Optional[int] = DEFAULT_MODES
    label: str = "model"

    def __post_init__(self):
        if not self.beta > 0:
            raise HypothesisViolation(f"{self.label}: power exponent must be positive, got {self.beta}")
        if not self.log_period > 0:
            raise HypothesisViolation(f"{self.label}: log-period must be positive, got {self.log_period}")
        if not self.scale > 0:
            raise HypothesisViolation(f"{self.label}: scale must be positive, got {self.scale}")
        if self.modes is not None and self.modes < 0:
            raise ValueError(f"mode count must be >= 0, got {self.modes}")

    @property
    def kappa(self) -> float:
        """Scaling factor of the log-periodicity, e^L"""
        return math.exp(self.log_period)

    @property
    def frequency(self) -> float:
        return 2 * math.pi / self.log_period

    def mode_count(self) -> int:
        if self.modes is not None:
            return self.modes
        floor = AUTO_MODE_CUTOFF * abs(complex_gamma(self.beta))
        m = 0
        while m < MAX_AUTO_MODES:
            if abs(complex_gamma(self.beta - 1j * self.frequency * (m + 1))) < floor:
                break
            m += 1
        return m

    def gamma_coefficients(self) -> np.ndarray:
        """Gamma(beta - 2 pi i m / L) for m = 0..M"""
        m = np.arange(self.mode_count() + 1)
        return np.atleast_1d(complex_gamma(self.beta - 1j * self.frequency * m))

    def modulation_complex(self, t) -> np.ndarray:
        """Full symmetric sum over -M..M without conjugate pairing"""
        x = np.log(self.scale * np.atleast_1d(np.asarray(t, dtype=float)))
        gammas = self.gamma_coefficients()
        m = np.arange(len(gammas))
        phase = np.exp(1j * self.frequency * np.outer(x, m))
        total = phase @ gammas + np.conj(phase[:, 1:]) @ np.conj(gammas[1:])
        return self.prefactor * total

    def modulation(self, t):
        """Real modulation function; scalar in, scalar out"""
        x = np.log(self.scale * np.atleast_1d(np.asarray(t, dtype=float)))
        gammas = self.gamma_coefficients()
        m = np.arange(1, len(gammas))
        oscillating = np.exp(1j * self.frequency * np.outer(x, m)) @ gammas[1:]
        value = self.prefactor * (gammas[0].real + 2.0 * oscillating.real)
        return float(value[0]) if np.ndim(t) == 0 else value

    def asymptote(self, t):
        """t^(-beta) modulation(t)"""
        return np.asarray(t, dtype=float) ** -self.beta * self.modulation(t)

    def evaluate(self, t):
        return self.asymptote(t)

    def to_dict(self):
        return {
            'label': self.label, 'beta': self.beta, 'log_period': self.log_period,
            'scale': self.scale, 'prefactor': self.prefactor, 'modes': self.mode_count(),
        }


def limiting_eigenvalue_scale(params: AsymptoticParams, alpha: float) -> float:
    """Lambda = lim lambda_i e^(alpha xi i) = eta e^(-alpha D)"""
    return eta(params.theta, params.xi, alpha) * math.exp(-alpha * params.D)


def geometric_series_model(a: float, b: float, modes: Optional[int] = DEFAULT_MODES) -> AsymptoticModel:
    """S(t) = sum_m a^-m exp(-b^-m t): beta = log a / log b, log-period log b"""
    if not (a > 1 and b > 1):
        raise HypothesisViolation(f"geometric ratios must exceed 1, got a={a}, b={b}")
    log_b = math.log(b)
    return AsymptoticModel(beta=math.log(a) / log_b, log_period=log_b,
                           prefactor=1.0 / log_b, modes=modes,
                           label=f"geometric(a={a:g}, b={b:g})")


def center_value_model(params: AsymptoticParams, alpha: float,
                       modes: Optional[int] = DEFAULT_MODES) -> AsymptoticModel:
    """
    Center value of the point source. The weights behave as
    a_i ~ C (e^theta - 1) e^(-theta i) and the eigenvalues as Lambda e^(-alpha xi i).
    """
    log_period = alpha * params.xi
    beta = params.theta / log_period
    scale = limiting_eigenvalue_scale(params, alpha)
    weight = params.C * math.expm1(params.theta)
    return AsymptoticModel(beta=beta, log_period=log_period, scale=scale,
                           prefactor=weight / log_period * scale ** -beta,
                           modes=modes, label="center value")


def default_residue_limit(params: AsymptoticParams, alpha: float, k_rate: float, delta: float) -> float:
    """
    lim (b_j/nu_j) e^((alpha xi - theta) j) from the limiting lattice of J'(-nu_j):

        B = Lambda / (k^2 C (e^theta - 1) (1 + Delta) sum_{m in Z} e^(-theta m) / (e^(-alpha xi m) - 1 - Delta)^2)
    """
    log_period = alpha * params.xi
    if not log_period > params.theta:
        raise HypothesisViolation(
            f"residue limit needs alpha*xi > theta, got alpha*xi = {log_period:.12g} "
            f"and theta = {params.theta:.12g}"
        )
    if not delta > 0:
        raise HypothesisViolation(f"need Delta > 0, got {delta}")

    def above(m: int) -> float:
        return math.exp(-params.theta * m) / (math.exp(-log_period * m) - 1.0 - delta) ** 2

    def below(m: int) -> float:
        # the m -> -m term divided through by e^(2 alpha xi m)
        return math.exp((params.theta - 2 * log_period) * m) / (1.0 - (1.0 + delta) * math.exp(-log_period * m)) ** 2

    lattice = above(0)
    m = 1
    while m <= MAX_LATTICE_TERMS:
        upper, lower = above(m), below(m)
        lattice += upper + lower
        if max(upper, lower) < LATTICE_CUTOFF * lattice:
            break
        m += 1
    else:
        raise SampleError(f"residue lattice sum not converged after {MAX_LATTICE_TERMS} terms")
    scale = limiting_eigenvalue_scale(params, alpha)
    return scale / (k_rate ** 2 * params.C * math.expm1(params.theta) * (1 + delta) * lattice)


def survival_model(params: AsymptoticParams, alpha: float, k_rate: float, delta: float,
                   residue_limit: Optional[float] = None,
                   modes: Optional[int] = DEFAULT_MODES) -> AsymptoticModel:
    """
    Survival under the sink. Needs alpha xi > theta; the poles behave as
    Lambda (1 + Delta) e^(-alpha xi j) and b_j/nu_j as B e^(-(alpha xi - theta) j).
    """
    log_period = alpha * params.xi
    if not log_period > params.theta:
        raise HypothesisViolation(
            f"survival law needs alpha*xi > theta, got alpha*xi = {log_period:.12g} "
            f"and theta = {params.theta:.12g}"
        )
    if not (k_rate > 0 and delta > 0):
        raise HypothesisViolation(f"need k > 0 and Delta > 0, got k={k_rate}, Delta={delta}")
    beta = (log_period - params.theta) / log_period
    scale = limiting_eigenvalue_scale(params, alpha) * (1 + delta)
    limit = residue_limit if residue_limit is not None else default_residue_limit(params, alpha, k_rate, delta)
    return AsymptoticModel(beta=beta, log_period=log_period, scale=scale,
                           prefactor=k_rate * limit / log_period * scale ** -beta,
                           modes=modes, label="survival")


def geometric_series_modulation(a: float, b: float, t, modes: Optional[int] = DEFAULT_MODES):
    return geometric_series_model(a, b, modes).modulation(t)


def center_value_modulation(params: AsymptoticParams, alpha: float, t, modes: Optional[int] = DEFAULT_MODES):
    return center_value_model(params, alpha, modes).modulation(t)


def survival_modulation(params: AsymptoticParams, alpha: float, k_rate: float, delta: float, t,
                        residue_limit: Optional[float] = None, modes: Optional[int] = DEFAULT_MODES):
    return survival_model(params, alpha, k_rate, delta, residue_limit, modes).modulation(t)


def residue_tail_limit(sink: SinkSpectrum, params: AsymptoticParams, alpha: float) -> float:
    """Mean of (b_j/nu_j) e^((alpha xi - theta) j) over the last quarter of the computed poles"""
    live = np.flatnonzero(sink.spectrum.lam[:sink.count] > 0)
    if len(live) < 4:
        raise SampleError(f"need at least 4 decaying poles, got {len(live)}")
    j = live + 1
    scaled = sink.decay_weight[live] * np.exp((alpha * params.xi - params.theta) * j)
    quarter = max(1, len(scaled) // 4)
    return float(np.mean(scaled[-quarter:]))


class GeometricSeries(ExponentialSeries):
    """
    sum_{m>=0} w_m exp(-r_m t) with a geometric decay witness |w_m| <= K a^-m.
    The witness is re-checked on every term the evaluation touches.
    """

    def __init__(self, weights: Callable[[int], float], rates: Callable[[int], float],
                 decay: float, bound: Optional[float] = None):
        if not decay > 1:
            raise SampleError(f"decay witness must exceed 1, got {decay}")
        self.weights = weights
        self.rates = rates
        self.decay = decay
        self.bound = bound

    def terms(self, n: int):
        m = np.arange(n)
        w = np.array([float(self.weights(i)) for i in m])
        r = np.array([float(self.rates(i)) for i in m])
        if np.any(r < 0) or not np.all(np.isfinite(r)):
            raise SampleError("rates must be finite and non-negative")
        witnessed = np.abs(w) * float(self.decay) ** m
        if self.bound is None:
            self.bound = float(np.max(witnessed))
        if np.any(witnessed > self.bound * (1 + 1e-12)):
            first = int(np.argmax(witnessed > self.bound * (1 + 1e-12)))
            raise SampleError(f"|w_m| a^m exceeds the witness bound {self.bound:g} at m = {first}")
        return w, r

    def tail_bound(self, n: int) -> float:
        return self.bound * self.decay ** -n / (1 - 1 / self.decay)


def brute_series(weights: Callable[[int], float], rates: Callable[[int], float], t: float,
                 decay: float, bound: Optional[float] = None, tol: float = 1e-13) -> float:
    """Direct sum of a geometric exponential series to a relative tolerance"""
    series = GeometricSeries(weights, rates, decay, bound)
    if t == 0:
        return series.evaluate(0.0, tol).value
    return series.evaluate(t, tol, relative=True).value
