#!/usr/bin/env python3
"""
Convergence and asymptotic-regularity checks for hierarchies
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import ConfigError
from .hierarchy import Kernel, UltrametricHierarchy

MIN_PROBE_DEPTH = 8
DEFAULT_PROBE_DEPTH = 32
SPREAD_TOL = 1e-9


@dataclass
class ConditionReport:
    """Outcome of validate(): one block per scenario class"""
    probe_depth: int
    # summability of 1/N_i and exp(-alpha d_j); None when undetermined
    restr_ok: Optional[bool]
    sum_inverse_population: float
    sum_kernel_decay: float
    tail_inverse_population: Optional[float]
    tail_kernel_decay: Optional[float]
    # bounded scenario
    restr_scenario_ok: bool
    theta: float
    xi: float
    A: float
    A_prime: float
    B: float
    # limit scenario
    limit_scenario_ok: bool
    C: float
    D: float
    delta_residuals: List[float] = field(default_factory=list)
    epsilon_residuals: List[float] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def certified(self, require_limit: bool = False) -> bool:
        ok = bool(self.restr_ok) and self.restr_scenario_ok
        return ok and self.limit_scenario_ok if require_limit else ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            'probe_depth': self.probe_depth,
            'restr_ok': self.restr_ok,
            'sum_inverse_population': self.sum_inverse_population,
            'sum_kernel_decay': self.sum_kernel_decay,
            'tail_inverse_population': self.tail_inverse_population,
            'tail_kernel_decay': self.tail_kernel_decay,
            'restr_scenario_ok': self.restr_scenario_ok,
            'theta': self.theta, 'xi': self.xi,
            'A': self.A, 'A_prime': self.A_prime, 'B': self.B,
            'limit_scenario_ok': self.limit_scenario_ok,
            'C': self.C, 'D': self.D,
            'notes': list(self.notes),
        }

    def summary_lines(self) -> List[str]:
        def mark(flag):
            return "✅" if flag else ("⚠️ " if flag is None else "❌")
        return [
            f"{mark(self.restr_ok)} summability: sum 1/N = {self.sum_inverse_population:.12g}, "
            f"sum exp(-alpha d) = {self.sum_kernel_decay:.12g}",
            f"{mark(self.restr_scenario_ok)} bounded scenario: theta = {self.theta:.12g}, "
            f"xi = {self.xi:.12g}, A = {self.A:.6g}, A' = {self.A_prime:.6g}, B = {self.B:.6g}",
            f"{mark(self.limit_scenario_ok)} limit scenario: C = {self.C:.12g}, D = {self.D:.12g}",
        ] + [f"⚠️  {note}" for note in self.notes]


def _quarters(values: np.ndarray):
    q = max(2, len(values) // 4)
    return values[-q:], values[-2 * q:-q], values[:-q]


def _spread(values: np.ndarray) -> float:
    return float(np.max(values) - np.min(values)) if len(values) else 0.0


def _settles(values: np.ndarray, tol: float) -> bool:
    """Last-quarter spread is negligible or clearly shrinking"""
    last, previous, _ = _quarters(values)
    last_spread = _spread(last)
    return last_spread <= tol or last_spread <= 0.75 * _spread(previous)


def _no_growth(values: np.ndarray, tol: float) -> bool:
    """The last quarter stays within the envelope of the rest"""
    last, _, rest = _quarters(np.abs(values))
    return float(np.max(last)) <= float(np.max(rest)) * (1 + tol) + tol


def validate(h: UltrametricHierarchy, kernel: Kernel, probe_depth: int = DEFAULT_PROBE_DEPTH) -> ConditionReport:
    """
    Probe the first levels of a hierarchy against the summability condition,
    the bounded scenario (|d_i - xi i| and N_i e^(-theta i) bounded) and the
    limit scenario (both converge). Always returns a report.
    """
    if probe_depth < MIN_PROBE_DEPTH:
        raise ConfigError(f"probe_depth must be >= {MIN_PROBE_DEPTH}, got {probe_depth}")

    notes: List[str] = []
    n = probe_depth if h.max_level is None else min(probe_depth, h.max_level)
    if n < probe_depth:
        notes.append(f"probe window truncated to {n} tabulated levels")

    i = np.arange(1, n + 1)
    d = h.radii(n)[1:]
    N = np.array([float(x) for x in h.populations(n)])
    inv_N = 1.0 / N
    decay = kernel.decay(d)

    sum_inv_N = float(np.sum(inv_N))
    sum_decay = float(np.sum(decay))

    if h.asym is not None:
        theta, xi = h.asym.theta, h.asym.xi
    else:
        # slopes of log N_i and d_i over the probe window
        theta = float(np.polyfit(i, np.log(N[1:]), 1)[0])
        xi = float(np.polyfit(i, d, 1)[0])
        notes.append("no asymptotic record: theta and xi estimated from tail slopes")

    scaled_N = N[1:] * np.exp(-theta * i)
    radius_dev = d - xi * i
    A, A_prime = float(np.min(1.0 / scaled_N)), float(np.max(1.0 / scaled_N))
    B = float(np.max(np.abs(radius_dev)))

    restr_scenario_ok = bool(
        theta > 0 and xi > 0
        and _no_growth(np.log(scaled_N), SPREAD_TOL)
        and _no_growth(radius_dev, SPREAD_TOL)
    )

    # geometric tails from the witnessed bounds
    if h.asym is not None and restr_scenario_ok:
        tail_inv_N = A_prime * math.exp(-theta * (n + 1)) / (1 - math.exp(-theta))
        ratio = math.exp(-kernel.alpha * xi)
        tail_decay = math.exp(kernel.alpha * B) * ratio ** (n + 1) / (1 - ratio)
        restr_ok: Optional[bool] = True
    else:
        tail_inv_N = tail_decay = None
        restr_ok = None
        if h.asym is None:
            notes.append("summability undetermined without asymptotic parameters")

    C_seq = 1.0 / scaled_N
    last_C, _, _ = _quarters(C_seq)
    last_D, _, _ = _quarters(radius_dev)
    C_est = float(np.mean(last_C))
    D_est = float(np.mean(last_D))
    limit_ok = bool(
        restr_scenario_ok
        and _settles(radius_dev, SPREAD_TOL)
        and _settles(C_seq, SPREAD_TOL * max(1.0, C_est))
        and D_est >= -SPREAD_TOL
    )

    return ConditionReport(
        probe_depth=n,
        restr_ok=restr_ok,
        sum_inverse_population=sum_inv_N,
        sum_kernel_decay=sum_decay,
        tail_inverse_population=tail_inv_N,
        tail_kernel_decay=tail_decay,
        restr_scenario_ok=restr_scenario_ok,
        theta=theta, xi=xi, A=A, A_prime=A_prime, B=B,
        limit_scenario_ok=limit_ok,
        C=C_est, D=max(D_est, 0.0) if limit_ok else D_est,
        delta_residuals=(radius_dev - D_est).tolist(),
        epsilon_residuals=(C_est * scaled_N - 1.0).tolist(),
        notes=notes,
    )
