#!/usr/bin/env python3
"""
Numerical inverse Laplace transform
Fixed Talbot contour: r = 2M/5, nodes p_k = (r theta_k / t)(cot theta_k + i), theta_k = k pi / M
"""

from typing import Callable

import numpy as np

from ..core.errors import InversionError

DEFAULT_NODES = 32
MIN_NODES = 16


def talbot_nodes(t: float, nodes: int = DEFAULT_NODES):
    """Contour points p_k and quadrature weights gamma_k (without the 2/(5t) factor)"""
    r = 2.0 * nodes / 5.0
    theta = np.pi * np.arange(1, nodes) / nodes
    cot = 1.0 / np.tan(theta)
    p = np.empty(nodes, dtype=complex)
    p[0] = r / t
    p[1:] = r * theta * (cot + 1j) / t

    gamma = np.empty(nodes, dtype=complex)
    gamma[0] = 0.5 * np.exp(r)
    gamma[1:] = np.exp(t * p[1:]) * (1 + 1j * theta * (1 + cot ** 2) - 1j * cot)
    return p, gamma


def talbot_invert(transform: Callable, t: float, nodes: int = DEFAULT_NODES) -> float:
    """
    f(t) from its transform F(s). `transform` takes an array of complex
    points and returns an array of values.
    """
    if not t > 0:
        raise ValueError(f"inversion time must be positive, got {t}")
    if nodes < MIN_NODES:
        raise ValueError(f"need at least {MIN_NODES} contour nodes, got {nodes}")

    p, gamma = talbot_nodes(t, nodes)
    values = np.asarray(transform(p), dtype=complex)
    if values.shape != p.shape:
        raise InversionError(f"transform returned shape {values.shape} for {len(p)} points")
    if not np.all(np.isfinite(values)):
        bad = int(np.argmin(np.isfinite(values)))
        raise InversionError(f"transform not finite at contour point {p[bad]:.6g}")
    return float(2.0 / (5.0 * t) * np.sum((gamma * values).real))
