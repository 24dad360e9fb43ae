#!/usr/bin/env python3
"""
Radial eigenbasis and eigenvalues of the ultrametric diffusion operator
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.errors import HierarchyError, TruncationError
from ..core.hierarchy import Kernel, UltrametricHierarchy

DEFAULT_TOL = 1e-14
# default depth: smallest n with N_n above this
DEFAULT_DEPTH_POPULATION = 10 ** 16
MAX_LEVELS = 600


def eta(theta: float, xi: float, alpha: float) -> float:
    """Limit of lambda_i e^(alpha xi i) up to the factor e^(-alpha D)"""
    q = math.exp(-alpha * xi)
    return (1 - math.exp(-theta) * q) / (1 - q)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigenvalues lambda_1 > lambda_2 > ... with the point-source weights.

    Index 0 of every array is mode i = 1. A finite spectrum (depth L) holds
    L + 1 modes, the last one the stationary zero mode with weight 1/N_L.
    """
    lam: np.ndarray
    weight: np.ndarray
    ratio: np.ndarray
    inv_prev: np.ndarray
    tail_bound: np.ndarray
    tail_weight: float
    next_lambda: float
    hierarchy: UltrametricHierarchy
    kernel: Kernel
    depth: Optional[int] = None
    tol: float = DEFAULT_TOL

    @property
    def levels(self) -> int:
        return len(self.lam)

    @property
    def is_finite(self) -> bool:
        return self.depth is not None

    @property
    def c(self) -> np.ndarray:
        """Point-source expansion coefficients"""
        return np.sqrt(self.weight)

    @property
    def norm(self) -> np.ndarray:
        return np.sqrt(self.inv_prev / (1.0 - self.ratio))

    @property
    def inner_value(self) -> np.ndarray:
        """phi_i on spheres S_k with k < i"""
        return self.norm * (1.0 - self.ratio)

    @property
    def edge_value(self) -> np.ndarray:
        """minus phi_i on its own sphere S_i"""
        return self.norm * self.ratio

    def weight_tail(self, n: int) -> float:
        """sum_{i>n} a_i for the first n modes"""
        if n >= self.levels:
            return self.tail_weight
        return float(np.sum(self.weight[n:])) + self.tail_weight

    def lambda_beyond(self, n: int) -> float:
        """Upper bound on every lambda_i with i > n"""
        return self.next_lambda if n >= self.levels else float(self.lam[n])

    def ensure(self, n: int) -> 'Spectrum':
        """Spectrum holding at least n modes (finite spectra are returned as is)"""
        if self.is_finite or n <= self.levels:
            return self
        return compute_spectrum(self.hierarchy, self.kernel, n, self.tol)

    def extended(self) -> 'Spectrum':
        """Twice as deep, for callers whose tail bound is not yet met"""
        if self.is_finite or self.levels >= MAX_LEVELS:
            raise TruncationError(f"spectrum cannot be deepened past {self.levels} modes",
                                  self.tail_weight)
        return compute_spectrum(self.hierarchy, self.kernel, min(2 * self.levels, MAX_LEVELS), self.tol)

    def to_rows(self) -> List[Dict[str, float]]:
        return [
            {'i': i + 1, 'lambda': float(self.lam[i]), 'tail_bound': float(self.tail_bound[i]),
             'c_i': float(math.sqrt(self.weight[i]))}
            for i in range(self.levels)
        ]


def _series_terms(h: UltrametricHierarchy, kernel: Kernel, upto: int) -> np.ndarray:
    """term_j = exp(-alpha d_j) (1 - exp(-alpha (d_{j+1} - d_j)) N_j / N_{j+1}), j = 1..upto"""
    d = h.radii(upto + 1)
    N = h.populations(upto + 1)
    log_ratio = np.array([math.log1p(-(N[j + 1] - N[j]) / N[j + 1]) for j in range(1, upto + 1)])
    gap = d[2:] - d[1:-1]
    return np.exp(-kernel.alpha * d[1:-1]) * -np.expm1(log_ratio - kernel.alpha * gap)


def _point_weights(h: UltrametricHierarchy, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    N = h.populations(n)
    weight = np.array([(N[i] - N[i - 1]) / (N[i - 1] * N[i]) for i in range(1, n + 1)])
    ratio = np.array([N[i - 1] / N[i] for i in range(1, n + 1)])
    inv_prev = np.array([1 / N[i - 1] for i in range(1, n + 1)])
    return weight, ratio, inv_prev


def eigenvalues(h: UltrametricHierarchy, kernel: Kernel, n: int,
                tol: float = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    lambda_1..lambda_n and an absolute truncation bound for each.

    The series is cut at a depth J where the geometric majorant
    e^(alpha B) e^(-alpha xi (J+1)) / (1 - e^(-alpha xi)) falls below
    tol * lambda_n, then accumulated backwards from J.
    """
    if n < 1:
        raise HierarchyError("need at least one eigenvalue", n)
    if h.asym is None:
        raise TruncationError("eigenvalue tail cannot be bounded without asymptotic parameters")
    xi, alpha = h.asym.xi, kernel.alpha
    q = math.exp(-alpha * xi)

    depth = n + 16
    while True:
        if not h.has_level(depth + 1):
            raise TruncationError(f"{h.name} has no level {depth + 1} to continue the eigenvalue series")
        terms = _series_terms(h, kernel, depth)
        B = h.radius_deviation(depth + 1)
        tail = math.exp(alpha * B) * q ** (depth + 1) / (1 - q)
        if tail <= tol * float(np.sum(terms[n - 1:])):
            break
        if depth >= MAX_LEVELS:
            raise TruncationError(f"eigenvalue series of {h.name} did not converge", tail)
        depth = min(MAX_LEVELS, depth + max(8, depth // 2))

    lam = np.cumsum(terms[::-1])[::-1][:n]
    return lam, np.full(n, tail)


def eigenvalue(h: UltrametricHierarchy, kernel: Kernel, i: int,
               tol: float = DEFAULT_TOL) -> Tuple[float, float]:
    """lambda_i with its truncation bound"""
    lam, bound = eigenvalues(h, kernel, i, tol)
    return float(lam[-1]), float(bound[-1])


def default_levels(h: UltrametricHierarchy) -> int:
    n = 1
    while n < MAX_LEVELS and h.N(n) < DEFAULT_DEPTH_POPULATION:
        n += 1
    return n


def compute_spectrum(h: UltrametricHierarchy, kernel: Kernel,
                     levels: Optional[int] = None, tol: float = DEFAULT_TOL) -> Spectrum:
    """Spectrum of the infinite hierarchy, first `levels` modes"""
    n = levels or default_levels(h)
    lam, bound = eigenvalues(h, kernel, n + 1, tol)
    weight, ratio, inv_prev = _point_weights(h, n)
    return Spectrum(
        lam=lam[:n], weight=weight, ratio=ratio, inv_prev=inv_prev,
        tail_bound=bound[:n], tail_weight=1 / h.N(n), next_lambda=float(lam[n]),
        hierarchy=h, kernel=kernel, tol=tol,
    )


def finite_spectrum(h: UltrametricHierarchy, kernel: Kernel, depth: int) -> Spectrum:
    """
    Exact spectrum of the depth-L truncation: lambda_i^(L) for i <= L and
    the zero mode lambda_{L+1} = 0 carrying weight 1/N_L.
    """
    if depth < 1 or not h.has_level(depth):
        raise HierarchyError(f"{h.name} cannot be truncated at depth {depth}", depth)
    terms = _series_terms(h, kernel, depth - 1) if depth > 1 else np.empty(0)
    closing = math.exp(-kernel.alpha * h.d(depth))
    lam = np.append(np.cumsum(np.append(terms, closing)[::-1])[::-1], 0.0)

    weight, ratio, inv_prev = _point_weights(h, depth)
    last = 1 / h.N(depth)
    return Spectrum(
        lam=lam,
        weight=np.append(weight, last),
        ratio=np.append(ratio, 0.0),
        inv_prev=np.append(inv_prev, last),
        tail_bound=np.zeros(depth + 1),
        tail_weight=0.0,
        next_lambda=0.0,
        hierarchy=h, kernel=kernel, depth=depth,
    )


def basis_value(h: UltrametricHierarchy, i: int, k: int) -> float:
    """phi_i on sphere S_k"""
    if i < 1 or k < 0:
        raise HierarchyError("basis index must be >= 1 and sphere index >= 0", i if i < 1 else k)
    if k > i:
        return 0.0
    prev, cur = h.N(i - 1), h.N(i)
    norm = 1.0 / math.sqrt(prev * (1 - prev / cur))
    return norm * (1 - prev / cur) if k < i else -norm * prev / cur


def point_source_coefficients(h: UltrametricHierarchy, n: int) -> np.ndarray:
    """c_1..c_n of the point source J_0"""
    if n < 1:
        raise HierarchyError("need at least one coefficient", n)
    return np.sqrt(_point_weights(h, n)[0])


def triple_product(h: UltrametricHierarchy, i: int, j: int, k: int) -> float:
    """sum_x phi_i phi_j phi_k over the whole space, closed form"""
    if min(i, j, k) < 1:
        raise HierarchyError("basis indices start at 1", min(i, j, k))

    def half(m: int) -> float:
        prev, cur = h.N(m - 1), h.N(m)
        return math.sqrt(1 - prev / cur) / math.sqrt(prev)

    total = 0.0
    if i == j == k:
        prev, cur = h.N(k - 1), h.N(k)
        r = prev / cur
        total += (1 - 3 * r + 2 * r * r) / (math.sqrt(prev) * (1 - r) ** 1.5)
    if i == j and i < k:
        total += half(k)
    if i == k and i < j:
        total += half(j)
    if j == k and j < i:
        total += half(i)
    return total


def reconstruct_ball_indicator(h: UltrametricHierarchy, i: int, k: int, n_terms: int) -> float:
    """Partial sum up to index n_terms of the expansion of J_i, evaluated on S_k"""
    if i < 0 or k < 0:
        raise HierarchyError("indices must be non-negative", min(i, k))
    if n_terms < 1:
        raise HierarchyError("need at least one term", n_terms)
    coeffs = point_source_coefficients(h, n_terms)
    total = 0.0
    for j in range(i + 1, n_terms + 1):
        total += coeffs[j - 1] * basis_value(h, j, k)
    return h.N(i) * total
