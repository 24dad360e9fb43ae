#!/usr/bin/env python3
"""
Dense Kolmogorov-Feller generator on a finite tree
Exact evolution by matrix exponential or ODE integration, and the lumped sphere chain
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh, expm

from ..core.errors import EvolutionError, OracleSizeError, ReductionError
from ..core.hierarchy import Kernel
from ..core.tree import MAX_ORACLE_POINTS, FiniteTree

LUMP_RTOL = 1e-12
# solve_ivp methods that take a Jacobian
IMPLICIT_METHODS = ("Radau", "BDF", "LSODA")


@dataclass(eq=False)
class RateMatrix:
    """
    Generator G of df/dt = G f. Off-diagonal G[x, y] is the rate y -> x,
    K(d(x, y)) with the pair's true LCA-ball population; columns sum to 0,
    or to -k on the center column when a sink is present.
    """
    tree: FiniteTree
    kernel: Kernel
    entries: np.ndarray
    sink_rate: float = 0.0
    center: int = 0

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0)

    def rate(self, source: int, target: int) -> float:
        return float(self.entries[target, source])

    def point_source(self) -> np.ndarray:
        f0 = np.zeros(self.n)
        f0[self.center] = 1.0
        return f0


def build_rate_matrix(tree: FiniteTree, kernel: Kernel, sink_rate: float = 0.0,
                      center: int = 0) -> RateMatrix:
    """All-to-all generator of the tree; the sink, if any, absorbs at `center`"""
    n = tree.n_leaves
    if n > MAX_ORACLE_POINTS:
        raise OracleSizeError(f"dense oracle holds at most {MAX_ORACLE_POINTS} points, tree has {n}")
    if sink_rate < 0:
        raise ValueError(f"sink rate must be non-negative, got {sink_rate}")
    if not 0 <= center < n:
        raise ValueError(f"center {center} is not a leaf of a {n}-point tree")

    G = kernel.rate(tree.distance_matrix(), tree.pair_population_matrix())
    np.fill_diagonal(G, 0.0)
    G[np.diag_indices(n)] = -G.sum(axis=0)
    G[center, center] -= sink_rate
    return RateMatrix(tree=tree, kernel=kernel, entries=G, sink_rate=sink_rate, center=center)


def _check_initial(matrix: RateMatrix, f0: Sequence[float], t: float) -> np.ndarray:
    f0 = np.asarray(f0, dtype=float)
    if f0.shape != (matrix.n,):
        raise ValueError(f"initial vector must have {matrix.n} entries, got shape {f0.shape}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if np.any(f0 < 0):
        raise ValueError("initial occupations must be non-negative")
    return f0


def _finite(result: np.ndarray, how: str) -> np.ndarray:
    if not np.all(np.isfinite(result)):
        raise EvolutionError(f"{how} produced non-finite occupations")
    return result


def evolve(matrix: RateMatrix, f0: Sequence[float], t: float) -> np.ndarray:
    """exp(t G) f0 by scaling and squaring"""
    f0 = _check_initial(matrix, f0, t)
    if t == 0:
        return f0.copy()
    return _finite(expm(t * matrix.entries) @ f0, "matrix exponential")


def evolve_ode(matrix: RateMatrix, f0: Sequence[float], t: float,
               method: str = "DOP853", rtol: float = 1e-12, atol: float = 1e-15) -> np.ndarray:
    """Reference path: adaptive integration of df/dt = G f"""
    f0 = _check_initial(matrix, f0, t)
    if t == 0:
        return f0.copy()
    G = matrix.entries
    implicit = {'jac': G} if method in IMPLICIT_METHODS else {}
    solution = solve_ivp(lambda _, f: G @ f, (0.0, t), f0, method=method, rtol=rtol, atol=atol, **implicit)
    if not solution.success:
        raise EvolutionError(f"ODE integration failed: {solution.message}")
    return _finite(solution.y[:, -1], "ODE integration")


def project_to_spheres(tree: FiniteTree, f: Sequence[float], center: int = 0) -> np.ndarray:
    """Total occupation of each sphere S_0..S_L around the center"""
    f = np.asarray(f, dtype=float)
    return np.bincount(tree.sphere_index(center), weights=f, minlength=tree.levels + 1)


def stationary_check(matrix: RateMatrix) -> float:
    """max |G u| for the uniform distribution u; 0 for a conservative generator"""
    uniform = np.full(matrix.n, 1.0 / matrix.n)
    return float(np.max(np.abs(matrix.entries @ uniform)))


@dataclass(eq=False)
class SphereGenerator:
    """Generator of the sphere masses; Q[k, l] is the rate from any point of S_l into S_k"""
    matrix: np.ndarray
    populations: np.ndarray

    @property
    def levels(self) -> int:
        return len(self.populations) - 1

    def symmetrized(self) -> np.ndarray:
        """M^-1/2 Q M^1/2, symmetric since Q[k, l] / M_k depends on the pair only"""
        root = np.sqrt(self.populations)
        return self.matrix * root[None, :] / root[:, None]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in decreasing order (0 first without sink)"""
        return eigh(self.symmetrized(), eigvals_only=True)[::-1]

    def evolve(self, masses: Sequence[float], t: float) -> np.ndarray:
        masses = np.asarray(masses, dtype=float)
        if t == 0:
            return masses.copy()
        return _finite(expm(t * self.matrix) @ masses, "sphere-chain exponential")

    def to_dict(self) -> Dict[str, list]:
        return {'matrix': self.matrix.tolist(), 'populations': self.populations.tolist()}


def lump(matrix: RateMatrix) -> SphereGenerator:
    """
    Sphere chain of a generator. Every point of a sphere must send the same
    total rate into every other sphere, otherwise the projection does not
    commute with the evolution.
    """
    tree = matrix.tree
    spheres = tree.sphere_index(matrix.center)
    L = tree.levels
    indicator = np.zeros((L + 1, matrix.n))
    indicator[spheres, np.arange(matrix.n)] = 1.0
    aggregated = indicator @ matrix.entries

    populations = indicator.sum(axis=1)
    Q = np.empty((L + 1, L + 1))
    for level in range(L + 1):
        columns = aggregated[:, spheres == level]
        spread = np.max(np.abs(columns - columns[:, :1]))
        if spread > LUMP_RTOL * max(1.0, float(np.max(np.abs(columns)))):
            raise ReductionError(f"points of sphere {level} disagree on their outgoing rates by {spread:.3e}")
        Q[:, level] = columns[:, 0]
    return SphereGenerator(matrix=Q, populations=populations)


def reduce_spherical(tree: FiniteTree, kernel: Kernel, sink_rate: float = 0.0,
                     center: int = 0) -> SphereGenerator:
    """Exact sphere-mass generator of the tree around `center`"""
    return lump(build_rate_matrix(tree, kernel, sink_rate, center))


def sphere_occupation(tree: FiniteTree, kernel: Kernel, times: Sequence[float],
                      sink_rate: float = 0.0, center: int = 0,
                      matrix: Optional[RateMatrix] = None) -> np.ndarray:
    """Sphere masses of the point source at each time, rows indexed by time"""
    matrix = matrix or build_rate_matrix(tree, kernel, sink_rate, center)
    f0 = matrix.point_source()
    return np.array([project_to_spheres(tree, evolve(matrix, f0, t), center) for t in times])
