#!/usr/bin/env python3
"""
Ultrametric hierarchies
Sphere radii d_i and ball populations N_i around a center, plus scenario generators
"""

import math
import warnings
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, DegenerateDistanceWarning, HierarchyError

SequenceLike = Union[Sequence[float], Callable[[int], float]]

# levels beyond this are never tabulated implicitly
DEFAULT_REPAIR_LEVELS = 128


@dataclass(frozen=True)
class AsymptoticParams:
    """Asymptotic parameters: N_i ~ C^-1 e^(theta i), d_i ~ xi i + D"""
    theta: float
    xi: float
    C: float = 1.0
    D: float = 0.0

    def __post_init__(self):
        if not (self.theta > 0 and self.xi > 0 and self.C > 0 and self.D >= 0):
            raise ConfigError(
                f"asymptotic parameters need theta, xi, C > 0 and D >= 0, got {self.to_dict()}"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AsymptoticParams':
        return cls(theta=float(data['theta']), xi=float(data['xi']),
                   C=float(data.get('C', 1.0)), D=float(data.get('D', 0.0)))

    def to_dict(self) -> Dict[str, float]:
        return {'theta': self.theta, 'xi': self.xi, 'C': self.C, 'D': self.D}


@dataclass(frozen=True)
class Kernel:
    """Transition kernel K(d) = exp(-alpha d) / N(d); times are in units of tau = 1"""
    alpha: float
    tau: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ConfigError(f"kernel alpha must be positive, got {self.alpha}")
        if self.tau != 1.0:
            raise ConfigError("time unit tau is fixed to 1")

    def decay(self, d):
        """exp(-alpha d), scalar or array"""
        return np.exp(-self.alpha * np.asarray(d, dtype=float))

    def rate(self, d, population):
        """K(d) for a pair at distance d inside a ball of the given population"""
        return self.decay(d) / np.asarray(population, dtype=float)


class UltrametricHierarchy:
    """
    Radii d_1 < d_2 < ... and populations 1 = N_0 < N_1 < ... around a center.

    Either tabulated (sequences, bounded by max_level) or generator-backed
    (callables, any level on demand). Immutable after construction.
    """

    def __init__(self,
                 radius: SequenceLike,
                 population: Union[Sequence[int], Callable[[int], int]],
                 asym: Optional[AsymptoticParams] = None,
                 max_level: Optional[int] = None,
                 name: str = "hierarchy"):
        self.asym = asym
        self.name = name

        if callable(radius) != callable(population):
            raise ConfigError("radius and population must both be sequences or both callables")

        if callable(radius):
            self._radius = radius
            self._population = population
            self.max_level = max_level
            self._table = None
        else:
            d = [float(x) for x in radius]
            N = [int(x) for x in population]
            if len(N) != len(d) + 1:
                raise ConfigError(f"need len(N) == len(d) + 1, got {len(N)} and {len(d)}")
            if not d:
                raise ConfigError("a tabulated hierarchy needs at least one level")
            self._table = (tuple([0.0] + d), tuple(N))
            self.max_level = len(d)
            self._check_table()

    def _check_table(self):
        d, N = self._table
        if N[0] != 1:
            raise HierarchyError("N_0 must be 1", 0)
        for i in range(1, len(d)):
            if not d[i] > d[i - 1]:
                raise HierarchyError("radii must be strictly increasing", i)
            if N[i] < N[i - 1] + 1:
                raise HierarchyError("populations must be strictly increasing", i)

    @property
    def is_lazy(self) -> bool:
        return self._table is None

    def has_level(self, i: int) -> bool:
        return i >= 0 and (self.max_level is None or i <= self.max_level)

    def _require(self, i: int):
        if not self.has_level(i):
            raise HierarchyError(f"level unavailable in {self.name} (max_level={self.max_level})", i)

    def d(self, i: int) -> float:
        """Radius of sphere S_i, with d_0 = 0"""
        self._require(i)
        if i == 0:
            return 0.0
        if self._table is not None:
            return self._table[0][i]
        value = float(self._radius(i))
        previous = 0.0 if i == 1 else float(self._radius(i - 1))
        if not value > previous:
            raise HierarchyError("radii must be strictly increasing", i)
        return value

    def N(self, i: int) -> int:
        """Population of ball B_i"""
        self._require(i)
        if i == 0:
            return 1
        if self._table is not None:
            return self._table[1][i]
        value = int(self._population(i))
        previous = 1 if i == 1 else int(self._population(i - 1))
        if value < previous + 1:
            raise HierarchyError("populations must be strictly increasing", i)
        return value

    def M(self, i: int) -> int:
        """Population of sphere S_i (M_0 = 1)"""
        return 1 if i == 0 else self.N(i) - self.N(i - 1)

    def point_weight(self, i: int) -> float:
        """a_i = N_{i-1}^-1 (1 - N_{i-1}/N_i), the squared point-source coefficient"""
        if i < 1:
            raise HierarchyError("point weights start at index 1", i)
        prev, cur = self.N(i - 1), self.N(i)
        return (cur - prev) / (prev * cur)

    def radii(self, n: int) -> np.ndarray:
        """d_0..d_n as an array"""
        return np.array([self.d(i) for i in range(n + 1)], dtype=float)

    def populations(self, n: int) -> List[int]:
        """N_0..N_n as exact integers"""
        return [self.N(i) for i in range(n + 1)]

    def radius_deviation(self, n: int) -> float:
        """max_{i<=n} |d_i - xi i|, the witnessed bound B (needs asym)"""
        if self.asym is None:
            raise HierarchyError("radius deviation needs asymptotic parameters")
        d = self.radii(n)
        return float(np.max(np.abs(d[1:] - self.asym.xi * np.arange(1, n + 1))))

    def tabulate(self, n: int) -> 'UltrametricHierarchy':
        """Tabulated copy of levels 0..n"""
        return UltrametricHierarchy(self.radii(n)[1:].tolist(), self.populations(n),
                                    asym=self.asym, name=self.name)

    def to_dict(self, n: Optional[int] = None) -> Dict[str, Any]:
        n = n if n is not None else (self.max_level or 16)
        return {
            'name': self.name,
            'd': self.radii(n)[1:].tolist(),
            'N': self.populations(n),
            'asym': self.asym.to_dict() if self.asym else None,
            'max_level': self.max_level,
        }

    def __repr__(self) -> str:
        depth = "unbounded" if self.max_level is None else self.max_level
        return f"UltrametricHierarchy({self.name!r}, levels={depth})"


def make_self_similar(p: int, xi: float) -> UltrametricHierarchy:
    """p-adic style hierarchy: d_i = xi i, N_i = p^i"""
    if int(p) != p or p < 2:
        raise HierarchyError(f"branching p must be an integer >= 2, got {p}")
    if not xi > 0:
        raise HierarchyError(f"xi must be positive, got {xi}")
    p = int(p)
    return UltrametricHierarchy(
        radius=lambda i: xi * i,
        population=lambda i: p ** i,
        asym=AsymptoticParams(theta=math.log(p), xi=xi, C=1.0, D=0.0),
        name=f"self_similar(p={p}, xi={xi})",
    )


def _as_callable(seq: SequenceLike, extend: Optional[str], label: str) -> Callable[[int], float]:
    if callable(seq):
        return seq
    values = [float(x) for x in seq]
    if not values:
        raise ConfigError(f"{label} sequence is empty")
    if extend == "cycle":
        return lambda i: values[(i - 1) % len(values)]
    if extend == "hold":
        return lambda i: values[min(i, len(values)) - 1]
    return lambda i: values[i - 1]


def make_perturbed(p: int, xi: float,
                   delta: SequenceLike,
                   epsilon: SequenceLike,
                   levels: Optional[int] = None,
                   repair: bool = False,
                   extend: Optional[str] = None) -> UltrametricHierarchy:
    """
    Perturbed hierarchy d_i = xi i + delta_i, N_i = round(p^i (1 + epsilon_i)).

    Sequences are indexed from i = 1 (element 0 is delta_1). Tabulated inputs
    without `extend` bound the hierarchy to their length; callables or an
    `extend` rule ("cycle" or "hold") make it generator-backed. By default a
    monotonicity violation is rejected with its index; `repair` bumps N_i to
    N_{i-1} + 1 instead.
    """
    if int(p) != p or p < 2:
        raise HierarchyError(f"branching p must be an integer >= 2, got {p}")
    if not xi > 0:
        raise HierarchyError(f"xi must be positive, got {xi}")
    if extend not in (None, "cycle", "hold"):
        raise ConfigError(f"extend must be 'cycle' or 'hold', got {extend!r}")
    p = int(p)

    tabulated_lengths = [len(s) for s in (delta, epsilon) if not callable(s)]
    dfun = _as_callable(delta, extend, "delta")
    efun = _as_callable(epsilon, extend, "epsilon")

    def radius(i: int) -> float:
        return xi * i + dfun(i)

    def population(i: int) -> int:
        eps = efun(i)
        if not eps > -1:
            raise HierarchyError("epsilon must exceed -1", i)
        return int(round(p ** i * (1.0 + eps)))

    asym = AsymptoticParams(theta=math.log(p), xi=xi, C=1.0, D=0.0)
    name = f"perturbed(p={p}, xi={xi})"

    if levels is None and tabulated_lengths and extend is None:
        levels = min(tabulated_lengths)
    if levels is None and repair:
        levels = DEFAULT_REPAIR_LEVELS

    if levels is None:
        return UltrametricHierarchy(radius, population, asym=asym, name=name)

    d: List[float] = []
    N: List[int] = [1]
    for i in range(1, levels + 1):
        di = radius(i)
        if not di > (d[-1] if d else 0.0):
            raise HierarchyError("perturbed radii are not strictly increasing", i)
        Ni = population(i)
        if Ni < N[-1] + 1:
            if not repair:
                raise HierarchyError("perturbed populations are not strictly increasing", i)
            Ni = N[-1] + 1
        d.append(di)
        N.append(Ni)
    return UltrametricHierarchy(d, N, asym=asym, name=name)


def pair_sphere_distance(h: UltrametricHierarchy, i: int, j: int) -> float:
    """Distance between a point of S_i and a point of S_j: max(d_i, d_j)"""
    if i < 0 or j < 0:
        raise HierarchyError("sphere indices must be non-negative", min(i, j))
    if i == j == 0:
        warnings.warn("distance from the center to itself is 0 by convention",
                      DegenerateDistanceWarning, stacklevel=2)
        return 0.0
    if i == j:
        raise HierarchyError("intra-sphere distance not sphere-determined", i)
    return max(h.d(i), h.d(j))
