#!/usr/bin/env python3
"""
Gillespie simulation of walkers on a finite tree
Jump targets are drawn level first, then uniformly among the cousins at that level
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from scipy.stats import chisquare

from ..core.errors import SampleError
from ..core.hierarchy import Kernel
from ..core.tree import FiniteTree

DEAD = -1
Z_LIMIT = 3.0
# normal approximation of the counts is trusted from this many expected walkers up
MIN_EXPECTED_COUNT = 10.0


@dataclass(eq=False)
class MonteCarloResult:
    """Walker positions at the observation times (DEAD once absorbed)"""
    times: np.ndarray
    positions: np.ndarray
    spheres: np.ndarray
    seed: int
    sink_rate: float
    events: int = 0
    meta: Dict[str, float] = field(default_factory=dict)

    @property
    def walkers(self) -> int:
        return self.positions.shape[1]

    @property
    def levels(self) -> int:
        return int(self.spheres.max())

    def counts(self) -> np.ndarray:
        """Walkers on each sphere, rows indexed by time"""
        rows = []
        for snapshot in self.positions:
            live = snapshot[snapshot != DEAD]
            rows.append(np.bincount(self.spheres[live], minlength=self.levels + 1))
        return np.array(rows)

    def occupation(self) -> np.ndarray:
        return self.counts() / self.walkers

    def occupation_stderr(self) -> np.ndarray:
        p = self.occupation()
        return np.sqrt(p * (1 - p) / self.walkers)

    def survival_fraction(self) -> np.ndarray:
        return np.mean(self.positions != DEAD, axis=1)

    def survival_stderr(self) -> np.ndarray:
        p = self.survival_fraction()
        return np.sqrt(p * (1 - p) / self.walkers)

    def leaf_counts(self, index: int = -1) -> np.ndarray:
        snapshot = self.positions[index]
        return np.bincount(snapshot[snapshot != DEAD], minlength=len(self.spheres))

    def z_scores(self, analytic: np.ndarray) -> np.ndarray:
        """(empirical - analytic) / binomial stderr of the analytic probability, [time, sphere]"""
        return _z(self.occupation(), np.asarray(analytic, dtype=float), self.walkers)

    def survival_z_scores(self, analytic: Sequence[float]) -> np.ndarray:
        return _z(self.survival_fraction(), np.asarray(analytic, dtype=float), self.walkers)

    def consistent(self, analytic: np.ndarray, limit: float = Z_LIMIT,
                   min_expected: float = MIN_EXPECTED_COUNT) -> bool:
        """All |z| <= limit on the spheres expected to hold at least min_expected walkers"""
        analytic = np.asarray(analytic, dtype=float)
        tested = analytic * self.walkers >= min_expected
        return bool(np.all(np.abs(self.z_scores(analytic)[tested]) <= limit))

    def survival_consistent(self, analytic: Sequence[float], limit: float = Z_LIMIT) -> bool:
        return bool(np.all(np.abs(self.survival_z_scores(analytic)) <= limit))

    def to_rows(self, analytic: np.ndarray) -> List[Dict[str, float]]:
        """Rows t, k, empirical, analytic, stderr, z; analytic is indexed [time, sphere]"""
        analytic = np.asarray(analytic, dtype=float)
        occupation, z = self.occupation(), self.z_scores(analytic)
        stderr = _binomial_stderr(analytic, self.walkers)
        return [
            {'t': float(t), 'k': k, 'empirical': float(occupation[j, k]),
             'analytic': float(analytic[j, k]), 'stderr': float(stderr[j, k]), 'z': float(z[j, k])}
            for j, t in enumerate(self.times) for k in range(self.levels + 1)
        ]

    def survival_rows(self, analytic: Sequence[float]) -> List[Dict[str, float]]:
        analytic = np.asarray(analytic, dtype=float)
        survived, z = self.survival_fraction(), self.survival_z_scores(analytic)
        stderr = _binomial_stderr(analytic, self.walkers)
        return [
            {'t': float(t), 'empirical': float(survived[j]), 'analytic': float(analytic[j]),
             'stderr': float(stderr[j]), 'z': float(z[j])}
            for j, t in enumerate(self.times)
        ]


def _binomial_stderr(p: np.ndarray, walkers: int) -> np.ndarray:
    return np.sqrt(np.clip(p * (1 - p), 0.0, None) / walkers)


def _z(empirical: np.ndarray, analytic: np.ndarray, walkers: int) -> np.ndarray:
    stderr = _binomial_stderr(analytic, walkers)
    gap = empirical - analytic
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.where(stderr > 0, gap / np.where(stderr > 0, stderr, 1.0),
                        np.where(gap == 0, 0.0, np.inf))


def level_rates(tree: FiniteTree, kernel: Kernel) -> np.ndarray:
    """(n, L) rates of jumping to a level-h cousin, all cousins of that level aggregated"""
    sizes, _ = tree.ball_table()
    cousins = sizes[1:] - sizes[:-1]
    decay = kernel.decay(tree.level_distance[1:])
    return (cousins * decay[:, None] / sizes[1:]).T


def gillespie(tree: FiniteTree, kernel: Kernel, sink_rate: float = 0.0,
              walkers: int = 100_000, times: Sequence[float] = (0.5, 5.0),
              seed: int = 0, center: int = 0) -> MonteCarloResult:
    """
    Exact jump simulation of independent walkers started at the center,
    all advanced together one event at a time. The sink removes a walker
    sitting on the center at rate sink_rate.
    """
    if walkers < 1:
        raise SampleError(f"need at least one walker, got {walkers}")
    times = np.sort(np.asarray(times, dtype=float))
    if times.size == 0 or times[0] < 0:
        raise SampleError("observation times must be non-negative and non-empty")
    horizon = float(times[-1])
    if not horizon > 0:
        raise SampleError("horizon must be positive")
    if sink_rate < 0:
        raise ValueError(f"sink rate must be non-negative, got {sink_rate}")

    sizes, first = tree.ball_table()
    rates = level_rates(tree, kernel)
    cumulative = np.cumsum(rates, axis=1)
    kill = np.zeros(tree.n_leaves)
    kill[center] = sink_rate
    total = cumulative[:, -1] + kill

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    position = np.full(walkers, center, dtype=np.int64)
    clock = np.zeros(walkers)
    snapshots = np.full((len(times), walkers), DEAD, dtype=np.int64)
    active = np.arange(walkers)
    events = 0

    while active.size:
        here = position[active]
        now = clock[active]
        later = now + rng.exponential(1.0 / total[here])
        for j, tau in enumerate(times):
            seen = (now <= tau) & (later > tau)
            snapshots[j, active[seen]] = here[seen]

        moving = later <= horizon
        active, here, later = active[moving], here[moving], later[moving]
        if not active.size:
            break
        events += active.size

        draw = rng.random(active.size) * total[here] - kill[here]
        jumping = draw >= 0
        active, here, later, draw = active[jumping], here[jumping], later[jumping], draw[jumping]
        if not active.size:
            break
        level = np.minimum(np.sum(cumulative[here] <= draw[:, None], axis=1), tree.levels - 1) + 1

        ball_start, ball_size = first[level, here], sizes[level, here]
        inner_start, inner_size = first[level - 1, here], sizes[level - 1, here]
        offset = rng.integers(0, ball_size - inner_size)
        target = ball_start + offset
        target = np.where(target >= inner_start, target + inner_size, target)

        position[active] = target
        clock[active] = later

    return MonteCarloResult(times=times, positions=snapshots, spheres=tree.sphere_index(center),
                            seed=seed, sink_rate=sink_rate, events=events,
                            meta={'walkers': walkers, 'horizon': horizon})


def uniformity_pvalue(result: MonteCarloResult, index: int = -1) -> float:
    """Chi-square p-value of the leaf histogram against the uniform distribution"""
    counts = result.leaf_counts(index)
    if counts.sum() == 0:
        raise SampleError("no surviving walkers to test")
    return float(chisquare(counts).pvalue)
