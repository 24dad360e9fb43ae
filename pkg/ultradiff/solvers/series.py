#!/usr/bin/env python3
"""
Exponential series base
Sums of decaying exponentials with a certified coefficient tail
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.errors import TruncationError

# exp(-46) < 1.1e-20: terms decayed past this are dropped
HEAD_CUTOFF = 46.0
MAX_TERMS = 4096


@dataclass
class SeriesValue:
    """Partial sum with its residual bound"""
    value: float
    terms_used: int
    residual_bound: float

    def __float__(self) -> float:
        return float(self.value)


class ExponentialSeries(ABC):
    """Abstract series  sum_i w_i exp(-r_i t)  with r_i >= 0"""

    start_terms = 32

    @abstractmethod
    def terms(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """First n weights and rates (fewer when the series is finite)"""
        pass

    @abstractmethod
    def tail_bound(self, n: int) -> float:
        """Upper bound on sum_{i>n} |w_i|"""
        pass

    @property
    def max_terms(self) -> Optional[int]:
        """Number of terms of a finite series, None if unbounded"""
        return None

    @staticmethod
    def partial_sum(weights: np.ndarray, rates: np.ndarray, t: float) -> float:
        exponent = rates * t
        live = exponent <= HEAD_CUTOFF
        return float(np.sum(weights[live] * np.exp(-exponent[live])))

    def evaluate(self, t: float, tol: float = 1e-12, relative: bool = False) -> SeriesValue:
        """Partial sum at t, extended until the tail bound meets tol"""
        if t < 0:
            raise ValueError(f"time must be non-negative, got {t}")
        n = self.start_terms if self.max_terms is None else self.max_terms
        while True:
            weights, rates = self.terms(n)
            value = self.partial_sum(weights, rates, t)
            bound = self.tail_bound(len(weights))
            target = tol * abs(value) if relative else tol
            if bound <= target or self.max_terms is not None:
                return SeriesValue(value, len(weights), bound)
            if n >= MAX_TERMS:
                raise TruncationError(f"{type(self).__name__} did not reach tol={tol:g} at t={t:g}", bound)
            n *= 2
