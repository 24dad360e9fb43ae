#!/usr/bin/env python3
"""
Ultradiff error types
All library errors are ValueErrors so plain callers keep working
"""

from typing import Optional


class UltradiffError(ValueError):
    """Base class for every error raised by the library"""


class ConfigError(UltradiffError):
    """Malformed scenario or run configuration"""


class HierarchyError(UltradiffError):
    """Hierarchy invariant violated or level out of range"""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message if index is None else f"{message} (index {index})")
        self.index = index


class TruncationError(UltradiffError):
    """A series tail bound cannot be pushed below the requested tolerance"""

    def __init__(self, message: str, bound: float = float("inf")):
        super().__init__(f"{message} (achievable bound {bound:.3e})")
        self.bound = bound


class PoleProximityError(UltradiffError):
    """Evaluation point sits on (or numerically at) a pole"""


class PoleSearchError(UltradiffError):
    """Bracketing or bisection failed to isolate a root"""


class HypothesisViolation(UltradiffError):
    """Parameters fall outside the regime where an asymptotic law is known"""


class ReductionError(UltradiffError):
    """Tree dynamics are not lumpable onto spheres around the center"""


class OracleSizeError(UltradiffError):
    """Dense oracle requested beyond its size budget"""


class SampleError(UltradiffError):
    """Samples unusable for fitting or periodicity checks"""


class DegenerateDistanceWarning(UserWarning):
    """Center-to-center distance requested"""


class InversionError(UltradiffError):
    """Transform not finite on the inversion contour"""


class EvolutionError(UltradiffError):
    """Exact finite evolution produced non-finite values"""
