"""
Ultradiff Core Components
"""

from .conditions import ConditionReport, validate
from .errors import (ConfigError, DegenerateDistanceWarning, EvolutionError, HierarchyError,
                     HypothesisViolation, InversionError, OracleSizeError, PoleProximityError,
                     PoleSearchError, ReductionError, SampleError, TruncationError, UltradiffError)
from .hierarchy import (AsymptoticParams, Kernel, UltrametricHierarchy, make_perturbed,
                        make_self_similar, pair_sphere_distance)
from .scenarios import RunConfig, ScenarioConfig, ScenarioManager, TGrid, Tolerances, load_run_config
from .tree import FiniteTree, hierarchy_tree, make_tree, make_uniform_tree

__all__ = [
    'AsymptoticParams', 'Kernel', 'UltrametricHierarchy', 'make_self_similar', 'make_perturbed',
    'pair_sphere_distance', 'FiniteTree', 'make_tree', 'make_uniform_tree', 'hierarchy_tree',
    'ConditionReport', 'validate',
    'RunConfig', 'ScenarioConfig', 'ScenarioManager', 'TGrid', 'Tolerances', 'load_run_config',
    'UltradiffError', 'ConfigError', 'HierarchyError', 'TruncationError', 'PoleProximityError',
    'PoleSearchError', 'HypothesisViolation', 'ReductionError', 'OracleSizeError', 'SampleError',
    'InversionError', 'EvolutionError', 'DegenerateDistanceWarning',
]
