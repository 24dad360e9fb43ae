"""
Ultradiff Oracle
Dense generators, exact evolution and Monte Carlo on explicit finite trees
"""

from .gillespie import MonteCarloResult, gillespie, uniformity_pvalue
from .rate_matrix import (RateMatrix, SphereGenerator, build_rate_matrix, evolve, evolve_ode, lump,
                          project_to_spheres, reduce_spherical, sphere_occupation, stationary_check)

__all__ = [
    'RateMatrix', 'SphereGenerator', 'build_rate_matrix', 'evolve', 'evolve_ode', 'lump',
    'project_to_spheres', 'reduce_spherical', 'sphere_occupation', 'stationary_check',
    'MonteCarloResult', 'gillespie', 'uniformity_pvalue',
]
