"""
Ultradiff Solvers
Spectrum, pure diffusion, the reaction sink and Laplace inversion
"""

from .diffusion import SphereProfile, center_value, solve_general, solve_point_source
from .laplace import talbot_invert
from .series import ExponentialSeries, SeriesValue
from .sink import (SinkSpectrum, center_transform, center_value_sink, delta_sequence, find_poles,
                   j_function, laplace_value, residues, sink_spectrum, survival, survival_transform)
from .spectrum import (Spectrum, basis_value, compute_spectrum, eigenvalue, eigenvalues, eta,
                       finite_spectrum, point_source_coefficients, reconstruct_ball_indicator,
                       triple_product)

__all__ = [
    'ExponentialSeries', 'SeriesValue',
    'Spectrum', 'compute_spectrum', 'finite_spectrum', 'eigenvalue', 'eigenvalues', 'eta',
    'basis_value', 'point_source_coefficients', 'triple_product', 'reconstruct_ball_indicator',
    'SphereProfile', 'center_value', 'solve_point_source', 'solve_general',
    'SinkSpectrum', 'j_function', 'find_poles', 'residues', 'sink_spectrum', 'survival',
    'center_value_sink', 'delta_sequence', 'center_transform', 'survival_transform', 'laplace_value',
    'talbot_invert',
]
