"""
Ultradiff Analysis
Complex Gamma, log-periodic asymptotic laws and empirical fits
"""

from .asymptotics import (AsymptoticModel, brute_series, center_value_model, center_value_modulation,
                          geometric_series_model, geometric_series_modulation, limiting_eigenvalue_scale,
                          residue_tail_limit, survival_model, survival_modulation)
from .fitting import fit_log_period, fit_power_exponent, log_periodicity_deviation, period_average
from .special import complex_gamma, reflection_defect

__all__ = [
    'complex_gamma', 'reflection_defect',
    'AsymptoticModel', 'limiting_eigenvalue_scale', 'residue_tail_limit', 'brute_series',
    'geometric_series_model', 'center_value_model', 'survival_model',
    'geometric_series_modulation', 'center_value_modulation', 'survival_modulation',
    'fit_power_exponent', 'period_average', 'log_periodicity_deviation', 'fit_log_period',
]
