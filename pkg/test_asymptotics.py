#!/usr/bin/env python3
"""
Test the log-periodic asymptotic laws against directly summed series
"""

import math

import numpy as np
import pytest

from ultradiff.analysis.asymptotics import (AsymptoticModel, GeometricSeries, brute_series, center_value_model,
                                            default_residue_limit, geometric_series_model,
                                            geometric_series_modulation, limiting_eigenvalue_scale,
                                            residue_tail_limit, survival_model, survival_modulation)
from ultradiff.analysis.fitting import fit_power_exponent, log_periodicity_deviation
from ultradiff.core.errors import HypothesisViolation, SampleError
from ultradiff.solvers.diffusion import center_value
from ultradiff.solvers.sink import delta_sequence, sink_spectrum, survival

LN4 = math.log(4.0)
LATE = np.logspace(8, 10, 9)
SURVIVAL_LATE = np.logspace(6, 8, 9)


@pytest.fixture(scope="module")
def padic_sink(padic_spectrum):
    return sink_spectrum(padic_spectrum, 1.0, 40)


def test_model_is_log_periodic():
    model = AsymptoticModel(beta=0.7, log_period=1.3, scale=2.0, prefactor=0.5)
    t = np.logspace(0, 3, 17)
    np.testing.assert_allclose(model.modulation(t * model.kappa), model.modulation(t), rtol=1e-10)
    np.testing.assert_allclose(model.modulation_complex(t).imag, 0.0, atol=1e-12)
    np.testing.assert_allclose(model.modulation_complex(t).real, model.modulation(t), rtol=1e-12)
    assert isinstance(model.modulation(5.0), float)
    assert model.asymptote(4.0) == pytest.approx(4.0 ** -0.7 * model.modulation(4.0))
    assert model.to_dict()['modes'] == 12


def test_automatic_mode_count():
    model = AsymptoticModel(beta=0.5, log_period=LN4, modes=None)
    assert model.mode_count() == 5
    assert len(model.gamma_coefficients()) == 6


def test_model_rejects_bad_parameters():
    with pytest.raises(HypothesisViolation):
        AsymptoticModel(beta=0.0, log_period=1.0)
    with pytest.raises(HypothesisViolation):
        AsymptoticModel(beta=1.0, log_period=-1.0)
    with pytest.raises(ValueError):
        AsymptoticModel(beta=1.0, log_period=1.0, modes=-1)
    with pytest.raises(HypothesisViolation):
        geometric_series_model(1.0, 2.0)


@pytest.mark.parametrize("a,b", [(2.0, 2.0), (2.0, 4.0), (3.0, 2.0)])
def test_geometric_series_law(a, b):
    """t^beta S(t) / modulation(t) -> 1 for S(t) = sum_m a^-m exp(-b^-m t)"""
    print(f"🎯 Testing geometric series law a={a:g}, b={b:g}")
    model = geometric_series_model(a, b)
    assert model.beta == pytest.approx(math.log(a) / math.log(b))
    for t in LATE:
        direct = brute_series(lambda m: a ** -m, lambda m: b ** -m, t, decay=a)
        ratio = t ** model.beta * direct / geometric_series_modulation(a, b, t)
        assert abs(ratio - 1.0) <= 1e-4


def test_geometric_series_witness():
    series = GeometricSeries(lambda m: 2.0 ** -m, lambda m: 3.0 ** -m, decay=2.0, bound=1.0)
    assert series.tail_bound(10) == pytest.approx(2.0 ** -10 * 2.0)
    assert brute_series(lambda m: 2.0 ** -m, lambda m: 3.0 ** -m, 0.0, decay=2.0) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(SampleError, match="witness"):
        brute_series(lambda m: 1.0, lambda m: 2.0 ** -m, 1.0, decay=2.0, bound=1.0)
    with pytest.raises(SampleError):
        GeometricSeries(lambda m: 1.0, lambda m: 1.0, decay=1.0)


def test_center_value_law(padic, padic_kernel, padic_spectrum):
    """2-adic center value: exponent 1/2 with log-period ln 4"""
    print("🎯 Testing center-value law")
    print("=" * 50)
    model = center_value_model(padic.asym, padic_kernel.alpha)
    assert model.beta == pytest.approx(0.5)
    assert model.log_period == pytest.approx(LN4)
    assert model.scale == pytest.approx(7 / 6)
    assert model.prefactor * model.gamma_coefficients()[0].real == pytest.approx(1.18369, rel=1e-4)
    assert limiting_eigenvalue_scale(padic.asym, padic_kernel.alpha) == pytest.approx(7 / 6)

    t = np.logspace(3, 7, 81)
    y = np.array([center_value(padic_spectrum, x) for x in t])
    beta_hat, stderr = fit_power_exponent(t, y, log_period=model.log_period)
    print(f"📊 fitted exponent {beta_hat:.10f} +/- {stderr:.1e}")
    assert beta_hat == pytest.approx(0.5, abs=0.01)

    late = t >= 1e6
    ratio = t[late] ** 0.5 * y[late] / model.modulation(t[late])
    assert np.max(np.abs(ratio - 1.0)) <= 1e-3
    assert log_periodicity_deviation(t, y * t ** 0.5, model.kappa) <= 1e-3


def test_survival_law(padic, padic_kernel, padic_sink):
    """Survival under k = 1: exponent (alpha xi - theta) / (alpha xi) = 1/2"""
    print("🎯 Testing survival law")
    print("=" * 50)
    _, delta, _ = delta_sequence(padic_sink)
    limit = default_residue_limit(padic.asym, padic_kernel.alpha, 1.0, delta)
    model = survival_model(padic.asym, padic_kernel.alpha, 1.0, delta)
    assert model.beta == pytest.approx(0.5)
    assert model.scale == pytest.approx(7 / 6 * (1 + delta))
    assert limit == pytest.approx(0.321272058155708, rel=1e-6)
    assert limit == pytest.approx(residue_tail_limit(padic_sink, padic.asym, padic_kernel.alpha), rel=1e-8)

    t = np.logspace(4, 8, 81)
    y = np.array([survival(padic_sink, x) for x in t])
    beta_hat, _ = fit_power_exponent(t, y, log_period=model.log_period)
    assert beta_hat == pytest.approx(0.5, abs=0.01)

    late = SURVIVAL_LATE
    direct = np.array([survival(padic_sink, x) for x in late])
    ratio = late ** 0.5 * direct / model.modulation(late)
    print(f"📊 Delta = {delta:.12f}, B = {limit:.12f}, worst ratio gap {np.max(np.abs(ratio - 1)):.2e}")
    assert np.max(np.abs(ratio - 1.0)) <= 2e-3

    # the module-level operation with its default residue limit
    by_default = late ** 0.5 * direct / survival_modulation(padic.asym, padic_kernel.alpha, 1.0, delta, late)
    assert np.max(np.abs(by_default - 1.0)) <= 1e-3


def test_residue_limit_from_lattice(padic):
    """The lattice limit tracks the sink rate as 1/k^2 and stays finite near the marginal exponent"""
    b1 = default_residue_limit(padic.asym, LN4, 1.0, 0.5)
    assert default_residue_limit(padic.asym, LN4, 2.0, 0.5) == pytest.approx(b1 / 4)
    assert 0 < default_residue_limit(padic.asym, 0.7, 1.0, 0.5) < np.inf
    assert 0 < default_residue_limit(padic.asym, 40.0, 1.0, 0.5) < np.inf
    with pytest.raises(HypothesisViolation):
        default_residue_limit(padic.asym, math.log(2.0), 1.0, 0.5)
    with pytest.raises(HypothesisViolation):
        default_residue_limit(padic.asym, LN4, 1.0, 0.0)


def test_perturbed_geometric_series_stays_bounded():
    """a_m = 2^-m (1 + 1/(m+1)), b_m = 2^-m: t S(t) stays between positive constants"""
    model = geometric_series_model(2.0, 2.0)
    t = np.logspace(2, 8, 25)
    direct = np.array([brute_series(lambda m: 2.0 ** -m * (1 + 1 / (m + 1)), lambda m: 2.0 ** -m, x,
                                    decay=2.0, bound=2.0) for x in t])
    ratio = t * direct / geometric_series_modulation(2.0, 2.0, t)
    assert model.beta == pytest.approx(1.0)
    assert np.all(ratio >= 1.0 - 1e-6)
    assert np.all(ratio <= 1.25)
    assert ratio[-1] < ratio[0]


def test_survival_law_hypothesis_guard(padic):
    with pytest.raises(HypothesisViolation, match="alpha\\*xi > theta"):
        survival_model(padic.asym, math.log(2.0), 1.0, 0.5)
    with pytest.raises(HypothesisViolation):
        survival_model(padic.asym, LN4, 1.0, 0.0)


def test_residue_limit_needs_poles(padic, padic_kernel, padic_spectrum):
    short = sink_spectrum(padic_spectrum, 1.0, 3)
    with pytest.raises(SampleError):
        residue_tail_limit(short, padic.asym, padic_kernel.alpha)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
