#!/usr/bin/env python3
"""
Test pure diffusion from a point source and from general radial data
"""

import numpy as np
import pytest

from ultradiff.core.errors import ConfigError, HierarchyError, TruncationError
from ultradiff.core.hierarchy import make_self_similar
from ultradiff.solvers.diffusion import center_value, solve_general, solve_point_source
from ultradiff.solvers.series import ExponentialSeries
from ultradiff.solvers.spectrum import compute_spectrum, finite_spectrum

T_GRID = np.logspace(-1, 3, 41)


def test_center_value_starts_at_one(padic_spectrum):
    assert center_value(padic_spectrum, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert center_value(padic_spectrum, 1.0) < 1.0


def test_center_value_decreases(padic_spectrum):
    values = [center_value(padic_spectrum, t) for t in T_GRID]
    assert np.all(np.diff(values) < 0)


def test_mass_conservation_and_positivity(binary8_spectrum):
    """|total mass - 1| <= 1e-10 and every value >= -1e-12 on the default grid"""
    print("🎯 Testing conservation on the depth-8 space")
    print("=" * 50)
    worst_mass, lowest = 0.0, 0.0
    for t in T_GRID:
        profile = solve_point_source(binary8_spectrum, t, 8)
        worst_mass = max(worst_mass, abs(profile.total_mass - 1.0))
        lowest = min(lowest, float(np.min(profile.values)))
    print(f"📊 worst mass defect {worst_mass:.2e}, lowest value {lowest:.2e}")
    assert worst_mass <= 1e-10
    assert lowest >= -1e-12


def test_infinite_series_against_depth_12(padic, padic_kernel, padic_spectrum):
    """Truncation shifts every eigenvalue by (1/6) 4^-12, so the gap grows like t (1/6) 4^-12"""
    depth12 = finite_spectrum(padic, padic_kernel, 12)
    for t in (0.01, 0.1, 1.0):
        infinite = solve_point_source(padic_spectrum, t, 4).values
        finite = solve_point_source(depth12, t, 4).values
        assert np.max(np.abs(infinite - finite)) <= 1e-8
    for t in (2.0, 5.0, 10.0):
        infinite = solve_point_source(padic_spectrum, t, 4).values
        finite = solve_point_source(depth12, t, 4).values
        assert np.max(np.abs(infinite - finite)) <= t * 4.0 ** -12 / 6 * 1.01 + 1e-12


def test_point_source_profile_rows(padic_spectrum):
    profile = solve_point_source(padic_spectrum, 3.0, 4)
    rows = profile.to_rows()
    assert len(rows) == 5
    assert set(rows[0]) == {'t', 'k', 'f_point', 'f_sphere_mass', 'terms_used', 'residual_bound'}
    assert rows[0]['f_point'] == pytest.approx(center_value(padic_spectrum, 3.0), abs=1e-12)
    assert rows[3]['f_sphere_mass'] == pytest.approx(4 * rows[3]['f_point'])
    assert profile.residual_bound <= 1e-12
    # the point source spreads outwards monotonically in sphere index
    assert np.all(np.diff(profile.values) < 0)


def test_sphere_range_checks(binary8_spectrum, padic_spectrum):
    with pytest.raises(HierarchyError):
        solve_point_source(binary8_spectrum, 1.0, 9)
    with pytest.raises(HierarchyError):
        solve_point_source(padic_spectrum, 1.0, -1)


def test_general_coefficients_reproduce_point_source(binary8_spectrum):
    for t in (0.5, 5.0, 50.0):
        general = solve_general(binary8_spectrum, binary8_spectrum.c, t, 8)
        point = solve_point_source(binary8_spectrum, t, 8)
        np.testing.assert_allclose(general.values, point.values, atol=1e-13)
        assert np.isnan(general.residual_bound)


def test_general_coefficient_checks(binary8_spectrum, padic_spectrum):
    with pytest.raises(ConfigError, match="growing"):
        solve_general(padic_spectrum, np.arange(1.0, 20.0), 1.0, 3)
    with pytest.raises(ConfigError):
        solve_general(padic_spectrum, np.ones((2, 2)), 1.0, 3)
    with pytest.raises(HierarchyError):
        solve_general(binary8_spectrum, np.ones(12) * 0.1, 1.0, 3)

@pytest.mark.parametrize("p,depth", [(3, 6), (5, 4)])
def test_positivity_for_odd_primes(p, depth, padic_kernel):
    """Non-negative profiles and conserved mass for p = 3 and p = 5"""
    h = make_self_similar(p, 1.0)
    finite = finite_spectrum(h, padic_kernel, depth)
    infinite = compute_spectrum(h, padic_kernel)
    for t in T_GRID:
        profile = solve_point_source(finite, t, depth)
        assert np.min(profile.values) >= -1e-12
        assert profile.total_mass == pytest.approx(1.0, abs=1e-10)
        assert np.min(solve_point_source(infinite, t, 4).values) >= -1e-12


def test_outer_spheres_rise_then_fall(padic_spectrum):
    """f on S_k, k >= 1, starts at zero and has a single maximum in t"""
    t = np.concatenate([[0.0], np.logspace(-3, 4, 71)])
    values = np.array([solve_point_source(padic_spectrum, x, 4).values for x in t])
    for k in range(1, 5):
        curve = values[:, k]
        assert curve[0] == pytest.approx(0.0, abs=1e-11)
        falling = np.diff(curve) < 0
        first = int(np.argmax(falling))
        assert first > 0
        assert np.all(falling[first:])


def test_mass_peak_moves_outwards(binary8_spectrum):
    """The sphere holding the most mass never moves back towards the center"""
    t = np.logspace(-1, 7, 81)
    peaks = [int(np.argmax(solve_point_source(binary8_spectrum, x, 8).masses)) for x in t]
    assert peaks[0] == 0
    assert peaks[-1] == 8
    assert np.all(np.diff(peaks) >= 0)


def test_center_value_bounded_at_large_times(padic_spectrum):
    """t^(1/2) f(x_0, t) stays between positive constants over [1e3, 1e7]"""
    t = np.logspace(3, 7, 81)
    u = np.sqrt(t) * np.array([center_value(padic_spectrum, x) for x in t])
    print(f"📊 t^(1/2) f(x_0, t) in [{u.min():.6f}, {u.max():.6f}]")
    assert u.min() > 1.17
    assert u.max() < 1.20
    assert u.max() / u.min() <= 1.01



class _Harmonic(ExponentialSeries):
    """sum_n 2^-n exp(-n t) with no terms past 10, so the tail bound stalls"""

    def terms(self, n):
        m = np.arange(1, min(n, 10) + 1)
        return 2.0 ** -m, m.astype(float)

    def tail_bound(self, n):
        return 2.0 ** -10


def test_series_base_raises_when_tail_stalls():
    series = _Harmonic()
    with pytest.raises(TruncationError):
        series.evaluate(1.0, tol=1e-12)
    result = series.evaluate(1.0, tol=1e-2)
    assert result.terms_used == 10
    assert float(result) == pytest.approx(sum(2.0 ** -m * np.exp(-m) for m in range(1, 11)))
    with pytest.raises(ValueError):
        series.evaluate(-1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
