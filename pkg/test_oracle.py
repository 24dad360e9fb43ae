#!/usr/bin/env python3
"""
Test the dense generator oracle and its lumped sphere chain against the spectral solution
"""

import warnings

import numpy as np
import pytest

from ultradiff.core.errors import OracleSizeError, ReductionError
from ultradiff.core.hierarchy import Kernel
from ultradiff.core.tree import make_tree, make_uniform_tree
from ultradiff.oracle.rate_matrix import (RateMatrix, build_rate_matrix, evolve, evolve_ode, lump,
                                          project_to_spheres, reduce_spherical, sphere_occupation,
                                          stationary_check)
from ultradiff.solvers.diffusion import solve_point_source
from ultradiff.solvers.spectrum import finite_spectrum

TIMES = (0.1, 1.0, 10.0, 100.0)


def test_generator_structure(binary8, padic_kernel):
    matrix = build_rate_matrix(binary8, padic_kernel)
    assert matrix.n == 256
    np.testing.assert_allclose(matrix.column_sums(), 0.0, atol=1e-14)
    assert stationary_check(matrix) <= 1e-15
    # siblings: exp(-ln 4) / 2
    assert matrix.rate(0, 1) == pytest.approx(0.125)
    assert matrix.rate(0, 1) == matrix.rate(1, 0)

    absorbing = build_rate_matrix(binary8, padic_kernel, sink_rate=1.0)
    sums = absorbing.column_sums()
    assert sums[0] == pytest.approx(-1.0)
    np.testing.assert_allclose(sums[1:], 0.0, atol=1e-14)


def test_oracle_matches_spectral_solution(binary8, padic_kernel, binary8_spectrum):
    print("🎯 Testing depth-8 oracle against the eigen-expansion")
    print("=" * 50)
    matrix = build_rate_matrix(binary8, padic_kernel)
    f0 = matrix.point_source()
    worst = 0.0
    for t in TIMES:
        exact = project_to_spheres(binary8, evolve(matrix, f0, t))
        analytic = solve_point_source(binary8_spectrum, t, 8).masses
        worst = max(worst, float(np.max(np.abs(exact - analytic))))
    print(f"📊 worst sphere-mass gap {worst:.2e}")
    assert worst <= 1e-10


def test_ode_path_agrees_with_exponential(padic_kernel):
    tree = make_uniform_tree(2, 4)
    matrix = build_rate_matrix(tree, padic_kernel, sink_rate=0.5)
    f0 = matrix.point_source()
    for t in (0.5, 5.0):
        np.testing.assert_allclose(evolve_ode(matrix, f0, t), evolve(matrix, f0, t), atol=1e-10)
    np.testing.assert_array_equal(evolve_ode(matrix, f0, 0.0), f0)


def test_ode_methods_without_warnings(padic_kernel):
    """Explicit methods get no Jacobian; implicit ones use G"""
    matrix = build_rate_matrix(make_uniform_tree(2, 3), padic_kernel)
    f0 = matrix.point_source()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        explicit = evolve_ode(matrix, f0, 2.0, method="RK45", rtol=1e-10, atol=1e-13)
        implicit = evolve_ode(matrix, f0, 2.0, method="Radau", rtol=1e-10, atol=1e-13)
    np.testing.assert_allclose(explicit, evolve(matrix, f0, 2.0), atol=1e-8)
    np.testing.assert_allclose(implicit, evolve(matrix, f0, 2.0), atol=1e-8)


def test_lumped_chain_spectrum(binary8, padic_kernel, binary8_spectrum):
    chain = reduce_spherical(binary8, padic_kernel)
    assert chain.levels == 8
    np.testing.assert_allclose(chain.populations, [1, 1, 2, 4, 8, 16, 32, 64, 128])
    np.testing.assert_allclose(np.sort(chain.eigenvalues()), np.sort(-binary8_spectrum.lam), atol=1e-12)
    sym = chain.symmetrized()
    np.testing.assert_allclose(sym, sym.T, atol=1e-15)
    assert set(chain.to_dict()) == {'matrix', 'populations'}


def test_lumped_chain_evolution(binary8, padic_kernel):
    matrix = build_rate_matrix(binary8, padic_kernel, sink_rate=1.0)
    chain = lump(matrix)
    start = project_to_spheres(binary8, matrix.point_source())
    for t in (0.5, 20.0):
        full = project_to_spheres(binary8, evolve(matrix, matrix.point_source(), t))
        np.testing.assert_allclose(chain.evolve(start, t), full, atol=1e-12)


def test_lump_rejects_broken_symmetry(binary8, padic_kernel):
    matrix = build_rate_matrix(binary8, padic_kernel)
    entries = matrix.entries.copy()
    entries[100, 2] += 0.1
    entries[2, 2] -= 0.1
    tampered = RateMatrix(tree=binary8, kernel=padic_kernel, entries=entries)
    with pytest.raises(ReductionError, match="sphere 2"):
        lump(tampered)


def test_oracle_size_limit(padic_kernel):
    with pytest.raises(OracleSizeError):
        build_rate_matrix(make_uniform_tree(2, 13), padic_kernel)


def test_inhomogeneous_tree_oracle():
    """Two subtrees of different branching; sphere masses around leaf 0 still follow the induced hierarchy"""
    print("🎯 Testing the inhomogeneous tree")
    tree = make_tree([[2, 2], [3, 3, 3]], [1.0, 2.0, 3.5])
    kernel = Kernel(alpha=1.0)
    assert tree.n_leaves == 13
    assert not tree.is_homogeneous()
    spec = finite_spectrum(tree.induced_hierarchy(0), kernel, tree.levels)
    rows = sphere_occupation(tree, kernel, TIMES)
    for t, exact in zip(TIMES, rows):
        analytic = solve_point_source(spec, t, tree.levels).masses
        np.testing.assert_allclose(analytic, exact, atol=1e-10)

def test_semigroup_through_the_oracle(binary8, padic_kernel, binary8_spectrum):
    """Evolving the analytic profile at t1 by t2 with exp(t2 G) gives the analytic profile at t1 + t2"""
    matrix = build_rate_matrix(binary8, padic_kernel)
    spheres = binary8.sphere_index(0)
    for t1, t2 in ((0.5, 2.0), (3.0, 30.0), (40.0, 400.0)):
        lifted = np.clip(solve_point_source(binary8_spectrum, t1, 8).values[spheres], 0.0, None)
        moved = project_to_spheres(binary8, evolve(matrix, lifted, t2))
        later = solve_point_source(binary8_spectrum, t1 + t2, 8).masses
        np.testing.assert_allclose(moved, later, atol=1e-9)


def test_ternary_tree_oracle():
    """Depth-5 ternary tree: 243 points, series against the matrix exponential"""
    print("🎯 Testing the depth-5 ternary tree")
    tree = make_uniform_tree(3, 5)
    kernel = Kernel(alpha=np.log(4.0))
    assert tree.n_leaves == 243
    spec = finite_spectrum(tree.induced_hierarchy(0), kernel, 5)
    matrix = build_rate_matrix(tree, kernel)
    f0 = matrix.point_source()
    for t in TIMES:
        exact = project_to_spheres(tree, evolve(matrix, f0, t))
        np.testing.assert_allclose(solve_point_source(spec, t, 5).masses, exact, atol=1e-10)



def test_evolution_input_checks(padic_kernel):
    tree = make_uniform_tree(2, 3)
    matrix = build_rate_matrix(tree, padic_kernel)
    with pytest.raises(ValueError):
        evolve(matrix, -matrix.point_source(), 1.0)
    with pytest.raises(ValueError):
        evolve(matrix, np.ones(3), 1.0)
    with pytest.raises(ValueError):
        evolve(matrix, matrix.point_source(), -1.0)
    with pytest.raises(ValueError):
        build_rate_matrix(tree, padic_kernel, sink_rate=-1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
