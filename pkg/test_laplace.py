#!/usr/bin/env python3
"""
Test the fixed Talbot inversion on transforms with known originals
"""

import numpy as np
import pytest

from ultradiff.core.errors import InversionError
from ultradiff.solvers.laplace import talbot_invert, talbot_nodes


@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_exponential(t):
    assert talbot_invert(lambda s: 1.0 / (s + 1.0), t) == pytest.approx(np.exp(-t), rel=1e-7)


def test_ramp_and_oscillation():
    print("🎯 Testing Talbot inversion")
    print("=" * 50)
    assert talbot_invert(lambda s: 1.0 / s ** 2, 3.0) == pytest.approx(3.0, rel=1e-9)
    assert talbot_invert(lambda s: 1.0 / (s ** 2 + 1.0), 1.0) == pytest.approx(np.sin(1.0), rel=1e-8)
    # sum of exponentials spread over many scales, as in the survival transform
    rates = 4.0 ** -np.arange(1, 20)
    weights = 2.0 ** -np.arange(1, 20)
    exact = float(np.sum(weights * np.exp(-rates * 50.0)))
    inverted = talbot_invert(lambda s: np.sum(weights / (s[:, None] + rates), axis=1), 50.0)
    assert inverted == pytest.approx(exact, rel=1e-8)


def test_node_layout():
    p, gamma = talbot_nodes(2.0, 20)
    assert len(p) == len(gamma) == 20
    assert p[0] == pytest.approx(8.0 / 2.0)
    assert np.all(np.imag(p[1:]) > 0)
    assert gamma[0] == pytest.approx(0.5 * np.exp(8.0))


def test_input_checks():
    with pytest.raises(ValueError):
        talbot_invert(lambda s: 1.0 / s, 0.0)
    with pytest.raises(ValueError):
        talbot_invert(lambda s: 1.0 / s, 1.0, nodes=8)
    with pytest.raises(InversionError, match="shape"):
        talbot_invert(lambda s: np.ones(3), 1.0)
    with pytest.raises(InversionError, match="not finite"):
        talbot_invert(lambda s: np.full(len(s), np.nan), 1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
