#!/usr/bin/env python3
"""
Shared fixtures: the 2-adic hierarchy with alpha = ln 4 and its finite trees
"""

import math
from pathlib import Path

import pytest

from ultradiff.core.hierarchy import Kernel, make_self_similar
from ultradiff.core.tree import make_uniform_tree
from ultradiff.solvers.spectrum import compute_spectrum, finite_spectrum

LN4 = math.log(4.0)
SCENARIOS_DIR = Path(__file__).parent / "configs" / "scenarios"


@pytest.fixture(scope="session")
def padic():
    return make_self_similar(2, 1.0)


@pytest.fixture(scope="session")
def padic_kernel():
    return Kernel(alpha=LN4)


@pytest.fixture(scope="session")
def padic_spectrum(padic, padic_kernel):
    return compute_spectrum(padic, padic_kernel)


@pytest.fixture(scope="session")
def binary8():
    return make_uniform_tree(2, 8)


@pytest.fixture(scope="session")
def binary8_spectrum(binary8, padic_kernel):
    return finite_spectrum(binary8.induced_hierarchy(0), padic_kernel, 8)


@pytest.fixture
def scenarios_dir():
    return SCENARIOS_DIR
