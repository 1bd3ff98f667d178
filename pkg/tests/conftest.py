"""Shared fixtures: cached ground-state solves reused across test modules."""

import numpy as np
import pytest

from dickesim.verification import solve_full


@pytest.fixture(scope="session")
def solve():
    """Process-wide cached full-model solver (delta = 1)."""
    return solve_full


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
