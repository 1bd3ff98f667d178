import math

import numpy as np
import pytest
from scipy import linalg

from dickesim.hilbert import boson_matrices
from dickesim.squeezed_oscillator import (
    StabilityViolation,
    solve,
    verify_against_truncation,
)


def test_unsqueezed_oscillator():
    sol = solve(0.0)
    assert sol.gap == 1.0
    assert sol.ground_energy == 0.0
    assert sol.q_variance == 1.0
    assert sol.n_variance == 0.0
    assert sol.sigma == 0.0


def test_closed_form_point():
    sol = solve(0.75)
    assert sol.gap == pytest.approx(2.0)
    assert sol.q_variance == pytest.approx(0.5)
    assert sol.n_variance == pytest.approx(9.0 / 32.0)
    assert sol.ground_energy == pytest.approx(0.5)


def test_stability_violation():
    with pytest.raises(StabilityViolation):
        solve(-0.25)
    with pytest.raises(StabilityViolation):
        solve(-1.0)


@pytest.mark.parametrize("beta,n_b", [(0.5, 128), (2.0, 256), (-0.2, 256)])
def test_truncated_oracle_agreement(beta, n_b):
    rep = verify_against_truncation(beta, n_b)
    assert rep.energy_error <= 1e-8
    assert rep.q_variance_error <= 1e-8
    assert rep.n_variance_error <= 1e-8


def test_truncation_too_small_rejected():
    with pytest.raises(ValueError, match="tail"):
        verify_against_truncation(-0.2499, 64)


def test_divergence_exponent():
    betas = np.array([-0.2499, -0.249, -0.24, -0.2])
    logs = [math.log(solve(float(b)).q_variance) for b in betas]
    slope = np.polyfit(np.log1p(4.0 * betas), logs, 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.01)


def test_uncertainty_product():
    for beta in (-0.2, 0.0, 0.4, 3.0):
        sol = solve(beta)
        # Momentum variance of the squeezed vacuum is the gap itself.
        assert sol.q_variance * sol.gap == pytest.approx(1.0, abs=1e-15)


def test_invariants():
    for beta in (-0.24, -0.1, 0.0, 1.0, 10.0):
        sol = solve(beta)
        assert sol.gap > 0.0
        assert sol.q_variance * sol.gap == pytest.approx(1.0, abs=1e-14)
        assert sol.n_variance >= 0.0


def test_squeeze_transform_action():
    # U = exp[(sigma/2)(a†^2 - a^2)] maps a to cosh(sigma) a - sinh(sigma) a†;
    # truncation corrupts the top of the spectrum, so compare a low block of
    # a much larger space where the squeezed tails have decayed.
    n_b = 160
    b = boson_matrices(n_b)
    a = b.a.toarray()
    adag = b.adag.toarray()
    for beta in (-0.15, 0.5):
        sigma = solve(beta).sigma
        gen = 0.5 * sigma * (adag @ adag - a @ a)
        u = linalg.expm(gen)
        lhs = u @ a @ u.T
        rhs = math.cosh(sigma) * a - math.sinh(sigma) * adag
        low = slice(0, 24)
        np.testing.assert_allclose(lhs[low, low], rhs[low, low], atol=1e-8)
