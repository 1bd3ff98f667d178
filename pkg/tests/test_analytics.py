import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

import dickesim.analytics as an


def test_mf_energy_values():
    assert an.mf_energy(0.0, 0.5, 3.0, 1.0) == -3.0
    theta = an.mf_theta(2.0)
    assert an.mf_energy(theta, 2.0, 1.0, 1.0) == pytest.approx(-1.25, abs=1e-14)


def test_mf_energy_quartic_flatness_at_threshold():
    # E(theta) + j delta ~ theta^4 at kappa = 1: fit the log-log exponent.
    thetas = np.array([0.02, 0.01, 0.005, 0.0025])
    excess = np.array([an.mf_energy(t, 1.0, 1.0, 1.0) + 1.0 for t in thetas])
    slope = np.polyfit(np.log(thetas), np.log(excess), 1)[0]
    assert slope == pytest.approx(4.0, abs=0.1)


def test_mf_theta_branches():
    assert an.mf_theta(0.5) == 0.0
    assert an.mf_theta(1.0) == 0.0
    assert an.mf_theta(2.0, +1) == pytest.approx(math.pi / 3.0, abs=1e-14)
    assert an.mf_theta(2.0, -1) == pytest.approx(-math.pi / 3.0, abs=1e-14)


def test_mf_theta_minimizes_energy():
    for kappa in (0.3, 0.9, 1.2, 3.0):
        res = minimize_scalar(
            lambda t: an.mf_energy(t, kappa, 1.0, 1.0),
            bounds=(0.0, math.pi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        assert abs(res.x - an.mf_theta(kappa)) <= 1e-6 or (
            kappa <= 1.0 and res.x <= 1e-5
        )
        assert an.mf_energy(an.mf_theta(kappa), kappa, 1.0, 1.0) <= res.fun + 1e-8


def test_mf_alpha():
    assert an.mf_alpha(0.0, 5.0, 0.3, 1.0) == 0.0
    theta = an.mf_theta(2.0)
    lam = an.kappa_to_lambda(5.0, 1.0, 0.01, 2.0)
    alpha = an.mf_alpha(theta, 5.0, lam, 0.01)
    assert alpha**2 == pytest.approx(375.0, rel=1e-12)
    assert an.mf_alpha(-theta, 5.0, lam, 0.01) == -alpha


def test_mf_order_parameter_branches():
    assert an.mf_order_parameter(0.99, 1.0) == 0.0
    assert an.mf_order_parameter(2.0, 1.0) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert an.mf_order_parameter(1e9, 1.0) == pytest.approx(1.0, abs=1e-9)


def test_mf_susceptibility_branches():
    assert an.mf_susceptibility(0.0) == 1.0
    assert an.mf_susceptibility(0.5) == pytest.approx(2.0)
    assert an.mf_susceptibility(2.0) == pytest.approx(1.0 / 6.0)
    assert an.mf_susceptibility(1.0) == math.inf


def test_susceptibility_divergence_is_linear():
    for delta in (1e-3, 1e-4, 1e-5):
        below = 1.0 / an.mf_susceptibility(1.0 - delta)
        assert below == pytest.approx(delta, rel=1e-9)
        above = 1.0 / an.mf_susceptibility(1.0 + delta)
        assert above == pytest.approx(2.0 * delta, rel=1e-2)


def test_co_oscillator_variance():
    assert an.co_oscillator_variance(0.0) == 1.0
    assert an.co_oscillator_variance(0.75) == pytest.approx(2.0)
    assert an.co_oscillator_variance(2.0) == pytest.approx(2.0 / math.sqrt(3.0))
    assert an.co_oscillator_variance(1.0) == math.inf


def test_co_entropy_values():
    assert an.co_entropy(1.0, 5.0) == 0.0
    assert an.co_entropy(0.5, 0.5) == 0.0
    assert an.co_entropy(2.0, 0.5) == pytest.approx(0.5623351446, abs=1e-9)
    assert an.co_entropy(1e6, 2.0) == pytest.approx(math.log(2.0), abs=1e-12)


def test_co_entropy_monotone_and_bounded():
    for j in (0.5, 1.0, 5.0, 40.0):
        values = [an.co_entropy(k, j) for k in np.linspace(0.0, 6.0, 200)]
        assert all(b >= a - 1e-14 for a, b in zip(values, values[1:]))
        assert max(values) <= math.log(2.0) + 1e-12


def test_co_entropy_step_function_limit():
    assert an.co_entropy(1.1, 200.0) == pytest.approx(math.log(2.0), abs=1e-3)


def test_cs_entropy_divergence():
    assert an.cs_entropy_divergence(0.0) == 0.0
    assert an.cs_entropy_divergence(0.9) == pytest.approx(0.5756462732, abs=1e-9)
    delta = 0.05
    assert an.cs_entropy_divergence(1.0 - delta) == an.cs_entropy_divergence(1.0 + delta)


def test_fo_spin_variance():
    assert an.fo_spin_variance(0.0) == 0.0
    assert an.fo_spin_variance(0.5) == pytest.approx(1.0 / 16.0)
    assert an.fo_spin_variance(2.0) == pytest.approx(1.0 / 96.0)
    assert an.fo_spin_variance(1.0) == math.inf


def test_fo_variance_matches_squeezed_occupation():
    from dickesim.squeezed_oscillator import solve

    for kappa in (0.3, 0.7):
        assert solve(-kappa / 4.0).n_variance == pytest.approx(
            an.fo_spin_variance(kappa), rel=1e-14
        )
    for kappa in (1.5, 3.0):
        beta = -1.0 / (4.0 * kappa * kappa)
        # Frequency prefactor kappa drops out of a variance.
        assert solve(beta).n_variance == pytest.approx(
            an.fo_spin_variance(kappa), rel=1e-14
        )


def test_rabi_renormalization():
    assert an.rabi_renormalized_delta(0.0, 2.0) == 2.0
    assert an.rabi_renormalized_delta(2.0, 1.0) == pytest.approx(math.exp(-2.0))
    assert an.rabi_fo_susceptibility(0.0, 1.0) == 1.0
    assert an.rabi_fo_susceptibility(1.0, 1.0) == pytest.approx(math.exp(0.5))
    for xi in (0.0, 0.3, 1.0, 2.5):
        prod = an.rabi_fo_susceptibility(xi, 1.7) * an.rabi_renormalized_delta(xi, 1.7)
        assert prod == pytest.approx(1.0, abs=1e-15)


def test_rabi_susceptibility_monotone():
    xis = np.linspace(0.0, 3.0, 50)
    chis = [an.rabi_fo_susceptibility(x, 1.0) for x in xis]
    assert all(b > a for a, b in zip(chis, chis[1:]))


def test_rabi_entropy_values():
    assert an.rabi_fo_entropy(0.0) == 0.0
    assert an.rabi_fo_entropy(1.0) == pytest.approx(0.684, abs=1e-3)
    assert an.rabi_fo_entropy(50.0) == pytest.approx(math.log(2.0), abs=1e-12)


def test_spin_coherent_overlap():
    assert an.spin_coherent_overlap(0.7, 0.7, 2.5) == 1.0
    assert an.spin_coherent_overlap(math.pi / 2, -math.pi / 2, 0.5) == pytest.approx(
        0.0, abs=1e-16
    )
    # cos(theta*) = 1/kappa makes the +-theta* overlap kappa^(-2j).
    theta = an.mf_theta(2.0)
    assert an.spin_coherent_overlap(theta, -theta, 1.0) == pytest.approx(0.25)


def test_coupling_conversions():
    assert an.lambda_to_kappa(1.0, 1.0, 1.0, 0.0) == 0.0
    assert an.kappa_to_lambda(0.5, 1.0, 1.0, 1.0) == pytest.approx(1.0)
    lam = 0.137
    back = an.kappa_to_lambda(2.5, 1.3, 0.7, an.lambda_to_kappa(2.5, 1.3, 0.7, lam))
    assert back == pytest.approx(lam, abs=1e-14)
    with pytest.raises(ValueError):
        an.kappa_to_lambda(1.0, 1.0, 1.0, -0.5)


def test_mf_point_bundle():
    pt = an.mf_point(2.0, 5.0, 1.0, 0.01)
    assert pt.theta_star == pytest.approx(math.pi / 3.0)
    assert pt.alpha_star**2 == pytest.approx(375.0, rel=1e-12)
    assert pt.jx == pytest.approx(5.0 * math.sqrt(3) / 2.0)
