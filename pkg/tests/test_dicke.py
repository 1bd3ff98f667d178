import numpy as np
import pytest

from dickesim import (
    BasisSpec,
    ModelParams,
    SolverConfig,
    SpinLength,
    build_hamiltonian,
    converge_cutoff,
    dense_ground,
    parity_diagonal,
)
from dickesim.eigensolver import lanczos_ground
from dickesim.observables import order_parameter


def test_decoupled_limit_diagonal():
    p = ModelParams(delta=1.0, omega=1.0, kappa=0.0, spin=SpinLength(1), epsilon=0.0)
    h = build_hamiltonian(p, BasisSpec(p.spin, 2)).toarray()
    assert np.count_nonzero(h - np.diag(np.diagonal(h))) == 0
    assert np.diagonal(h).min() == -0.5


def test_weak_coupling_ground_energy():
    # Dense oracle on the 42-dim truncation; second-order perturbation theory
    # gives -1/2 - lambda^2 / (4 (delta + omega)).
    p = ModelParams.from_lambda(1.0, 1.0, 0.1, SpinLength(1), epsilon=0.0)
    h = build_hamiltonian(p, BasisSpec(p.spin, 20))
    e, _ = dense_ground(h)
    assert e == pytest.approx(-0.5012507817, abs=1e-9)
    assert e == pytest.approx(-0.5 - 0.1**2 / (4.0 * 2.0), abs=1e-5)


def test_parity_commutes_exactly():
    p = ModelParams(delta=1.0, omega=0.7, kappa=1.3, spin=SpinLength(4), epsilon=0.0)
    basis = BasisSpec(p.spin, 12)
    h = build_hamiltonian(p, basis)
    signs = parity_diagonal(basis)
    # H pi - pi H vanishes entrywise when epsilon = 0 (same-parity coupling only).
    diff = h.multiply(signs[None, :]) - h.multiply(signs[:, None])
    assert np.abs(diff.toarray()).max() == 0.0


def test_parity_diagonal_small_case():
    signs = parity_diagonal(BasisSpec(SpinLength(1), 1))
    np.testing.assert_array_equal(signs, [1.0, -1.0, -1.0, 1.0])


def test_parity_involution():
    signs = parity_diagonal(BasisSpec(SpinLength(3), 7))
    np.testing.assert_array_equal(signs * signs, np.ones(signs.size))


def test_ground_state_parity_positive(solve):
    gs = solve(10, 1.0, 1.2, 0.0, max_nb=4096)
    signs = parity_diagonal(gs.basis)
    assert abs(float(gs.vector @ (signs * gs.vector)) - 1.0) < 1e-8


def test_hellmann_feynman_derivative():
    # dE0/d epsilon = -<Jx> via central differences at a fixed truncation.
    from dataclasses import replace

    from dickesim.eigensolver import GroundState

    p = ModelParams(delta=1.0, omega=1.0, kappa=0.8, spin=SpinLength(4), epsilon=1e-4)
    basis = BasisSpec(p.spin, 48)
    step = 1e-6
    energy = {}
    for d in (+step, -step):
        h = build_hamiltonian(replace(p, epsilon=p.epsilon + d), basis)
        energy[d] = lanczos_ground(h, tol=1e-14, resid_rtol=1e-12).energy
    h = build_hamiltonian(p, basis)
    res = lanczos_ground(h, tol=1e-14, resid_rtol=1e-12)
    gs = GroundState(res.energy, res.vector, p, basis, res.iterations, 0.0,
                     res.residual, res.converged, ((48, res.energy),))
    jx = order_parameter(gs)[0]
    deriv = (energy[+step] - energy[-step]) / (2.0 * step)
    assert deriv == pytest.approx(-jx, rel=1e-4)


def test_ladder_energy_monotone():
    p = ModelParams(delta=1.0, omega=0.05, kappa=0.9, spin=SpinLength(4))
    gs = converge_cutoff(p, SolverConfig(start_nb=8, max_nb=512))
    assert gs.converged
    energies = [e for _, e in gs.ladder]
    for lo, hi in zip(energies[1:], energies[:-1]):
        assert lo <= hi + 1e-9 * abs(hi)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(delta=-1.0, omega=1.0, kappa=0.0, spin=SpinLength(1))
    with pytest.raises(ValueError):
        ModelParams(delta=1.0, omega=0.0, kappa=0.0, spin=SpinLength(1))
    with pytest.raises(ValueError):
        ModelParams(delta=1.0, omega=1.0, kappa=-0.1, spin=SpinLength(1))
    p = ModelParams(delta=2.0, omega=1.0, kappa=0.3, spin=SpinLength(1))
    assert p.epsilon == pytest.approx(2e-4)


def test_kappa_lambda_round_trip():
    p = ModelParams(delta=1.0, omega=1.0, kappa=1.0, spin=SpinLength(1))
    assert p.lam == pytest.approx(1.0)
    q = ModelParams.from_lambda(1.0, 1.0, p.lam, SpinLength(1))
    assert q.kappa == pytest.approx(1.0, abs=1e-14)


def test_build_rejects_mismatched_spin():
    p = ModelParams(delta=1.0, omega=1.0, kappa=0.1, spin=SpinLength(2))
    with pytest.raises(ValueError, match="spin"):
        build_hamiltonian(p, BasisSpec(SpinLength(4), 8))
