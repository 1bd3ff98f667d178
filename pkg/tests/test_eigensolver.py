import numpy as np
import pytest
from scipy import sparse

from dickesim import (
    BasisSpec,
    ModelParams,
    SolverConfig,
    SpinLength,
    build_hamiltonian,
    converge_cutoff,
    dense_ground,
    lanczos_ground,
)
from dickesim.eigensolver import fock_tail_weight, suggest_start_cutoff
from dickesim.observables import occupancy
from dickesim.verification import _random_sparse_symmetric


def test_diagonal_matrix():
    h = sparse.diags([3.0, 1.0, 2.0]).tocsr()
    res = lanczos_ground(h, seed=0)
    assert res.converged
    assert res.energy == pytest.approx(1.0, abs=1e-12)
    assert res.iterations <= 3
    assert abs(res.vector[1]) == pytest.approx(1.0, abs=1e-12)


def test_dense_ground_small_cases():
    e, v = dense_ground(sparse.diags([-1.0, 0.0]).tocsr())
    assert e == -1.0 and abs(v[0]) == pytest.approx(1.0)
    e, v = dense_ground(sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]])))
    assert e == pytest.approx(-1.0)
    np.testing.assert_allclose(np.abs(v), [1.0 / np.sqrt(2)] * 2, atol=1e-12)


def test_dense_ground_dimension_bound():
    h = sparse.identity(10, format="csr")
    with pytest.raises(ValueError, match="dense bound"):
        dense_ground(h, max_dim=5)


def test_random_matrix_matches_dense():
    h = _random_sparse_symmetric(500, 11)
    e_dense, _ = dense_ground(h)
    res = lanczos_ground(h, seed=11, resid_rtol=1e-10)
    norm = np.abs(h.toarray()).sum(axis=1).max()
    assert abs(res.energy - e_dense) <= 1e-10 * norm
    assert res.converged


def test_dicke_truncation_matches_dense():
    p = ModelParams(delta=1.0, omega=1.0, kappa=0.5, spin=SpinLength(10), epsilon=1e-4)
    h = build_hamiltonian(p, BasisSpec(p.spin, 100))
    e_dense, _ = dense_ground(h)
    res = lanczos_ground(h, resid_rtol=1e-10)
    assert abs(res.energy - e_dense) <= 1e-10 * abs(e_dense)


def test_many_seeded_instances_agree():
    worst = 0.0
    for seed in range(50):
        dim = 40 + 7 * seed
        h = _random_sparse_symmetric(dim, seed)
        e_dense, _ = dense_ground(h)
        res = lanczos_ground(h, seed=seed, resid_rtol=1e-10)
        assert res.converged
        worst = max(worst, abs(res.energy - e_dense) / (1.0 + abs(e_dense)))
    assert worst <= 1e-10


def test_restart_path_and_monotone_ritz():
    h = _random_sparse_symmetric(600, 3)
    res = lanczos_ground(h, seed=3, restart_dim=35, keep=6, resid_rtol=1e-10)
    e_dense, _ = dense_ground(h)
    assert res.converged
    assert abs(res.energy - e_dense) <= 1e-10 * (1.0 + abs(e_dense))
    hist = np.asarray(res.ritz_history)
    assert np.all(np.diff(hist) <= 1e-10 * np.maximum(1.0, np.abs(hist[:-1])))


def test_reproducible_bit_identical():
    h = _random_sparse_symmetric(300, 5)
    r1 = lanczos_ground(h, seed=5)
    r2 = lanczos_ground(h, seed=5)
    assert r1.energy == r2.energy
    assert np.array_equal(r1.vector, r2.vector)


def test_budget_exhaustion_flags():
    h = _random_sparse_symmetric(400, 9)
    res = lanczos_ground(h, max_iter=5)
    assert not res.converged
    assert np.isfinite(res.energy)
    assert res.iterations == 5


def test_converge_cutoff_decoupled():
    p = ModelParams(delta=1.0, omega=1.0, kappa=0.0, spin=SpinLength(10), epsilon=0.0)
    gs = converge_cutoff(p, SolverConfig())
    assert gs.converged
    assert gs.tail_weight == 0.0
    assert gs.energy == pytest.approx(-5.0, abs=1e-12)
    # |m=-j> (x) |0> is the first flat index.
    assert abs(gs.vector[0]) == pytest.approx(1.0, abs=1e-10)
    assert np.abs(gs.vector[1:]).max() < 1e-10


def test_converge_cutoff_displaced_occupancy(solve):
    # Above the transition the converged occupation tracks the classical
    # displacement alpha^2 = j kappa delta (1 - 1/kappa^2) / (2 omega) = 375.
    gs = solve(10, 0.01, 2.0, 1e-4)
    assert gs.converged
    assert occupancy(gs) == pytest.approx(375.0, rel=0.05)


def test_converge_cutoff_moderate_regime_under_1000():
    p = ModelParams(delta=1.0, omega=1.0, kappa=1.0, spin=SpinLength(10), epsilon=1e-4)
    gs = converge_cutoff(p, SolverConfig())
    assert gs.converged
    assert gs.basis.boson_cutoff < 1000


def test_converge_cutoff_flags_exhaustion():
    p = ModelParams(delta=1.0, omega=0.01, kappa=2.0, spin=SpinLength(10), epsilon=1e-4)
    gs = converge_cutoff(p, SolverConfig(start_nb=8, max_nb=16))
    assert not gs.converged


def test_suggest_start_cutoff_covers_displacement():
    p = ModelParams(delta=1.0, omega=0.01, kappa=2.0, spin=SpinLength(10))
    start = suggest_start_cutoff(p)
    assert start >= 375 and start & (start - 1) == 0
    p0 = ModelParams(delta=1.0, omega=0.01, kappa=0.5, spin=SpinLength(10))
    assert suggest_start_cutoff(p0) == 16


def test_fock_tail_weight_localized_vector():
    basis = BasisSpec(SpinLength(1), 19)
    v = np.zeros(basis.dim)
    v[basis.flat_index(0, 19)] = 1.0
    assert fock_tail_weight(v, basis) == 1.0
    v = np.zeros(basis.dim)
    v[basis.flat_index(0, 0)] = 1.0
    assert fock_tail_weight(v, basis) == 0.0
