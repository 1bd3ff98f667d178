"""Diagnostics on converged ground states.

Order parameter, finite-difference susceptibility, oscillator and
rotation-invariant spin variances, reduced densities, and the entanglement
entropy (natural log).  Measurements act on the spin-major reshaped state,
so no composite operators are materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .dicke import ModelParams, parity_diagonal
from .eigensolver import GroundState, SolverConfig, converge_cutoff
from .hilbert import SpinLength, spin_matrices

__all__ = [
    "ObservableRecord",
    "expectation",
    "order_parameter",
    "occupancy",
    "parity_expectation",
    "oscillator_variance",
    "spin_covariance",
    "spin_variance",
    "reduced_spin_density",
    "reduced_boson_density",
    "entanglement_entropy",
    "boson_entanglement_entropy",
    "susceptibility",
    "measure_record",
]


def expectation(op, state: np.ndarray) -> float:
    """<state| op |state> for a real unit vector."""
    if op.shape[1] != state.shape[0]:
        raise ValueError(f"dimension mismatch: {op.shape} vs {state.shape}")
    return float(state @ (op @ state))


@lru_cache(maxsize=64)
def _dense_spin(two_j: int):
    s = spin_matrices(SpinLength(two_j))
    return s.jx.toarray(), s.jz.toarray()


def _state_matrix(gs: GroundState) -> np.ndarray:
    return gs.vector.reshape(gs.basis.spin.dim, gs.basis.boson_dim)


def order_parameter(gs: GroundState) -> tuple[float, float]:
    """(<Jx>, <Jx>/j) of the ground state."""
    jxd, _ = _dense_spin(gs.basis.spin.two_j)
    m = _state_matrix(gs)
    jx = float(np.sum(m * (jxd @ m)))
    return jx, jx / gs.basis.spin.j


def occupancy(gs: GroundState) -> float:
    """Mean boson number <a†a>."""
    m = _state_matrix(gs)
    levels = np.einsum("sn,sn->n", m, m)
    return float(levels @ np.arange(gs.basis.boson_dim))


def parity_expectation(gs: GroundState) -> float:
    signs = parity_diagonal(gs.basis)
    return float(gs.vector @ (signs * gs.vector))


def _apply_q(m: np.ndarray) -> np.ndarray:
    """(a + a†) applied along the boson axis of a spin-major state matrix."""
    out = np.zeros_like(m)
    root = np.sqrt(np.arange(1.0, m.shape[1]))
    out[:, 1:] += m[:, :-1] * root
    out[:, :-1] += m[:, 1:] * root
    return out


def oscillator_variance(gs: GroundState) -> float:
    """Position variance <(a+a†)^2> - <a+a†>^2 (vacuum value 1)."""
    m = _state_matrix(gs)
    qm = _apply_q(m)
    q_mean = float(np.sum(m * qm))
    return float(np.sum(qm * qm)) - q_mean * q_mean


def reduced_spin_density(gs: GroundState) -> np.ndarray:
    """rho_s[s, s'] = sum_n v[s, n] v[s', n]; trace one, positive semidefinite."""
    m = _state_matrix(gs)
    return m @ m.T


def reduced_boson_density(gs: GroundState) -> np.ndarray:
    """Boson-side reduced density matrix; (boson_dim)^2, use at moderate cutoffs."""
    m = _state_matrix(gs)
    return m.T @ m


def _covariance_from_rho(rho: np.ndarray, two_j: int) -> np.ndarray:
    jxd, jzd = _dense_spin(two_j)
    ex = float(np.einsum("ij,ji->", rho, jxd))
    ez = float(np.einsum("ij,ji->", rho, jzd))
    exx = float(np.einsum("ij,ji->", rho, jxd @ jxd))
    ezz = float(np.einsum("ij,ji->", rho, jzd @ jzd))
    exz = float(np.einsum("ij,ji->", rho, jxd @ jzd))
    ezx = float(np.einsum("ij,ji->", rho, jzd @ jxd))
    j = two_j / 2.0
    tol = 1e-10 * max(1.0, j * j)
    if abs(exz - ezx) > tol:
        raise ValueError(
            f"<JxJz> and <JzJx> differ by {abs(exz - ezx):.2e}; state is not real"
        )
    cxz = 0.5 * (exz + ezx) - ex * ez
    return np.array([[exx - ex * ex, cxz], [cxz, ezz - ez * ez]])


def spin_covariance(gs: GroundState) -> np.ndarray:
    """2x2 covariance matrix of (Jx, Jz) in the ground state."""
    return _covariance_from_rho(reduced_spin_density(gs), gs.basis.spin.two_j)


def spin_variance(gs: GroundState) -> float:
    """Rotation-invariant spin variance: smaller eigenvalue of the (Jx, Jz)
    covariance matrix, clipped at zero."""
    evals = np.linalg.eigvalsh(spin_covariance(gs))
    return max(float(evals[0]), 0.0)


def _entropy_of_spectrum(mu: np.ndarray) -> float:
    mu = np.clip(mu, 0.0, 1.0)
    mu = mu[mu > 0.0]
    return float(-(mu * np.log(mu)).sum()) if mu.size else 0.0


def entanglement_entropy(gs: GroundState) -> float:
    """Von Neumann entropy (nats) of the reduced spin density matrix."""
    return _entropy_of_spectrum(np.linalg.eigvalsh(reduced_spin_density(gs)))


def boson_entanglement_entropy(gs: GroundState) -> float:
    """Entropy from the boson side; equals the spin side by Schmidt symmetry."""
    return _entropy_of_spectrum(np.linalg.eigvalsh(reduced_boson_density(gs)))


def susceptibility(
    p: ModelParams,
    cfg: SolverConfig = SolverConfig(),
    fd_center: float | None = None,
    fd_step: float | None = None,
) -> float:
    """chi = (delta/j) d<Jx>/d epsilon by a central difference on one branch.

    Two ground-state solves at epsilon = center +- step, with the default
    center 1e-4 delta and step center/2.  Keeping both points at positive
    field stays on one symmetry-broken branch above the transition, where a
    difference straddling epsilon = 0 would pick up the order-parameter jump
    instead of the branch slope.  ``p.epsilon`` itself is not used.
    """
    center = 1e-4 * p.delta if fd_center is None else fd_center
    step = 0.5 * center if fd_step is None else fd_step
    if not (center > 0 and 0 < step < center):
        raise ValueError(f"need 0 < step < center, got center={center}, step={step}")
    jx = {}
    for sign in (+1.0, -1.0):
        gs = converge_cutoff(replace(p, epsilon=center + sign * step), cfg)
        if not gs.converged:
            raise RuntimeError(
                f"susceptibility solve at epsilon={center + sign * step:g} did not converge"
            )
        jx[sign] = order_parameter(gs)[0]
    return (p.delta / p.spin.j) * (jx[+1.0] - jx[-1.0]) / (2.0 * step)


@dataclass(frozen=True)
class ObservableRecord:
    """One sweep-point row of ground-state diagnostics."""

    kappa: float
    lam: float
    two_j: int
    omega_over_delta: float
    epsilon: float
    boson_cutoff: int
    energy: float
    jx: float
    jx_over_j: float
    chi: float
    delta_q: float
    delta_j: float
    entropy_nats: float
    parity: float
    occupancy: float


def measure_record(gs: GroundState, chi: float = math.nan) -> ObservableRecord:
    """Collect every diagnostic of a ground state into one record."""
    p = gs.params
    jx, jx_over_j = order_parameter(gs)
    return ObservableRecord(
        kappa=p.kappa,
        lam=p.lam,
        two_j=p.spin.two_j,
        omega_over_delta=p.omega / p.delta,
        epsilon=p.epsilon,
        boson_cutoff=gs.basis.boson_cutoff,
        energy=gs.energy,
        jx=jx,
        jx_over_j=jx_over_j,
        chi=chi,
        delta_q=oscillator_variance(gs),
        delta_j=spin_variance(gs),
        entropy_nats=entanglement_entropy(gs),
        parity=parity_expectation(gs),
        occupancy=occupancy(gs),
    )
