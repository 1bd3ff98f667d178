"""Ground states by Lanczos iteration with full reorthogonalization.

``lanczos_ground`` runs a thick-restart Lanczos loop on a real symmetric
sparse matrix: every new Krylov vector is reorthogonalized (two passes)
against the whole active basis, which kills ghost copies of the
quasi-degenerate doublet above the transition.  ``dense_ground`` is the
LAPACK oracle used to validate it.  ``converge_cutoff`` wraps the solver in
a boson-cutoff doubling ladder with warm starts and a Fock-tail witness for
the truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, sparse

from .dicke import ModelParams, build_hamiltonian, parity_diagonal
from .hilbert import BasisSpec

__all__ = [
    "SolverConfig",
    "LanczosResult",
    "GroundState",
    "lanczos_ground",
    "dense_ground",
    "converge_cutoff",
    "fock_tail_weight",
    "suggest_start_cutoff",
]

# Hard ceiling on the cutoff ladder and memory budget for the Krylov basis.
MAX_BOSON_CUTOFF = 16384
_BASIS_BYTES = 3 * 10**8


@dataclass(frozen=True)
class SolverConfig:
    """Solver and cutoff-ladder settings.

    ``resid_rtol`` is the residual target relative to the estimated spectral
    scale of H; ``None`` falls back to sqrt(tol).  The default is tighter than
    that fallback because the ladder's energy-stability criterion
    (1e-10 |E0| between consecutive cutoffs) needs energy errors well below
    the residual-squared level.
    """

    tol: float = 1e-13
    resid_rtol: float | None = 1e-8
    max_iter: int = 50000
    seed: int = 42
    start_nb: int = 16
    tail_tol: float = 1e-12
    max_nb: int = 4096
    restart_dim: int = 300
    keep: int = 16
    check_every: int = 10


@dataclass(frozen=True, eq=False)
class LanczosResult:
    energy: float
    vector: np.ndarray
    iterations: int
    residual: float
    converged: bool
    ritz_history: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class GroundState:
    """Converged ground energy and state with convergence metadata.

    ``tail_weight`` is the probability in the top 5% of Fock levels of the
    final vector; ``ladder`` records (boson_cutoff, energy) per rung.
    """

    energy: float
    vector: np.ndarray
    params: ModelParams
    basis: BasisSpec
    iterations: int
    tail_weight: float
    residual: float
    converged: bool
    ladder: tuple[tuple[int, float], ...]


def lanczos_ground(
    h,
    tol: float = 1e-13,
    max_iter: int = 50000,
    seed: int = 42,
    v0: np.ndarray | None = None,
    resid_rtol: float | None = None,
    restart_dim: int = 300,
    keep: int = 16,
    check_every: int = 10,
) -> LanczosResult:
    """Lowest Ritz pair of a real symmetric matrix.

    Parameters
    ----------
    h : scipy sparse matrix (or anything supporting ``h @ v``), symmetric.
    tol : relative stagnation tolerance on the lowest Ritz value.
    max_iter : total matrix-vector product budget (across restarts).
    seed : seeds the uniform random start vector when ``v0`` is None.
    v0 : optional start vector; zero entries are preserved exactly, so a
        parity-projected start confines the whole iteration to that sector.
    resid_rtol : residual target relative to the Ritz-spread estimate of
        ||H||; ``None`` uses sqrt(tol).
    restart_dim : maximum Krylov basis size before a thick restart.
    keep : number of lowest Ritz vectors carried through a restart.

    Convergence requires the relative Ritz-value change to fall below ``tol``
    and the explicitly recomputed residual ||Hv - Ev|| to fall below the
    target.  On an exhausted budget the best Ritz pair is returned with
    ``converged=False``.
    """
    n = h.shape[0]
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"matrix must be square, got {h.shape}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if v0 is None:
        rng = np.random.default_rng(seed)
        v0 = rng.uniform(-1.0, 1.0, n)
    v = np.array(v0, dtype=float)
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        raise ValueError("start vector is zero")
    v /= nv

    if n == 1:
        e = float(h[0, 0])
        return LanczosResult(e, np.array([1.0]), 1, 0.0, True, (e,))

    m_max = min(restart_dim, n, max(_BASIS_BYTES // (8 * n), keep + 8))
    keep = max(1, min(keep, m_max - 4))
    rt_factor = math.sqrt(tol) if resid_rtol is None else resid_rtol

    cap = min(m_max + 1, 32)
    basis = np.empty((cap, n))
    t = np.zeros((m_max + 1, m_max + 1))
    basis[0] = v
    kb = 1  # stored basis vectors
    kc = 0  # completed columns of t
    matvecs = 0
    history: list[float] = []
    theta_prev: float | None = None
    y: np.ndarray | None = None
    energy = math.nan
    resid_true = math.inf
    converged = False

    while True:
        w = h @ basis[kc]
        matvecs += 1
        coef = basis[:kb] @ w
        w -= basis[:kb].T @ coef
        coef2 = basis[:kb] @ w
        w -= basis[:kb].T @ coef2
        coef += coef2
        t[:kb, kc] = coef
        t[kc, :kb] = coef
        kc += 1
        beta = float(np.linalg.norm(w))

        scale = max(float(np.max(np.abs(np.diagonal(t)[:kc]))), beta, 1e-300)
        breakdown = beta <= 1e-14 * scale
        basis_full = kb == m_max + 1
        out_of_budget = matvecs >= max_iter

        if kc % check_every == 0 or breakdown or basis_full or out_of_budget:
            tk = t[:kc, :kc]
            evals, evecs = linalg.eigh((tk + tk.T) / 2.0)
            theta = float(evals[0])
            s = evecs[:, 0]
            history.append(theta)
            hnorm = max(abs(theta), abs(float(evals[-1])), 1e-300)
            rtarget = rt_factor * hnorm
            resid_est = beta * abs(float(s[-1]))
            stable = theta_prev is not None and abs(theta - theta_prev) <= tol * max(
                1.0, abs(theta)
            )
            theta_prev = theta
            if (stable and resid_est <= rtarget) or breakdown or out_of_budget:
                y = basis[:kc].T @ s
                y /= float(np.linalg.norm(y))
                hy = h @ y
                energy = float(y @ hy)
                resid_true = float(np.linalg.norm(hy - energy * y))
                if resid_true <= rtarget and (stable or breakdown):
                    converged = True
                    break
                if breakdown or out_of_budget:
                    converged = resid_true <= rtarget
                    break

        if breakdown:
            break

        if basis_full:
            # Thick restart: keep the lowest Ritz vectors plus the residual
            # direction; the projected matrix becomes diagonal-plus-arrowhead.
            tk = t[:kc, :kc]
            evals, svecs = linalg.eigh((tk + tk.T) / 2.0)
            kept = keep
            ritz = (basis[:kc].T @ svecs[:, :kept]).T
            coupling = beta * svecs[kc - 1, :kept]
            basis[:kept] = ritz
            basis[kept] = w / beta
            t[:, :] = 0.0
            t[:kept, :kept] = np.diag(evals[:kept])
            t[kept, :kept] = coupling
            t[:kept, kept] = coupling
            kb = kept + 1
            kc = kept
            continue

        if kb == basis.shape[0]:
            grown = np.empty((min(2 * basis.shape[0], m_max + 1), n))
            grown[:kb] = basis[:kb]
            basis = grown
        basis[kb] = w / beta
        t[kb, kc - 1] = beta
        t[kc - 1, kb] = beta
        kb += 1

    if y is None:  # pragma: no cover - defensive, loop always sets y before break
        raise RuntimeError("lanczos loop exited without a Ritz pair")
    return LanczosResult(energy, y, matvecs, resid_true, converged, tuple(history))


def dense_ground(h, max_dim: int = 4000) -> tuple[float, np.ndarray]:
    """Full symmetric eigendecomposition oracle; lowest pair of a small matrix."""
    n = h.shape[0]
    if n > max_dim:
        raise ValueError(f"dimension {n} exceeds dense bound {max_dim}")
    a = h.toarray() if sparse.issparse(h) else np.asarray(h, dtype=float)
    a = (a + a.T) / 2.0
    evals, evecs = linalg.eigh(a, subset_by_index=(0, 0))
    return float(evals[0]), evecs[:, 0]


def fock_tail_weight(vector: np.ndarray, basis: BasisSpec) -> float:
    """Probability in the top 5% of Fock levels (at least the top level)."""
    m = vector.reshape(basis.spin.dim, basis.boson_dim)
    level_weights = np.einsum("sn,sn->n", m, m)
    count = max(1, basis.boson_dim // 20)
    return float(level_weights[-count:].sum())


def suggest_start_cutoff(p: ModelParams, floor: int = 16) -> int:
    """Power-of-two start cutoff large enough for the displaced branch state.

    Above the transition the ground state sits near occupation alpha^2 =
    j kappa delta (1 - 1/kappa^2) / (2 omega); the suggested cutoff covers
    alpha^2 plus a ten-sigma margin so the first ladder rung already has a
    negligible Fock tail.
    """
    start = max(2, floor)
    if p.kappa > 1.0:
        alpha_sq = (
            p.spin.j * p.kappa * p.delta * (1.0 - 1.0 / (p.kappa * p.kappa))
            / (2.0 * p.omega)
        )
        need = alpha_sq + 10.0 * max(1.0, math.sqrt(alpha_sq)) + 8.0
        while start < need:
            start *= 2
    return start


def _pad_vector(vector: np.ndarray, old: BasisSpec, new: BasisSpec) -> np.ndarray:
    """Zero-pad each spin block from the old boson cutoff to the new one."""
    m = vector.reshape(old.spin.dim, old.boson_dim)
    out = np.zeros((new.spin.dim, new.boson_dim))
    out[:, : old.boson_dim] = m
    return out.reshape(new.dim)


def converge_cutoff(p: ModelParams, cfg: SolverConfig = SolverConfig()) -> GroundState:
    """Ground state with an automatically converged boson cutoff.

    Doubles the cutoff from ``cfg.start_nb`` until the Fock-tail weight drops
    below ``cfg.tail_tol`` and the energy agrees with the previous rung to
    1e-10 relative.  Each rung warm-starts from the zero-padded previous
    vector.  At epsilon = 0 the start vector is projected onto the positive
    parity sector, where the true ground state lives; the projection is exact
    because H never couples the sectors.  Returns a flagged (non-converged)
    state when ``cfg.max_nb`` is exhausted.
    """
    if cfg.start_nb < 8:
        raise ValueError(f"start_nb must be >= 8, got {cfg.start_nb}")
    if cfg.max_nb > MAX_BOSON_CUTOFF:
        raise ValueError(f"max_nb must be <= {MAX_BOSON_CUTOFF}, got {cfg.max_nb}")

    nb = min(cfg.start_nb, cfg.max_nb)
    prev_vec: np.ndarray | None = None
    prev_basis: BasisSpec | None = None
    prev_energy: float | None = None
    ladder: list[tuple[int, float]] = []

    while True:
        basis = BasisSpec(p.spin, nb)
        h = build_hamiltonian(p, basis)
        if prev_vec is None:
            rng = np.random.default_rng(cfg.seed)
            v0 = rng.uniform(-1.0, 1.0, basis.dim)
            if p.epsilon == 0.0:
                v0 *= parity_diagonal(basis) > 0
        else:
            v0 = _pad_vector(prev_vec, prev_basis, basis)
        res = lanczos_ground(
            h,
            tol=cfg.tol,
            max_iter=cfg.max_iter,
            seed=cfg.seed,
            v0=v0,
            resid_rtol=cfg.resid_rtol,
            restart_dim=cfg.restart_dim,
            keep=cfg.keep,
            check_every=cfg.check_every,
        )
        tail = fock_tail_weight(res.vector, basis)
        ladder.append((nb, res.energy))

        tail_ok = tail < cfg.tail_tol
        energy_ok = prev_energy is not None and abs(res.energy - prev_energy) < (
            1e-10 * max(abs(res.energy), 1e-300)
        )
        done = res.converged and tail_ok and energy_ok
        state = GroundState(
            energy=res.energy,
            vector=res.vector,
            params=p,
            basis=basis,
            iterations=res.iterations,
            tail_weight=tail,
            residual=res.residual,
            converged=done,
            ladder=tuple(ladder),
        )
        if done or not res.converged or 2 * nb > cfg.max_nb:
            return state
        prev_vec, prev_basis, prev_energy = res.vector, basis, res.energy
        nb *= 2
