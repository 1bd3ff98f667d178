"""Closed-form solution of the squeezed oscillator H = a†a + beta (a+a†)^2.

This is the analytic engine behind the effective bosonic models: gap,
ground energy, position and occupation variances, and the squeeze parameter
follow from a Bogoliubov rotation.  The Hamiltonian is bounded from below
only for beta > -1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .hilbert import boson_matrices

__all__ = ["StabilityViolation", "SqueezedSolution", "TruncationReport", "solve",
           "verify_against_truncation"]


class StabilityViolation(ValueError):
    """Raised for beta <= -1/4, where the oscillator is unbounded from below."""


@dataclass(frozen=True)
class SqueezedSolution:
    """Exact ground-state data of a†a + beta (a+a†)^2 (undisplaced)."""

    beta: float
    gap: float
    ground_energy: float
    q_variance: float
    n_variance: float
    sigma: float


def solve(beta: float) -> SqueezedSolution:
    """Diagonalize by squeezing: gap sqrt(1+4b), E0 (sqrt(1+4b)-1)/2,
    <q^2> - <q>^2 = (1+4b)^(-1/2), Var(a†a) = 2b^2/(1+4b), tanh(2 sigma) = 2b/(1+2b)."""
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    if beta <= -0.25:
        raise StabilityViolation(
            f"beta must exceed -1/4 for a bounded spectrum, got {beta}"
        )
    gap = math.sqrt(1.0 + 4.0 * beta)
    return SqueezedSolution(
        beta=beta,
        gap=gap,
        ground_energy=0.5 * (gap - 1.0),
        q_variance=1.0 / gap,
        n_variance=2.0 * beta * beta / (1.0 + 4.0 * beta),
        sigma=0.5 * math.atanh(2.0 * beta / (1.0 + 2.0 * beta)),
    )


@dataclass(frozen=True)
class TruncationReport:
    """Closed forms versus a dense truncated-Fock-space diagonalization."""

    solution: SqueezedSolution
    boson_cutoff: int
    energy_numeric: float
    q_variance_numeric: float
    n_variance_numeric: float
    energy_error: float
    q_variance_error: float
    n_variance_error: float
    tail_weight: float


def verify_against_truncation(beta: float, boson_cutoff: int) -> TruncationReport:
    """Dense-diagonalize a†a + beta (a+a†)^2 on |0>..|boson_cutoff| and compare.

    Raises ValueError when the cutoff is too small (ground-state weight above
    1e-10 in the top 5% of Fock levels).
    """
    if boson_cutoff < 64:
        raise ValueError(f"boson_cutoff must be >= 64, got {boson_cutoff}")
    sol = solve(beta)
    b = boson_matrices(boson_cutoff)
    q = (b.a + b.adag).toarray()
    h = b.n.toarray() + beta * (q @ q)
    evals, evecs = linalg.eigh(h)
    energy = float(evals[0])
    v = evecs[:, 0]

    occ = v * v
    tail_count = max(1, (boson_cutoff + 1) // 20)
    tail = float(occ[-tail_count:].sum())
    if tail > 1e-10:
        raise ValueError(
            f"boson cutoff {boson_cutoff} too small: tail weight {tail:.2e} > 1e-10"
        )

    qv = q @ v
    q_mean = float(v @ qv)
    q_var = float(qv @ qv) - q_mean * q_mean
    levels = np.arange(boson_cutoff + 1.0)
    n_mean = float(occ @ levels)
    n_var = float(occ @ (levels * levels)) - n_mean * n_mean

    return TruncationReport(
        solution=sol,
        boson_cutoff=boson_cutoff,
        energy_numeric=energy,
        q_variance_numeric=q_var,
        n_variance_numeric=n_var,
        energy_error=abs(energy - sol.ground_energy),
        q_variance_error=abs(q_var - sol.q_variance),
        n_variance_error=abs(n_var - sol.n_variance),
        tail_weight=tail,
    )
