"""The Dicke Hamiltonian with a symmetry-breaking field, and its parity structure."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .hilbert import BasisSpec, SpinLength, boson_matrices, identity, kron, spin_matrices

__all__ = ["ModelParams", "build_hamiltonian", "parity_diagonal"]

DEFAULT_EPSILON_SCALE = 1e-4


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of one Dicke instance.

    The canonical coupling is the dimensionless kappa = 2 j lambda^2 / (delta omega);
    the bare coupling lambda is derived from it on demand.  epsilon is the
    symmetry-breaking field in energy units and defaults to 1e-4 * delta.
    """

    delta: float
    omega: float
    kappa: float
    spin: SpinLength
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", DEFAULT_EPSILON_SCALE * self.delta)
        if not math.isfinite(self.epsilon):
            raise ValueError(f"epsilon must be finite, got {self.epsilon}")

    @property
    def lam(self) -> float:
        """Bare coupling lambda = sqrt(kappa delta omega / (2 j))."""
        return math.sqrt(self.kappa * self.delta * self.omega / (2.0 * self.spin.j))

    @classmethod
    def from_lambda(cls, delta: float, omega: float, lam: float, spin: SpinLength,
                    epsilon: float | None = None) -> "ModelParams":
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        kappa = 2.0 * spin.j * lam * lam / (delta * omega)
        return cls(delta, omega, kappa, spin, epsilon)


def build_hamiltonian(p: ModelParams, basis: BasisSpec) -> sparse.csr_matrix:
    """Assemble H = delta Jz(x)1 + omega 1(x)a†a + lambda Jx(x)(a+a†) - epsilon Jx(x)1.

    Real symmetric, dimension (2j+1)(boson_cutoff+1), spin-major flat indexing.
    """
    if basis.spin != p.spin:
        raise ValueError(
            f"basis spin two_j={basis.spin.two_j} does not match model two_j={p.spin.two_j}"
        )
    s = spin_matrices(p.spin)
    b = boson_matrices(basis.boson_cutoff)
    one_s = identity(p.spin.dim)
    one_b = identity(basis.boson_dim)
    q = (b.a + b.adag).tocsr()
    h = (
        p.delta * kron(s.jz, one_b)
        + p.omega * kron(one_s, b.n)
        + p.lam * kron(s.jx, q)
        - p.epsilon * kron(s.jx, one_b)
    )
    h = h.tocsr()
    h.eliminate_zeros()
    h.sort_indices()
    return h


def parity_diagonal(basis: BasisSpec) -> np.ndarray:
    """Diagonal of the parity operator exp(i pi (a†a + Jz + j)).

    Entry at (spin_index s, boson level n) is (-1)^(s + n); Jz + j has the
    integer eigenvalue s, so the operator is diagonal with values +-1.
    """
    spin_signs = 1.0 - 2.0 * (np.arange(basis.spin.dim) % 2)
    boson_signs = 1.0 - 2.0 * (np.arange(basis.boson_dim) % 2)
    return np.kron(spin_signs, boson_signs)
