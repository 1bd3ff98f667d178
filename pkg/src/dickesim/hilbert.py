"""Spin and boson operator matrices and their Kronecker composites.

All operators are real symmetric (or real ladder) matrices in scipy CSR
format.  The composite Hilbert space uses spin-major flat indexing:
``index = spin_index * (boson_cutoff + 1) + n`` with spin_index 0
corresponding to m = -j, so growing the boson cutoff appends a contiguous
block per spin level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import sparse

__all__ = [
    "SpinLength",
    "BasisSpec",
    "SpinOps",
    "BosonOps",
    "spin_matrices",
    "boson_matrices",
    "kron",
    "identity",
    "is_symmetric",
]


@dataclass(frozen=True)
class SpinLength:
    """Spin length j stored as the integer 2j, so half-integer j stays exact."""

    two_j: int

    def __post_init__(self) -> None:
        if not isinstance(self.two_j, int) or self.two_j < 1:
            raise ValueError(f"two_j must be a positive integer, got {self.two_j!r}")

    @property
    def j(self) -> float:
        return self.two_j / 2.0

    @property
    def dim(self) -> int:
        return self.two_j + 1


@dataclass(frozen=True)
class BasisSpec:
    """Composite spin x boson basis keeping Fock states |0> .. |boson_cutoff>."""

    spin: SpinLength
    boson_cutoff: int

    def __post_init__(self) -> None:
        if self.boson_cutoff < 1:
            raise ValueError(f"boson_cutoff must be >= 1, got {self.boson_cutoff}")

    @property
    def boson_dim(self) -> int:
        return self.boson_cutoff + 1

    @property
    def dim(self) -> int:
        return self.spin.dim * self.boson_dim

    def flat_index(self, spin_index: int, n: int) -> int:
        return spin_index * self.boson_dim + n


class SpinOps(NamedTuple):
    jz: sparse.csr_matrix
    jplus: sparse.csr_matrix
    jminus: sparse.csr_matrix
    jx: sparse.csr_matrix


class BosonOps(NamedTuple):
    a: sparse.csr_matrix
    adag: sparse.csr_matrix
    n: sparse.csr_matrix


def _csr(op) -> sparse.csr_matrix:
    out = sparse.csr_matrix(op)
    out.eliminate_zeros()
    out.sort_indices()
    return out


def spin_matrices(spin: SpinLength) -> SpinOps:
    """Collective spin matrices on the basis |j,m>, ordered m = -j .. j.

    Jz is diagonal, <m+1|J+|m> = sqrt(j(j+1) - m(m+1)), and Jx = (J+ + J-)/2.
    Jy is complex and never materialized here; algebra tests use i*Jy =
    (J+ - J-)/2, which is real.
    """
    j = spin.j
    m = np.arange(spin.dim, dtype=float) - j
    ladder = np.sqrt(j * (j + 1.0) - m[:-1] * (m[:-1] + 1.0))
    jz = _csr(sparse.diags(m, 0))
    jplus = _csr(sparse.diags(ladder, -1))
    jminus = _csr(sparse.diags(ladder, 1))
    jx = _csr(0.5 * (jplus + jminus))
    return SpinOps(jz, jplus, jminus, jx)


def boson_matrices(boson_cutoff: int) -> BosonOps:
    """Truncated boson matrices with <n+1|a†|n> = sqrt(n+1) for n < boson_cutoff."""
    if boson_cutoff < 1:
        raise ValueError(f"boson_cutoff must be >= 1, got {boson_cutoff}")
    root = np.sqrt(np.arange(1.0, boson_cutoff + 1.0))
    a = _csr(sparse.diags(root, 1))
    adag = _csr(sparse.diags(root, -1))
    n = _csr(sparse.diags(np.arange(boson_cutoff + 1.0), 0))
    return BosonOps(a, adag, n)


def identity(dim: int) -> sparse.csr_matrix:
    return sparse.identity(dim, format="csr")


def is_symmetric(op) -> bool:
    """Exact structural symmetry check (tolerance zero)."""
    diff = (op - op.T).tocsr()
    diff.eliminate_zeros()
    return diff.nnz == 0


def kron(a, b) -> sparse.csr_matrix:
    """Kronecker product A (x) B in the spin-major flat-index convention.

    Both factors must be exactly symmetric; the result then is too.
    """
    if not is_symmetric(a):
        raise ValueError("left kron factor is not symmetric")
    if not is_symmetric(b):
        raise ValueError("right kron factor is not symmetric")
    out = sparse.kron(a, b, format="csr")
    out.eliminate_zeros()
    out.sort_indices()
    return out
