"""Effective Hamiltonians around the mean-field ground state.

Low-energy bosonic models for the slow-oscillator regime (below and above
the transition), the LMG spin model of the fast-oscillator regime, and its
large-spin Holstein-Primakoff bosonic forms.  Constant energy offsets are
kept inside the bosonic operators (or exposed via ``hp_energy_offset``) so
ground energies compare directly against the full model.
"""

from __future__ import annotations

import math

from scipy import sparse

from .hilbert import SpinLength, boson_matrices, identity, spin_matrices

__all__ = [
    "build_bos_below",
    "build_bos_above",
    "build_lmg",
    "build_hp_bosonic",
    "hp_energy_offset",
]


def _finalize(h) -> sparse.csr_matrix:
    h = h.tocsr()
    h.eliminate_zeros()
    h.sort_indices()
    return h


def build_bos_below(kappa: float, omega: float, j: float, delta: float,
                    boson_cutoff: int) -> sparse.csr_matrix:
    """Oscillator model below the transition:
    -delta j + omega (a†a - kappa/4 (a+a†)^2)."""
    if not 0.0 <= kappa < 1.0:
        raise ValueError(f"stable only for 0 <= kappa < 1, got {kappa}")
    b = boson_matrices(boson_cutoff)
    q = (b.a + b.adag).tocsr()
    h = -delta * j * identity(boson_cutoff + 1) + omega * (b.n - 0.25 * kappa * (q @ q))
    return _finalize(h)


def build_bos_above(kappa: float, omega: float, j: float, delta: float,
                    alpha: float, boson_cutoff: int) -> sparse.csr_matrix:
    """Oscillator model above the transition, squeezed around the displacement alpha:
    -(j delta / 2)(1/kappa + kappa)
      + omega [ (a† - alpha)(a - alpha) - (a + a† - 2 alpha)^2 / (4 kappa^2) ].

    The displacement is an operator shift in the bare Fock basis, so the
    cutoff must cover it: boson_cutoff >= alpha^2 + 10 max(1, |alpha|).
    """
    if kappa <= 1.0:
        raise ValueError(f"valid only for kappa > 1, got {kappa}")
    need = alpha * alpha + 10.0 * max(1.0, abs(alpha))
    if boson_cutoff < need:
        raise ValueError(
            f"boson_cutoff {boson_cutoff} too small for displacement alpha={alpha:.4g}; "
            f"need >= {math.ceil(need)}"
        )
    b = boson_matrices(boson_cutoff)
    one = identity(boson_cutoff + 1)
    q = (b.a + b.adag).tocsr()
    shifted = (q - 2.0 * alpha * one).tocsr()
    const = -0.5 * j * delta * (1.0 / kappa + kappa)
    h = const * one + omega * (
        b.n - alpha * q + alpha * alpha * one
        - (shifted @ shifted) / (4.0 * kappa * kappa)
    )
    return _finalize(h)


def build_lmg(kappa: float, delta: float, spin: SpinLength,
              epsilon: float = 0.0) -> sparse.csr_matrix:
    """LMG spin model delta (Jz - kappa/(2j) Jx^2), dimension 2j+1.

    An optional field -epsilon Jx selects one symmetry-broken branch above
    the transition (the quasi-degenerate doublet makes branch observables
    ill-defined at epsilon = 0 for large j).
    """
    s = spin_matrices(spin)
    h = delta * (s.jz - (kappa / (2.0 * spin.j)) * (s.jx @ s.jx))
    if epsilon != 0.0:
        h = h - epsilon * s.jx
    return _finalize(h)


def build_hp_bosonic(kappa: float, delta: float, boson_cutoff: int,
                     branch: str) -> sparse.csr_matrix:
    """Large-spin bosonic form of the LMG model, per branch.

    below: delta (b†b - kappa/4 (b+b†)^2); above: delta kappa (b†b -
    (b+b†)^2/(4 kappa^2)).  The j-dependent constants are reported separately
    by ``hp_energy_offset``.
    """
    b = boson_matrices(boson_cutoff)
    q = (b.a + b.adag).tocsr()
    if branch == "below":
        if not 0.0 <= kappa < 1.0:
            raise ValueError(f"below branch needs 0 <= kappa < 1, got {kappa}")
        h = delta * (b.n - 0.25 * kappa * (q @ q))
    elif branch == "above":
        if kappa <= 1.0:
            raise ValueError(f"above branch needs kappa > 1, got {kappa}")
        h = delta * kappa * (b.n - (q @ q) / (4.0 * kappa * kappa))
    else:
        raise ValueError(f"branch must be 'below' or 'above', got {branch!r}")
    return _finalize(h)


def hp_energy_offset(kappa: float, delta: float, j: float, branch: str) -> float:
    """Constant energy offset accompanying ``build_hp_bosonic``."""
    if branch == "below":
        return -j * delta
    if branch == "above":
        return -0.5 * j * delta * (kappa + 1.0 / kappa)
    raise ValueError(f"branch must be 'below' or 'above', got {branch!r}")
