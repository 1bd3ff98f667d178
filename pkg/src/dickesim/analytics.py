"""Closed-form results for the Dicke transition and its classical limits.

Mean-field order parameter and susceptibility, slow-oscillator (classical
oscillator) variances and cat-state entropy, the large-spin fast-oscillator
spin variance, and the displaced-frame renormalization of the two-level
(Rabi) case.  Everything here is pure arithmetic in the dimensionless
coupling ``kappa`` (or ``xi = lambda/omega`` for the Rabi limit); divergent
values at the critical point kappa = 1 are returned as ``math.inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "MfPoint",
    "mf_energy",
    "mf_theta",
    "mf_alpha",
    "mf_order_parameter",
    "mf_susceptibility",
    "mf_point",
    "co_oscillator_variance",
    "co_entropy",
    "cs_entropy_divergence",
    "fo_spin_variance",
    "rabi_fo_susceptibility",
    "rabi_fo_entropy",
    "rabi_renormalized_delta",
    "spin_coherent_overlap",
    "kappa_to_lambda",
    "lambda_to_kappa",
]


@dataclass(frozen=True)
class MfPoint:
    """Mean-field solution at one coupling: tilt angle, displacement, energy,
    order parameter and susceptibility."""

    kappa: float
    branch: int
    theta_star: float
    alpha_star: float
    energy: float
    jx: float
    chi: float


def mf_energy(theta: float, kappa: float, j: float, delta: float) -> float:
    """Classical energy surface E(theta) = -j delta (cos theta + kappa/2 sin^2 theta)."""
    s = math.sin(theta)
    return -j * delta * (math.cos(theta) + 0.5 * kappa * s * s)


def mf_theta(kappa: float, branch: int = +1) -> float:
    """Minimizing tilt angle: 0 below the transition, +-arccos(1/kappa) above."""
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    if kappa <= 1.0:
        return 0.0
    return branch * math.acos(1.0 / kappa)


def mf_alpha(theta: float, j: float, lam: float, omega: float) -> float:
    """Oscillator displacement minimizing the classical energy: -j lambda sin(theta)/omega."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    return -j * lam * math.sin(theta) / omega


def mf_order_parameter(kappa: float, j: float, branch: int = +1) -> float:
    """<Jx> = j sin(theta*): zero below kappa=1, +-j sqrt(1 - 1/kappa^2) above."""
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    if kappa <= 1.0:
        return 0.0
    return branch * j * math.sqrt(1.0 - 1.0 / (kappa * kappa))


def mf_susceptibility(kappa: float) -> float:
    """Dimensionless susceptibility: 1/(1-kappa) below, 1/(kappa(kappa^2-1)) above."""
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    if kappa == 1.0:
        return math.inf
    if kappa < 1.0:
        return 1.0 / (1.0 - kappa)
    return 1.0 / (kappa * (kappa * kappa - 1.0))


def mf_point(kappa: float, j: float, delta: float, omega: float, branch: int = +1) -> MfPoint:
    theta = mf_theta(kappa, branch)
    lam = kappa_to_lambda(j, delta, omega, kappa)
    return MfPoint(
        kappa=kappa,
        branch=branch,
        theta_star=theta,
        alpha_star=mf_alpha(theta, j, lam, omega),
        energy=mf_energy(theta, kappa, j, delta),
        jx=mf_order_parameter(kappa, j, branch),
        chi=mf_susceptibility(kappa),
    )


def co_oscillator_variance(kappa: float) -> float:
    """Position variance of the slow oscillator: (1-kappa)^(-1/2) below,
    (1 - 1/kappa^2)^(-1/2) above; diverges at kappa = 1."""
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    if kappa == 1.0:
        return math.inf
    if kappa < 1.0:
        return (1.0 - kappa) ** -0.5
    return (1.0 - 1.0 / (kappa * kappa)) ** -0.5


def _cat_entropy(overlap: float) -> float:
    """Entropy of an equal-weight two-branch cat with branch overlap x in [0, 1]:
    ln 2 - (1-x)ln(1-x)/2 - (1+x)ln(1+x)/2, with 0 ln 0 := 0."""
    x = min(max(overlap, 0.0), 1.0)
    s = math.log(2.0)
    if x < 1.0:
        s -= 0.5 * (1.0 - x) * math.log1p(-x)
    s -= 0.5 * (1.0 + x) * math.log1p(x)
    return s


def co_entropy(kappa: float, j: float) -> float:
    """Entanglement entropy (nats) in the classical-oscillator limit.

    Zero below the transition; above it the cat of the two tilted branches
    gives _cat_entropy applied to the overlap kappa^(-2j).
    """
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    if kappa <= 1.0:
        return 0.0
    return _cat_entropy(kappa ** (-2.0 * j))


def cs_entropy_divergence(kappa: float) -> float:
    """Divergent part of the classical-spin-limit entropy: -(1/4) ln|1 - kappa|.

    The additive constant is not modeled; only the logarithmic divergence with
    critical exponent 1/4 is returned.
    """
    if kappa == 1.0:
        return math.inf
    return -0.25 * math.log(abs(1.0 - kappa))


def fo_spin_variance(kappa: float) -> float:
    """Large-spin fast-oscillator spin variance: kappa^2/(8(1-kappa)) below,
    1/(8 kappa^2 (kappa^2-1)) above; diverges at kappa = 1."""
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    if kappa == 1.0:
        return math.inf
    if kappa < 1.0:
        return kappa * kappa / (8.0 * (1.0 - kappa))
    k2 = kappa * kappa
    return 1.0 / (8.0 * k2 * (k2 - 1.0))


def rabi_renormalized_delta(xi: float, delta: float) -> float:
    """Spin frequency dressed by the displaced oscillator: exp(-xi^2/2) * delta."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.exp(-0.5 * xi * xi) * delta


def rabi_fo_susceptibility(xi: float, delta: float) -> float:
    """Susceptibility of the renormalized two-level system: exp(xi^2/2)/delta."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.exp(0.5 * xi * xi) / delta


def rabi_fo_entropy(xi: float) -> float:
    """Entanglement entropy of the displaced two-level ground state,
    _cat_entropy applied to the displaced-vacuum overlap exp(-2 xi^2)."""
    if xi < 0:
        raise ValueError(f"xi must be non-negative, got {xi}")
    return _cat_entropy(math.exp(-2.0 * xi * xi))


def spin_coherent_overlap(theta: float, chi: float, j: float) -> float:
    """Overlap of two real spin coherent states: cos^(2j)((theta - chi)/2)."""
    two_j = round(2.0 * j)
    if abs(2.0 * j - two_j) > 1e-12 or two_j < 1:
        raise ValueError(f"j must be a positive half-integer, got {j}")
    return math.cos(0.5 * (theta - chi)) ** two_j


def kappa_to_lambda(j: float, delta: float, omega: float, kappa: float) -> float:
    """Invert kappa = 2 j lambda^2 / (delta omega) for lambda."""
    if not (delta > 0 and omega > 0):
        raise ValueError("delta and omega must be positive")
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    return math.sqrt(kappa * delta * omega / (2.0 * j))


def lambda_to_kappa(j: float, delta: float, omega: float, lam: float) -> float:
    """Dimensionless coupling kappa = 2 j lambda^2 / (delta omega)."""
    if not (delta > 0 and omega > 0):
        raise ValueError("delta and omega must be positive")
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return 2.0 * j * lam * lam / (delta * omega)
