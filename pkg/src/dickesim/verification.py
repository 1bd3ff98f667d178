"""Acceptance suites: closed-form oracles paired with scaled-down exact
diagonalization runs plus a property bundle.

Each criterion function returns a ``CriterionResult`` and prints nothing;
``run_suite`` prints one pass/fail line per criterion.  Ground-state solves
are cached process-wide so overlapping criteria and tests share work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import analytics
from .dicke import ModelParams, build_hamiltonian, parity_diagonal
from .effective_models import build_lmg
from .eigensolver import (
    GroundState,
    SolverConfig,
    converge_cutoff,
    dense_ground,
    lanczos_ground,
    suggest_start_cutoff,
)
from .hilbert import BasisSpec, SpinLength, spin_matrices
from .observables import (
    _covariance_from_rho,
    boson_entanglement_entropy,
    entanglement_entropy,
    order_parameter,
    oscillator_variance,
    parity_expectation,
    reduced_spin_density,
    spin_covariance,
    spin_variance,
    susceptibility,
)

__all__ = ["CriterionResult", "CRITERIA", "SUITES", "run_criterion", "run_suite"]


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    details: str


@lru_cache(maxsize=None)
def solve_full(
    two_j: int,
    omega_over_delta: float,
    kappa: float,
    epsilon: float,
    max_nb: int = 8192,
    resid_rtol: float = 1e-8,
    tail_tol: float = 1e-12,
) -> GroundState:
    """Cached converged solve at delta = 1 with a displacement-aware start cutoff."""
    p = ModelParams(
        delta=1.0,
        omega=omega_over_delta,
        kappa=kappa,
        spin=SpinLength(two_j),
        epsilon=epsilon,
    )
    cfg = SolverConfig(
        resid_rtol=resid_rtol,
        tail_tol=tail_tol,
        max_nb=max_nb,
        start_nb=suggest_start_cutoff(p),
    )
    return converge_cutoff(p, cfg)


@lru_cache(maxsize=None)
def solve_chi(
    two_j: int,
    omega_over_delta: float,
    kappa: float,
    max_nb: int = 8192,
    resid_rtol: float = 1e-11,
) -> float:
    p = ModelParams(
        delta=1.0,
        omega=omega_over_delta,
        kappa=kappa,
        spin=SpinLength(two_j),
    )
    cfg = SolverConfig(
        resid_rtol=resid_rtol,
        max_nb=max_nb,
        start_nb=suggest_start_cutoff(p),
    )
    return susceptibility(p, cfg)


def _result(name: str, passed: bool, details: str) -> CriterionResult:
    return CriterionResult(name=name, passed=bool(passed), details=details)


# --- 1. mean-field closed forms -------------------------------------------

def criterion_mf_closed_forms() -> CriterionResult:
    kappas = (0.0, 0.25, 0.5, 0.75, 1.25, 2.0, 4.0)
    worst = 0.0
    for k in kappas:
        if k <= 1.0:
            theta_ref, jx_ref, chi_ref = 0.0, 0.0, 1.0 / (1.0 - k)
        else:
            theta_ref = math.acos(1.0 / k)
            jx_ref = math.sqrt(1.0 - 1.0 / (k * k))
            chi_ref = 1.0 / (k * (k * k - 1.0))
        worst = max(
            worst,
            abs(analytics.mf_theta(k) - theta_ref),
            abs(analytics.mf_order_parameter(k, 1.0) - jx_ref),
            abs(analytics.mf_susceptibility(k) - chi_ref),
        )
    return _result(
        "mf-closed-forms", worst <= 1e-12,
        f"max |impl - branch formula| = {worst:.2e} (tol 1e-12) over kappa={kappas}",
    )


# --- 2/3. classical-oscillator order parameter and susceptibility ----------

_CO_TWO_J = 10
_CO_OOD = 0.002
_CO_GRID = tuple(
    round(k, 10) for k in np.arange(0.0, 2.0001, 0.1) if abs(k - 1.0) >= 0.1
)


def criterion_co_order_parameter() -> CriterionResult:
    worst = 0.0
    worst_k = 0.0
    for k in _CO_GRID:
        gs = solve_full(_CO_TWO_J, _CO_OOD, k, 1e-4)
        dev = abs(order_parameter(gs)[1] - analytics.mf_order_parameter(k, 1.0))
        if dev > worst:
            worst, worst_k = dev, k
    return _result(
        "co-order-parameter", worst <= 0.02,
        f"max |jx/j - mean-field| = {worst:.4f} at kappa={worst_k} (tol 0.02), "
        f"j=5, omega/delta={_CO_OOD}, {len(_CO_GRID)} grid points",
    )


def criterion_co_susceptibility() -> CriterionResult:
    worst = 0.0
    details = []
    for k in (0.25, 0.5, 2.0, 3.0):
        chi = solve_chi(_CO_TWO_J, _CO_OOD, k)
        ref = analytics.mf_susceptibility(k)
        rel = abs(chi - ref) / abs(ref)
        worst = max(worst, rel)
        details.append(f"kappa={k}: chi={chi:.5f} vs {ref:.5f} ({100 * rel:.2f}%)")
    return _result(
        "co-susceptibility", worst <= 0.05, "; ".join(details) + " (tol 5%)"
    )


# --- 4. oscillator and spin variance near the slow-oscillator limit --------

def criterion_oscillator_variance() -> CriterionResult:
    ood = 0.005
    worst_q = 0.0
    worst_j = 0.0
    for k in (0.25, 0.5, 0.75, 1.5, 2.0):
        gs = solve_full(_CO_TWO_J, ood, k, 1e-4)
        ref = analytics.co_oscillator_variance(k)
        worst_q = max(worst_q, abs(oscillator_variance(gs) - ref) / ref)
        worst_j = max(worst_j, spin_variance(gs))
    return _result(
        "co-oscillator-variance",
        worst_q <= 0.05 and worst_j <= 0.02,
        f"max rel dev of delta_q = {100 * worst_q:.2f}% (tol 5%), "
        f"max delta_j = {worst_j:.4f} (tol 0.02), j=5, omega/delta={ood}",
    )


# --- 5. classical-oscillator entropy ---------------------------------------

_ENTROPY_PTS = (0.5, 1.5, 2.0, 3.0)


def criterion_co_entropy() -> CriterionResult:
    ood = 1e-3
    worst = 0.0
    s_below = math.inf
    for k in _ENTROPY_PTS:
        gs = solve_full(_CO_TWO_J, ood, k, 0.0, max_nb=16384, resid_rtol=1e-9)
        s = entanglement_entropy(gs)
        worst = max(worst, abs(s - analytics.co_entropy(k, 5.0)))
        if k == 0.5:
            s_below = s
    # The 1e-6 sub-check cannot hold at omega/delta = 1e-3: the residual
    # spin-oscillator admixture below the transition has weight p ~ O(omega/
    # delta), giving S ~ p(1 - ln p) ~ 1.7e-3 of genuine entanglement that
    # vanishes only in the strict classical-oscillator limit.
    return _result(
        "co-entropy",
        worst <= 0.02 and s_below <= 1e-6,
        f"max |S - cat closed form| = {worst:.4f} nats (tol 0.02), "
        f"S(kappa=0.5) = {s_below:.2e} (tol 1e-6; genuine residual entanglement "
        f"at finite omega/delta), j=5, omega/delta={ood}",
    )


# --- 6. classical-spin entropy divergence ----------------------------------

def criterion_cs_entropy_divergence() -> CriterionResult:
    grid = (0.70, 0.75, 0.80, 0.85, 0.90, 0.95)
    slopes = {}
    for two_j in (20, 40, 80, 200, 400):
        s_vals = [
            entanglement_entropy(solve_full(two_j, 1.0, k, 0.0, max_nb=4096))
            for k in grid
        ]
        x = [-math.log(1.0 - k) for k in grid]
        slopes[two_j] = float(np.polyfit(x, s_vals, 1)[0])
    slope = slopes[80]
    # The entropy values are dense-oracle exact; at j = 40 the asymptotic
    # window 1-kappa >> j^(-2/3) ~ 0.085 barely overlaps [0.7, 0.95], so the
    # finite-size regression undershoots the true exponent 1/4.  The j = 100
    # and j = 200 slopes (diagnostic only) show the convergence.
    return _result(
        "cs-entropy-divergence",
        abs(slope - 0.25) <= 0.05,
        f"S vs -ln(1-kappa) slope at j=40: {slope:.4f} (target 0.25 +- 0.05); "
        f"trend j=10: {slopes[20]:.4f}, j=20: {slopes[40]:.4f}, "
        f"j=100: {slopes[200]:.4f}, j=200: {slopes[400]:.4f} -> 1/4",
    )


# --- 7. fast-oscillator limit and the LMG model ----------------------------

def _lmg_spin_variance(two_j: int, kappa: float, epsilon: float) -> float:
    spin = SpinLength(two_j)
    h = build_lmg(kappa, 1.0, spin, epsilon)
    _, vec = dense_ground(h, max_dim=4001)
    cov = _covariance_from_rho(np.outer(vec, vec), two_j)
    return max(float(np.linalg.eigvalsh(cov)[0]), 0.0)


def criterion_fo_lmg() -> CriterionResult:
    eps = 1e-4
    worst_full = 0.0
    worst_abs = 0.0
    for k in (0.3, 0.6, 1.5, 2.0):
        gs = solve_full(100, 20.0, k, eps, max_nb=4096)
        dj_full = spin_variance(gs)
        dj_lmg = _lmg_spin_variance(100, k, eps)
        worst_full = max(worst_full, abs(dj_full - dj_lmg) / dj_lmg)
        worst_abs = max(worst_abs, abs(dj_full - dj_lmg))
    worst_inf = 0.0
    for k in (0.5, 2.0):
        dj = _lmg_spin_variance(400, k, eps)
        ref = analytics.fo_spin_variance(k)
        worst_inf = max(worst_inf, abs(dj - ref) / ref)
    # The full model carries a genuine O(delta/omega) oscillator-dressing
    # correction to delta_j (dense-oracle verified; it halves each time
    # omega/delta doubles), so at omega/delta = 20 the relative gap exceeds
    # 2% wherever delta_j itself is small; absolute agreement is ~5e-3.
    return _result(
        "fo-lmg",
        worst_full <= 0.02 and worst_inf <= 0.05,
        f"max rel dev full-vs-LMG (j=50, omega/delta=20) = {100 * worst_full:.2f}% "
        f"(tol 2%; max abs dev {worst_abs:.2e}); "
        f"LMG j=200 vs large-j closed form = {100 * worst_inf:.2f}% (tol 5%)",
    )


# --- 8. squeezed oscillator -------------------------------------------------

def criterion_squeezed_oscillator() -> CriterionResult:
    from .squeezed_oscillator import StabilityViolation, solve, verify_against_truncation

    worst = 0.0
    for beta, nb in ((-0.2, 256), (0.5, 128), (2.0, 256)):
        rep = verify_against_truncation(beta, nb)
        worst = max(worst, rep.energy_error, rep.q_variance_error, rep.n_variance_error)
    try:
        solve(-0.25)
        raised = False
    except StabilityViolation:
        raised = True
    betas = np.array([-0.2499, -0.249, -0.24, -0.2])
    logs = np.log([solve(float(b)).q_variance for b in betas])
    slope = float(np.polyfit(np.log1p(4.0 * betas), logs, 1)[0])
    return _result(
        "squeezed-oscillator",
        worst <= 1e-8 and raised and abs(slope + 0.5) <= 0.01,
        f"max closed-form vs dense error = {worst:.2e} (tol 1e-8); "
        f"stability raised: {raised}; divergence exponent = {slope:.4f} (target -0.5)",
    )


# --- 9. renormalized two-level (Rabi) fast-oscillator limit -----------------

def criterion_rabi_fo() -> CriterionResult:
    xi = 0.75
    recips = [
        abs(analytics.rabi_fo_susceptibility(x, 1.0)
            * analytics.rabi_renormalized_delta(x, 1.0) - 1.0)
        for x in (0.0, 0.5, 1.0, 2.0)
    ]
    s_ren_1 = analytics.rabi_fo_entropy(1.0)
    s_ref = analytics.rabi_fo_entropy(xi)
    # The displaced two-level cat actually has branch separation xi (Jx
    # eigenvalues +-1/2 displace by -+xi/2), i.e. overlap exp(-xi^2/2); the
    # printed entropy formula uses exp(-2 xi^2) instead.  The exact ground
    # state converges to the half-displacement value, reported alongside.
    s_half = analytics._cat_entropy(math.exp(-0.5 * xi * xi))
    devs = []
    devs_half = []
    for ood in (20.0, 50.0, 100.0):
        lam = xi * ood
        kappa = analytics.lambda_to_kappa(0.5, 1.0, ood, lam)
        gs = solve_full(1, ood, round(kappa, 12), 0.0, max_nb=4096)
        s = entanglement_entropy(gs)
        devs.append(abs(s - s_ref))
        devs_half.append(abs(s - s_half))
    monotone = devs[0] >= devs[1] >= devs[2]
    return _result(
        "rabi-fo",
        max(recips) <= 1e-15
        and abs(s_ren_1 - 0.684) <= 1e-3
        and monotone
        and devs[-1] <= 0.05,
        f"max |chi_ren * delta_ren - 1| = {max(recips):.2e}; "
        f"S_ren(xi=1) = {s_ren_1:.6f} (target 0.684 +- 1e-3); "
        f"|S - S_ren| at omega/delta 20,50,100: "
        + ", ".join(f"{d:.4f}" for d in devs)
        + " (monotone, final <= 0.05); vs half-displacement cat entropy: "
        + ", ".join(f"{d:.4f}" for d in devs_half),
    )


# --- 10. property suite ------------------------------------------------------

def _random_sparse_symmetric(dim: int, seed: int):
    from scipy import sparse

    rng = np.random.default_rng(seed)
    density = min(1.0, 8.0 / dim)
    mask = sparse.random(dim, dim, density=density, random_state=rng, format="coo")
    a = sparse.coo_matrix(
        (rng.standard_normal(mask.nnz), (mask.row, mask.col)), shape=(dim, dim)
    )
    sym = ((a + a.T) * 0.5).tocsr()
    sym = sym + sparse.diags(rng.standard_normal(dim)).tocsr()
    return ((sym + sym.T) * 0.5).tocsr()


def criterion_property_suite() -> CriterionResult:
    checks: list[tuple[str, bool, str]] = []

    # Lanczos vs dense oracle on random instances and a full-model truncation.
    worst = 0.0
    for dim, seed in ((400, 1), (1200, 2), (2000, 3)):
        h = _random_sparse_symmetric(dim, seed)
        e_dense, _ = dense_ground(h)
        res = lanczos_ground(h, seed=seed, resid_rtol=1e-10)
        worst = max(worst, abs(res.energy - e_dense) / (1.0 + abs(e_dense)))
    p = ModelParams(delta=1.0, omega=1.0, kappa=1.2, spin=SpinLength(10), epsilon=1e-4)
    basis = BasisSpec(p.spin, 120)
    h = build_hamiltonian(p, basis)
    e_dense, _ = dense_ground(h)
    res = lanczos_ground(h, resid_rtol=1e-10)
    worst = max(worst, abs(res.energy - e_dense) / (1.0 + abs(e_dense)))
    checks.append(("lanczos-dense 1e-10", worst <= 1e-10, f"{worst:.2e}"))

    # Hellmann-Feynman: dE/deps = -<Jx> by central differences at fixed cutoff.
    worst = 0.0
    for kappa in (0.5, 1.3):
        p = ModelParams(delta=1.0, omega=1.0, kappa=kappa, spin=SpinLength(10),
                        epsilon=1e-4)
        basis = BasisSpec(p.spin, 128)
        step = 1e-6
        energies = {}
        for d_eps in (+step, -step):
            h = build_hamiltonian(replace(p, epsilon=p.epsilon + d_eps), basis)
            energies[d_eps] = lanczos_ground(h, tol=1e-14, resid_rtol=1e-12).energy
        deriv = (energies[+step] - energies[-step]) / (2.0 * step)
        h = build_hamiltonian(p, basis)
        r = lanczos_ground(h, tol=1e-14, resid_rtol=1e-12)
        gs = GroundState(r.energy, r.vector, p, basis, r.iterations, 0.0,
                         r.residual, r.converged, ((128, r.energy),))
        jx = order_parameter(gs)[0]
        worst = max(worst, abs(deriv + jx) / abs(jx))
    checks.append(("hellmann-feynman rel 1e-4", worst <= 1e-4, f"{worst:.2e}"))

    # Parity, order parameter, entropy bound, covariance PSD at epsilon = 0.
    states = [solve_full(_CO_TWO_J, 1e-3, k, 0.0, max_nb=16384, resid_rtol=1e-9)
              for k in _ENTROPY_PTS]
    states.append(solve_full(10, 1.0, 1.2, 0.0, max_nb=4096))
    par_dev = max(abs(parity_expectation(g) - 1.0) for g in states)
    checks.append(("parity +1 at eps=0 (1e-8)", par_dev <= 1e-8, f"{par_dev:.2e}"))
    jx_dev = max(abs(order_parameter(g)[0]) for g in states)
    checks.append(("<Jx>=0 at eps=0 (1e-9)", jx_dev <= 1e-9, f"{jx_dev:.2e}"))

    gs = solve_full(10, 0.1, 1.5, 1e-4, max_nb=4096)
    schmidt = abs(entanglement_entropy(gs) - boson_entanglement_entropy(gs))
    checks.append(("schmidt symmetry (1e-8)", schmidt <= 1e-8, f"{schmidt:.2e}"))

    all_states = states + [gs]
    bound_dev = max(
        entanglement_entropy(g) - math.log(g.basis.spin.dim) for g in all_states
    )
    checks.append(("S <= ln(2j+1)+1e-9", bound_dev <= 1e-9, f"{bound_dev:.2e}"))
    psd_min = min(float(np.linalg.eigvalsh(spin_covariance(g))[0]) for g in all_states)
    checks.append(("covariance PSD (-1e-9)", psd_min >= -1e-9, f"{psd_min:.2e}"))

    passed = all(ok for _, ok, _ in checks)
    details = "; ".join(f"{name}: {val}" for name, ok, val in checks)
    return _result("property-suite", passed, details)


CRITERIA = {
    "mf-closed-forms": criterion_mf_closed_forms,
    "co-order-parameter": criterion_co_order_parameter,
    "co-susceptibility": criterion_co_susceptibility,
    "co-oscillator-variance": criterion_oscillator_variance,
    "co-entropy": criterion_co_entropy,
    "cs-entropy-divergence": criterion_cs_entropy_divergence,
    "fo-lmg": criterion_fo_lmg,
    "squeezed-oscillator": criterion_squeezed_oscillator,
    "rabi-fo": criterion_rabi_fo,
    "property-suite": criterion_property_suite,
}

SUITES = {
    "mf": ("mf-closed-forms",),
    "mf-co": ("co-order-parameter", "co-susceptibility"),
    "co-var": ("co-oscillator-variance",),
    "co-entropy": ("co-entropy",),
    "cs-entropy": ("cs-entropy-divergence",),
    "fo-lmg": ("fo-lmg",),
    "squeezed": ("squeezed-oscillator",),
    "rabi": ("rabi-fo",),
    "properties": ("property-suite",),
    "all": tuple(CRITERIA),
}


def run_criterion(name: str) -> CriterionResult:
    return CRITERIA[name]()


def run_suite(suite: str = "all") -> list[CriterionResult]:
    """Run one suite and print a pass/fail line per criterion."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    results = []
    for name in SUITES[suite]:
        result = run_criterion(name)
        results.append(result)
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.details}")
    return results
