"""Parameter sweeps over the coupling, CSV emission, and the command line.

Subcommands: ``ground`` (one converged point), ``sweep`` (CSV over a kappa
grid, full model or effective models or closed forms), ``analytic``
(closed-form curves), ``verify`` (acceptance suites).  Sweep output is
deterministic given the configuration; grid points are independent work
items and may be solved by a process pool (``DICKESIM_WORKERS`` or
``--workers``), with rows always assembled in kappa order.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import analytics
from .dicke import ModelParams
from .effective_models import build_bos_above, build_bos_below, build_lmg
from .eigensolver import (
    GroundState,
    SolverConfig,
    converge_cutoff,
    dense_ground,
    lanczos_ground,
    suggest_start_cutoff,
)
from .hilbert import BasisSpec, SpinLength, boson_matrices, spin_matrices
from .observables import (
    ObservableRecord,
    entanglement_entropy,
    measure_record,
    occupancy,
    order_parameter,
    oscillator_variance,
    parity_expectation,
    spin_variance,
    susceptibility,
)

__all__ = [
    "SweepConfig",
    "CsvRow",
    "ConfigError",
    "parse_config",
    "run_sweep",
    "write_csv",
    "rows_to_csv",
    "parse_csv",
    "cli_main",
    "main",
]

WORKERS_ENV = "DICKESIM_WORKERS"

CSV_COLUMNS = (
    "kappa", "lambda", "two_j", "omega_over_delta", "epsilon", "boson_cutoff",
    "energy", "jx", "jx_over_j", "chi", "delta_q", "delta_j", "entropy_nats",
    "parity", "occupancy", "mode", "wall_time_ms",
)

MODES = ("full", "lmg", "bos_effective", "analytic")


class ConfigError(ValueError):
    """Malformed sweep configuration text."""


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: a kappa grid plus fixed model and solver settings.

    ``epsilon`` is in the same energy units as ``delta``.  Grid points with
    |kappa - 1| < ``window`` are excluded from the output (closed forms and
    fluctuations diverge at the critical coupling).
    """

    kappa: tuple[float, ...] = tuple(np.round(np.arange(0.0, 2.0001, 0.05), 12))
    two_j: int = 1
    omega_over_delta: float = 1.0
    delta: float = 1.0
    epsilon: float = 1e-4
    window: float = 0.02
    mode: str = "full"
    out: str = "sweep.csv"
    tol: float = 1e-13
    seed: int = 42
    tail_tol: float = 1e-12
    start_nb: int = 16
    max_nb: int = 4096
    max_iter: int = 50000
    fast: bool = False

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            tol=self.tol,
            seed=self.seed,
            tail_tol=self.tail_tol,
            start_nb=self.start_nb,
            max_nb=self.max_nb,
            max_iter=self.max_iter,
        )

    def grid(self) -> tuple[float, ...]:
        return tuple(
            sorted(k for k in self.kappa if abs(k - 1.0) >= self.window)
        )


@dataclass(frozen=True)
class CsvRow:
    record: ObservableRecord
    mode: str
    wall_time_ms: float
    status: str = "ok"


_INT_KEYS = {"two_j", "seed", "start_nb", "max_nb", "max_iter"}
_FLOAT_KEYS = {"omega_over_delta", "delta", "epsilon", "window", "tol", "tail_tol"}
_BOOL_KEYS = {"fast"}


def _parse_kappa_spec(text: str) -> tuple[float, ...]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("kappa range must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("kappa range step must be positive")
        count = int(math.floor((stop - start) / step + 1.5))
        if count < 1:
            raise ValueError("kappa range is empty")
        return tuple(np.round(start + step * np.arange(count), 12))
    return tuple(float(p) for p in text.split(","))


def parse_config(text: str) -> SweepConfig:
    """Parse key=value lines ('#' starts a comment) into a SweepConfig.

    Unknown keys, malformed lines, and non-numeric values are rejected with
    the offending line number; an empty file yields all defaults.
    """
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        known = {f.name for f in fields(SweepConfig)}
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key == "kappa":
                values[key] = _parse_kappa_spec(val)
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _BOOL_KEYS:
                if val.lower() not in ("true", "false", "0", "1"):
                    raise ValueError("expected a boolean")
                values[key] = val.lower() in ("true", "1")
            elif key == "mode":
                if val not in MODES:
                    raise ValueError(f"mode must be one of {MODES}")
                values[key] = val
            else:  # out
                values[key] = val
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    try:
        return SweepConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _solve_point(config: SweepConfig, kappa: float) -> CsvRow:
    t0 = time.perf_counter()
    if config.mode == "full":
        row = _solve_full_point(config, kappa)
    elif config.mode == "lmg":
        row = _solve_lmg_point(config, kappa)
    elif config.mode == "bos_effective":
        row = _solve_bos_point(config, kappa)
    else:
        row = _analytic_point(config, kappa)
    wall = (time.perf_counter() - t0) * 1e3
    return CsvRow(record=row[0], mode=config.mode, wall_time_ms=wall, status=row[1])


def _solve_full_point(config, kappa):
    spin = SpinLength(config.two_j)
    p = ModelParams(
        delta=config.delta,
        omega=config.omega_over_delta * config.delta,
        kappa=kappa,
        spin=spin,
        epsilon=config.epsilon,
    )
    cfg = replace(
        config.solver_config(),
        start_nb=suggest_start_cutoff(p, floor=config.start_nb),
    )
    chi = math.nan
    try:
        chi = susceptibility(p, cfg)
    except RuntimeError:
        pass
    if config.fast and config.epsilon > 0:
        # Reuse the +branch susceptibility point instead of a third solve.
        center = 1e-4 * p.delta
        gs = converge_cutoff(replace(p, epsilon=1.5 * center), cfg)
    else:
        gs = converge_cutoff(p, cfg)
    record = measure_record(gs, chi=chi)
    return record, ("ok" if gs.converged else "unconverged")


def _lmg_ground(kappa, delta, spin, epsilon):
    h = build_lmg(kappa, delta, spin, epsilon)
    return dense_ground(h, max_dim=4001)


def _solve_lmg_point(config, kappa):
    spin = SpinLength(config.two_j)
    energy, vec = _lmg_ground(kappa, config.delta, spin, config.epsilon)
    jxd = spin_matrices(spin).jx.toarray()
    jx = float(vec @ (jxd @ vec))
    # Branch susceptibility by the same one-sided central difference as the
    # full model; dense solves make this cheap.
    center = 1e-4 * config.delta
    step = 0.5 * center
    jp = _lmg_ground(kappa, config.delta, spin, center + step)[1]
    jm = _lmg_ground(kappa, config.delta, spin, center - step)[1]
    chi = (config.delta / spin.j) * (
        float(jp @ (jxd @ jp)) - float(jm @ (jxd @ jm))
    ) / (2.0 * step)
    from .observables import _covariance_from_rho  # spin-only state reuse

    rho = np.outer(vec, vec)
    cov = _covariance_from_rho(rho, spin.two_j)
    delta_j = max(float(np.linalg.eigvalsh(cov)[0]), 0.0)
    spin_signs = 1.0 - 2.0 * (np.arange(spin.dim) % 2)
    record = ObservableRecord(
        kappa=kappa,
        lam=math.nan,
        two_j=spin.two_j,
        omega_over_delta=math.inf,
        epsilon=config.epsilon,
        boson_cutoff=0,
        energy=energy,
        jx=jx,
        jx_over_j=jx / spin.j,
        chi=chi,
        delta_q=math.nan,
        delta_j=delta_j,
        entropy_nats=math.nan,
        parity=float(vec @ (spin_signs * vec)),
        occupancy=math.nan,
    )
    return record, "ok"


def _solve_bos_point(config, kappa):
    j = config.two_j / 2.0
    delta = config.delta
    omega = config.omega_over_delta * delta
    lam = analytics.kappa_to_lambda(j, delta, omega, kappa)
    if kappa < 1.0:
        alpha = 0.0
        nb = 128
        h = build_bos_below(kappa, omega, j, delta, nb)
    else:
        theta = analytics.mf_theta(kappa)
        alpha = analytics.mf_alpha(theta, j, lam, omega)
        need = alpha * alpha + 10.0 * max(1.0, abs(alpha)) + 8.0
        nb = 64
        while nb < need:
            nb *= 2
        h = build_bos_above(kappa, omega, j, delta, alpha, nb)
    res = lanczos_ground(h, tol=config.tol, max_iter=config.max_iter,
                         seed=config.seed, resid_rtol=1e-9)
    v = res.vector
    b = boson_matrices(nb)
    q = (b.a + b.adag).tocsr()
    qv = q @ v
    q_mean = float(v @ qv)
    delta_q = float(qv @ qv) - q_mean * q_mean
    occ = float(v @ (b.n @ v))
    boson_signs = 1.0 - 2.0 * (np.arange(nb + 1) % 2)
    parity = float(v @ (boson_signs * v)) if kappa < 1.0 else math.nan
    record = ObservableRecord(
        kappa=kappa,
        lam=lam,
        two_j=config.two_j,
        omega_over_delta=config.omega_over_delta,
        epsilon=0.0,
        boson_cutoff=nb,
        energy=res.energy,
        jx=math.nan,
        jx_over_j=math.nan,
        chi=math.nan,
        delta_q=delta_q,
        delta_j=math.nan,
        entropy_nats=math.nan,
        parity=parity,
        occupancy=occ,
    )
    return record, ("ok" if res.converged else "unconverged")


def _analytic_point(config, kappa):
    j = config.two_j / 2.0
    delta = config.delta
    omega = config.omega_over_delta * delta
    point = analytics.mf_point(kappa, j, delta, omega)
    record = ObservableRecord(
        kappa=kappa,
        lam=analytics.kappa_to_lambda(j, delta, omega, kappa),
        two_j=config.two_j,
        omega_over_delta=config.omega_over_delta,
        epsilon=config.epsilon,
        boson_cutoff=0,
        energy=point.energy,
        jx=point.jx,
        jx_over_j=point.jx / j,
        chi=point.chi,
        delta_q=analytics.co_oscillator_variance(kappa),
        delta_j=analytics.fo_spin_variance(kappa),
        entropy_nats=analytics.co_entropy(kappa, j),
        parity=math.nan,
        occupancy=point.alpha_star * point.alpha_star,
    )
    return record, "ok"


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(config: SweepConfig, workers: int | None = None) -> list[CsvRow]:
    """Solve every grid point (kappa window around 1 excluded), sorted by kappa."""
    grid = config.grid()
    if not grid:
        raise ValueError("sweep grid is empty after the window exclusion")
    n_workers = _worker_count(workers)
    if n_workers > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            rows = list(pool.map(_solve_point, [config] * len(grid), grid))
    else:
        rows = [_solve_point(config, k) for k in grid]
    return rows


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def rows_to_csv(rows: list[CsvRow]) -> str:
    """Serialize rows with shortest-round-trip floats.

    A ``status`` column is appended only when some row failed to converge.
    """
    with_status = any(r.status != "ok" for r in rows)
    header = ",".join(CSV_COLUMNS + (("status",) if with_status else ()))
    lines = [header]
    for row in rows:
        rec = row.record
        cells = [
            _fmt(rec.kappa), _fmt(rec.lam), _fmt(rec.two_j),
            _fmt(rec.omega_over_delta), _fmt(rec.epsilon), _fmt(rec.boson_cutoff),
            _fmt(rec.energy), _fmt(rec.jx), _fmt(rec.jx_over_j), _fmt(rec.chi),
            _fmt(rec.delta_q), _fmt(rec.delta_j), _fmt(rec.entropy_nats),
            _fmt(rec.parity), _fmt(rec.occupancy), row.mode,
            _fmt(row.wall_time_ms),
        ]
        if with_status:
            cells.append(row.status)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[CsvRow]:
    """Re-parse ``rows_to_csv`` output into rows (round-trip exact)."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines:
        raise ValueError("empty CSV")
    header = lines[0].split(",")
    base = list(CSV_COLUMNS)
    if header != base and header != base + ["status"]:
        raise ValueError(f"unexpected CSV header: {lines[0]!r}")
    has_status = header[-1] == "status"
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        rec = ObservableRecord(
            kappa=float(cells[0]), lam=float(cells[1]), two_j=int(cells[2]),
            omega_over_delta=float(cells[3]), epsilon=float(cells[4]),
            boson_cutoff=int(cells[5]), energy=float(cells[6]), jx=float(cells[7]),
            jx_over_j=float(cells[8]), chi=float(cells[9]), delta_q=float(cells[10]),
            delta_j=float(cells[11]), entropy_nats=float(cells[12]),
            parity=float(cells[13]), occupancy=float(cells[14]),
        )
        rows.append(CsvRow(record=rec, mode=cells[15], wall_time_ms=float(cells[16]),
                           status=cells[17] if has_status else "ok"))
    return rows


def write_csv(rows: list[CsvRow], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))


_ANALYTIC_CURVES = {
    "mf_jx": ("kappa", lambda k, j, delta: analytics.mf_order_parameter(k, j)),
    "mf_chi": ("kappa", lambda k, j, delta: analytics.mf_susceptibility(k)),
    "co_delta_q": ("kappa", lambda k, j, delta: analytics.co_oscillator_variance(k)),
    "co_entropy": ("kappa", lambda k, j, delta: analytics.co_entropy(k, j)),
    "cs_entropy": ("kappa", lambda k, j, delta: analytics.cs_entropy_divergence(k)),
    "fo_delta_j": ("kappa", lambda k, j, delta: analytics.fo_spin_variance(k)),
    "rabi_chi": ("xi", lambda x, j, delta: analytics.rabi_fo_susceptibility(x, delta)),
    "rabi_entropy": ("xi", lambda x, j, delta: analytics.rabi_fo_entropy(x)),
}


def _cmd_ground(args) -> int:
    spin = SpinLength(args.two_j)
    p = ModelParams(
        delta=args.delta,
        omega=args.omega_over_delta * args.delta,
        kappa=args.kappa,
        spin=spin,
        epsilon=args.epsilon,
    )
    cfg = SolverConfig(
        tol=args.tol, seed=args.seed, tail_tol=args.tail_tol,
        start_nb=suggest_start_cutoff(p, floor=args.start_nb), max_nb=args.max_nb,
    )
    chi = math.nan
    if not args.skip_chi:
        chi = susceptibility(p, cfg)
    gs = converge_cutoff(p, cfg)
    record = measure_record(gs, chi=chi)
    for name in (
        "kappa", "lam", "two_j", "omega_over_delta", "epsilon", "boson_cutoff",
        "energy", "jx", "jx_over_j", "chi", "delta_q", "delta_j", "entropy_nats",
        "parity", "occupancy",
    ):
        key = "lambda" if name == "lam" else name
        print(f"{key}={_fmt(getattr(record, name))}")
    print(f"converged={str(gs.converged).lower()}")
    print(f"iterations={gs.iterations}")
    return 0 if gs.converged else 1


def _cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = parse_config(fh.read())
    if args.out is not None:
        config = replace(config, out=args.out)
    if args.fast:
        config = replace(config, fast=True)
    rows = run_sweep(config, workers=args.workers)
    write_csv(rows, config.out)
    bad = sum(1 for r in rows if r.status != "ok")
    print(f"wrote {len(rows)} rows to {config.out}" + (f" ({bad} unconverged)" if bad else ""))
    return 0


def _cmd_analytic(args) -> int:
    variable, func = _ANALYTIC_CURVES[args.curve]
    spec = args.kappa if variable == "kappa" else args.xi
    if spec is None:
        print(f"error: curve {args.curve} needs --{variable}", file=sys.stderr)
        return 2
    j = args.two_j / 2.0
    grid = _parse_kappa_spec(spec)
    lines = [f"{variable},{args.curve}"]
    for x in grid:
        lines.append(f"{_fmt(float(x))},{_fmt(func(float(x), j, args.delta))}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    from . import verification

    results = verification.run_suite(args.suite)
    return 0 if all(r.passed for r in results) else 1


def cli_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="dickesim",
        description="Dicke-model ground states, sweeps, and closed-form curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("ground", help="solve one parameter point")
    g.add_argument("--two_j", type=int, required=True)
    g.add_argument("--omega_over_delta", type=float, required=True)
    g.add_argument("--kappa", type=float, required=True)
    g.add_argument("--delta", type=float, default=1.0)
    g.add_argument("--epsilon", type=float, default=1e-4)
    g.add_argument("--tol", type=float, default=1e-13)
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--tail_tol", type=float, default=1e-12)
    g.add_argument("--start_nb", type=int, default=16)
    g.add_argument("--max_nb", type=int, default=4096)
    g.add_argument("--skip-chi", action="store_true")
    g.set_defaults(func=_cmd_ground)

    s = sub.add_parser("sweep", help="run a sweep from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--fast", action="store_true",
                   help="reuse the +branch susceptibility solve for the row observables")
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=_cmd_sweep)

    a = sub.add_parser("analytic", help="dump a closed-form curve as CSV")
    a.add_argument("--curve", choices=sorted(_ANALYTIC_CURVES), required=True)
    a.add_argument("--kappa", default=None, help="grid start:stop:step or comma list")
    a.add_argument("--xi", default=None, help="grid for the Rabi curves")
    a.add_argument("--two_j", type=int, default=1)
    a.add_argument("--delta", type=float, default=1.0)
    a.add_argument("--out", default=None)
    a.set_defaults(func=_cmd_analytic)

    v = sub.add_parser("verify", help="run acceptance suites")
    v.add_argument("--suite", default="all")
    v.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
