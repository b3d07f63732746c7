"""Monte Carlo error measurement and convergence-rate tables.

Two experiments are provided.  The noise-discretization (modeling-error)
experiment compares the fine-grid reference solution with the regularized
solution built from the same Brownian paths on coarser time grids, and
tracks how the root-mean-squared L2 distance decays as the coarse step
shrinks.  The Galerkin experiment compares the spectral regularized
solution with its finite element approximation across a family of meshes
at a fixed time step.

All randomness is derived from a base seed through a splittable hash, one
stream per (trajectory, mode); trajectories are aggregated in index order,
so results are byte-reproducible for any worker count.
"""

from __future__ import annotations

import math
import multiprocessing
import os
import subprocess
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import DomainError
from .fem import FemMesh, discrete_spectrum, sine_products
from .mittag_leffler import kernel_weights, ml_values
from .noise import NoiseSpec, generate, coarsen, inverse_cubic_sigma, trajectory_seed
from .spectral import (
    FracOrders,
    convolution_weights,
    fractional_eigenvalues,
    homogeneous_solution,
    parabola_coeffs,
    ramp_coeffs,
    sobolev_norm,
)

__all__ = [
    "ExperimentConfig",
    "RateTable",
    "compute_rates",
    "modeling_error_samples",
    "modeling_error_experiment",
    "modeling_error_tables",
    "fem_error_samples",
    "fem_error_experiment",
    "stability_report",
    "write_rate_table",
]

DEFAULT_DT_LIST = (1 / 25, 1 / 50, 1 / 100, 1 / 125, 1 / 200)
DEFAULT_H_LIST = (1 / 10, 1 / 25, 1 / 50, 1 / 75, 1 / 100)


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared knobs of the Monte Carlo experiments.

    dt_list holds the coarse time steps of the modeling-error experiment
    (each must be a multiple of T/n_fine that divides T); h_list holds the
    mesh widths of the Galerkin experiment, which runs at the single time
    step dt_list[0].
    """

    orders: FracOrders
    m_traj: int
    base_seed: int
    T: float = 1.0
    n_fine: int = 1000
    k_modes: int = 1000
    n_cutoff: int = 1000
    dt_list: tuple = DEFAULT_DT_LIST
    h_list: tuple = DEFAULT_H_LIST
    fem_k_series: int = 10**6

    def __post_init__(self):
        if self.m_traj < 1:
            raise DomainError("ExperimentConfig: m_traj must be >= 1")
        if self.T <= 0.0 or self.n_fine < 1:
            raise DomainError("ExperimentConfig: invalid time grid")
        if not (1 <= self.n_cutoff <= self.k_modes):
            raise DomainError("ExperimentConfig: need 1 <= n_cutoff <= k_modes")
        for dt in self.dt_list:
            self.coarse_steps(dt)  # validates divisibility
        for h in self.h_list:
            n = round(1.0 / h) - 1
            if n < 1 or abs(1.0 / (n + 1) - h) > 1e-12:
                raise DomainError(f"ExperimentConfig: h = {h} is not 1/(N+1) with N >= 1")

    @property
    def dt_fine(self) -> float:
        return self.T / self.n_fine

    def coarse_steps(self, dt: float) -> tuple[int, int]:
        """(number of coarse steps, coarsening factor) for a coarse dt."""
        steps = round(self.T / dt)
        if steps < 1 or abs(steps * dt - self.T) > 1e-9 * self.T:
            raise DomainError(f"coarse step {dt} does not divide the horizon {self.T}")
        if self.n_fine % steps != 0:
            raise DomainError(f"coarse grid with dt = {dt} does not nest in the fine grid")
        return steps, self.n_fine // steps

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(sigma=inverse_cubic_sigma, n_cutoff=self.n_cutoff,
                         K_modes=self.k_modes, T=self.T, N_fine=self.n_fine)


@dataclass
class RateTable:
    """Rows of (resolution, error, rate, stderr) plus run metadata."""

    resolutions: np.ndarray
    errors: np.ndarray
    rates: np.ndarray  # aligned with errors; first entry is nan
    stderrs: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def mean_rate(self) -> float:
        return float(np.mean(self.rates[1:]))


def compute_rates(errors, resolutions) -> np.ndarray:
    """Successive-pair convergence rates log(e_prev/e_cur)/log(r_prev/r_cur)."""
    errors = np.asarray(errors, dtype=float)
    resolutions = np.asarray(resolutions, dtype=float)
    if errors.shape != resolutions.shape or errors.size < 2:
        raise DomainError("compute_rates: need matching vectors of length >= 2")
    if (errors <= 0.0).any():
        raise DomainError("compute_rates: errors must be strictly positive")
    return np.log(errors[:-1] / errors[1:]) / np.log(resolutions[:-1] / resolutions[1:])


def _build_tag() -> str:
    here = os.path.dirname(os.path.abspath(__file__))
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"],
                             cwd=here, capture_output=True, text=True, timeout=10)
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    return f"fracwave-{__version__}"


def _table_from_samples(samples: np.ndarray, resolutions, meta: dict) -> RateTable:
    m = samples.shape[0]
    mean_sq = samples.mean(axis=0)
    errors = np.sqrt(mean_sq)
    se_mean_sq = samples.std(axis=0, ddof=1) / math.sqrt(m) if m > 1 else np.zeros_like(mean_sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        stderrs = np.where(errors > 0.0, se_mean_sq / (2.0 * errors), 0.0)
    rates = np.full(errors.size, np.nan)
    if errors.size >= 2:
        rates[1:] = compute_rates(errors, resolutions)
    return RateTable(resolutions=np.asarray(resolutions, dtype=float), errors=errors,
                     rates=rates, stderrs=stderrs, meta=meta)


# ---------------------------------------------------------------------------
# modeling error: reference vs regularized solution under time coarsening
# ---------------------------------------------------------------------------

_CTX: dict = {}


def _modeling_traj(l: int) -> np.ndarray:
    c = _CTX
    spec = c["spec"]
    seed = trajectory_seed(c["base_seed"], l)
    paths = generate(spec, seed)
    out = np.empty((len(c["alphas"]), len(c["factors"])))
    coarse = [coarsen(paths, f) for f in c["factors"]]
    for a, alpha in enumerate(c["alphas"]):
        ref = c["hom"][a] + (c["w_ref"][a] * paths.increments).sum(axis=1)
        for j, cp in enumerate(coarse):
            un = c["hom"][a] + (c["w_coarse"][a][j] * cp.increments).sum(axis=1)
            diff = ref - un
            out[a, j] = float(np.einsum("k,k->", diff, diff))
    if not np.isfinite(out).all():
        raise DomainError(f"non-finite error in trajectory {l} (seed {seed})")
    return out


def _run_indexed(fn, count: int, n_workers: int) -> list:
    if n_workers <= 1:
        return [fn(i) for i in range(count)]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=n_workers) as pool:
        return list(pool.imap(fn, range(count), chunksize=8))


def _modeling_samples_multi(cfg: ExperimentConfig, alphas, rule: str,
                            n_workers: int) -> np.ndarray:
    """Per-trajectory squared L2 errors, shape (m_traj, len(alphas), n_dt).

    One noise draw per trajectory feeds every alpha column and every coarse
    grid, so all comparisons are coupled to the same Brownian paths.
    """
    spec = cfg.noise_spec()
    v1 = parabola_coeffs(cfg.k_modes)
    v2 = ramp_coeffs(cfg.k_modes)
    hom, w_ref, w_coarse, factors = [], [], [], []
    for dt in cfg.dt_list:
        factors.append(cfg.coarse_steps(dt)[1])
    for alpha in alphas:
        orders = FracOrders(alpha, cfg.orders.beta)
        hom.append(homogeneous_solution(orders, v1, v2, cfg.T))
        w_ref.append(convolution_weights(orders, spec, cfg.dt_fine, cfg.n_fine,
                                         rule="left", truncated=False))
        per_dt = []
        for dt in cfg.dt_list:
            steps, _ = cfg.coarse_steps(dt)
            per_dt.append(convolution_weights(orders, spec, dt, steps, rule=rule,
                                              truncated=True))
        w_coarse.append(per_dt)
    _CTX.clear()
    _CTX.update(spec=spec, base_seed=cfg.base_seed, alphas=list(alphas),
                factors=factors, hom=hom, w_ref=w_ref, w_coarse=w_coarse)
    rows = _run_indexed(_modeling_traj, cfg.m_traj, n_workers)
    _CTX.clear()
    return np.stack(rows, axis=0)


def modeling_error_samples(cfg: ExperimentConfig, rule: str = "exact",
                           n_workers: int = 1) -> np.ndarray:
    """Squared L2 distance reference-vs-regularized, shape (m_traj, n_dt)."""
    return _modeling_samples_multi(cfg, [cfg.orders.alpha], rule, n_workers)[:, 0, :]


def modeling_error_experiment(cfg: ExperimentConfig, rule: str = "exact",
                              n_workers: int = 1) -> RateTable:
    """Root-mean-squared modeling errors and rates over cfg.dt_list."""
    samples = modeling_error_samples(cfg, rule=rule, n_workers=n_workers)
    meta = _meta(cfg, extra={"rule": rule})
    return _table_from_samples(samples, cfg.dt_list, meta)


def modeling_error_tables(cfg: ExperimentConfig, alphas, rule: str = "exact",
                          n_workers: int = 1) -> dict[float, RateTable]:
    """One modeling-error table per alpha, sharing trajectories and noise."""
    samples = _modeling_samples_multi(cfg, alphas, rule, n_workers)
    tables = {}
    for a, alpha in enumerate(alphas):
        meta = _meta(cfg, extra={"rule": rule})
        meta["alpha"] = alpha
        tables[alpha] = _table_from_samples(samples[:, a, :], cfg.dt_list, meta)
    return tables


def _meta(cfg: ExperimentConfig, extra: dict | None = None) -> dict:
    meta = {
        "alpha": cfg.orders.alpha,
        "beta": cfg.orders.beta,
        "m_traj": cfg.m_traj,
        "seed": cfg.base_seed,
        "build": _build_tag(),
    }
    if extra:
        meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# Galerkin error: spectral regularized solution vs FEM approximation
# ---------------------------------------------------------------------------

def _fem_traj(l: int) -> np.ndarray:
    c = _CTX
    seed = trajectory_seed(c["base_seed"], l)
    paths = coarsen(generate(c["spec"], seed), c["factor"])
    forced = c["sig"] * paths.increments  # sigma_k(t_i) * increment
    un = c["hom"] + (c["w_n"] * paths.increments).sum(axis=1)
    un_sq = float(np.einsum("k,k->", un, un))
    out = np.empty(len(c["meshes"]))
    for j, mh in enumerate(c["meshes"]):
        y = np.einsum("kj,ki->ji", mh["products"], forced)
        cj = mh["hom"] + (mh["w_time"] * y).sum(axis=1)
        w = np.einsum("k,kj->j", un, mh["products"])
        err2 = un_sq - 2.0 * float(np.einsum("j,j->", cj, w)) + float(np.einsum("j,j->", cj, cj))
        if err2 < -1e-14:
            raise DomainError(f"fem error squared {err2} below rounding floor")
        out[j] = max(err2, 0.0)
    if not np.isfinite(out).all():
        raise DomainError(f"non-finite error in trajectory {l} (seed {seed})")
    return out


def fem_error_samples(cfg: ExperimentConfig, n_workers: int = 1) -> np.ndarray:
    """Per-trajectory squared L2 FEM errors, shape (m_traj, len(h_list)).

    Runs at the single coarse step cfg.dt_list[0]; the same increments feed
    the spectral solution and, through the mode projections, every mesh.
    """
    if len(cfg.dt_list) != 1:
        raise DomainError("fem_error_samples: configure exactly one dt in dt_list")
    dt = cfg.dt_list[0]
    steps, factor = cfg.coarse_steps(dt)
    spec = cfg.noise_spec()
    orders = cfg.orders
    v1 = parabola_coeffs(cfg.k_modes)
    v2 = ramp_coeffs(cfg.k_modes)
    hom = homogeneous_solution(orders, v1, v2, cfg.T)
    w_n = convolution_weights(orders, spec, dt, steps, rule="exact", truncated=True)

    left_edges = dt * np.arange(steps)
    sig = spec.sigma_matrix(left_edges, truncated=True)
    tau_all = cfg.T - dt * np.arange(steps + 1)
    tau_all[-1] = 0.0
    t_grid = np.asarray([cfg.T])

    meshes = []
    for h in cfg.h_list:
        n = round(1.0 / h) - 1
        spectrum = discrete_spectrum(FemMesh(n), orders.beta, cfg.fem_k_series)
        products = sine_products(spectrum, cfg.k_modes)  # (e_k, e_j^h), (K, N)
        lamh = spectrum.eigenvalues
        fem_hom = (kernel_weights(orders.alpha, "init_value", lamh, t_grid)[:, 0]
                   * np.einsum("k,kj->j", v1, products)
                   + kernel_weights(orders.alpha, "init_velocity", lamh, t_grid)[:, 0]
                   * np.einsum("k,kj->j", v2, products))
        prim = kernel_weights(orders.alpha, "impulse_primitive", lamh, tau_all)
        w_time = (prim[:, :-1] - prim[:, 1:]) / dt
        meshes.append({"products": products, "hom": fem_hom, "w_time": w_time})

    _CTX.clear()
    _CTX.update(spec=spec, base_seed=cfg.base_seed, factor=factor, hom=hom,
                w_n=w_n, sig=sig, meshes=meshes)
    rows = _run_indexed(_fem_traj, cfg.m_traj, n_workers)
    _CTX.clear()
    return np.stack(rows, axis=0)


def fem_error_experiment(cfg: ExperimentConfig, n_workers: int = 1) -> RateTable:
    """Root-mean-squared FEM errors and rates over cfg.h_list."""
    samples = fem_error_samples(cfg, n_workers=n_workers)
    meta = _meta(cfg, extra={"dt": cfg.dt_list[0]})
    return _table_from_samples(samples, cfg.h_list, meta)


# ---------------------------------------------------------------------------
# homogeneous stability report
# ---------------------------------------------------------------------------

def stability_report(orders: FracOrders, mode: int = 50, n_points: int = 25) -> dict:
    """Decay and continuity diagnostics for the noise-free evolution.

    For single-mode initial displacement the coefficient is exactly
    E_{a,1}(-lam^b t^a), which decays like t^(-a) once lam^b t^a is large;
    the report fits that exponent on a log grid placed beyond the point
    where the oscillatory transient has died out (meaningful for alpha
    away from 2).  Small-time continuity uses the parabolic-bump datum.
    """
    alpha, beta = orders.alpha, orders.beta
    lam = float(fractional_eigenvalues(beta, mode)[-1])
    x_min = max(100.0, (12.0 / abs(math.cos(math.pi / alpha))) ** alpha)
    t_lo = (x_min / lam) ** (1.0 / alpha)
    t_hi = (1e6 * x_min / lam) ** (1.0 / alpha)
    t_grid = np.geomspace(t_lo, t_hi, n_points)
    vals = np.abs(ml_values(alpha, 1.0, -lam * t_grid**alpha))
    slope = float(np.polyfit(np.log(t_grid), np.log(vals), 1)[0])

    k_data = 2000
    v1 = parabola_coeffs(k_data)
    t_small = np.geomspace(1e-4, 0.5, 12)[::-1]
    cont = []
    for t in t_small:
        u = homogeneous_solution(orders, v1, np.zeros(k_data), float(t))
        cont.append(sobolev_norm(u - v1, 0.0))
    return {
        "alpha": alpha,
        "beta": beta,
        "mode": mode,
        "decay_t": t_grid,
        "decay_values": vals,
        "fitted_exponent": slope,
        "expected_exponent": -alpha,
        "continuity_t": t_small,
        "continuity_errors": np.asarray(cont),
    }


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def write_rate_table(table: RateTable, filename) -> None:
    """CSV with shortest round-trip floats and '#'-prefixed metadata lines."""
    lines = []
    for key in ("alpha", "beta", "m_traj", "seed", "build"):
        lines.append(f"# {key} = {table.meta.get(key)}")
    lines.append("resolution,error,rate,stderr")
    for i in range(table.errors.size):
        rate = "" if i == 0 or not np.isfinite(table.rates[i]) else _fmt(table.rates[i])
        lines.append(",".join([_fmt(table.resolutions[i]), _fmt(table.errors[i]),
                               rate, _fmt(table.stderrs[i])]))
    tmp = str(filename) + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, str(filename))
