"""Piecewise-linear Galerkin discretization of the fractional Laplacian.

The mesh is uniform on (0, 1) with N interior nodes and h = 1/(N+1).  The
fractional stiffness matrix is the Gram matrix of the hat basis in the
fractional energy inner product,

    A_ij = sum_k lam_k^beta (phi_i, e_k)(phi_j, e_k),

where (phi_i, e_k) has a closed form.  Because sin(k pi x_i) on the mesh
aliases to one of the N interior sine vectors (with a sign) whenever
k != 0, P mod 2P (P = N+1), the series collapses into N alias-class sums:
the truncated part of every class is accumulated directly and the infinite
tail is a pair of Hurwitz zeta values, so the assembled matrix carries no
series-truncation error beyond roundoff.

The discrete solution itself is spectral in the eigenpairs of the pencil
(A, M): the generalized eigenvectors diagonalize the evolution exactly as
the sine modes do on the continuous side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh
from scipy.special import zeta

from .errors import DomainError
from .mittag_leffler import kernel_weights
from .noise import NoisePaths, NoiseSpec
from .spectral import SQRT2, FracOrders, fractional_eigenvalues

__all__ = [
    "FemMesh",
    "FemField",
    "DiscreteSpectrum",
    "hat_sine_product",
    "hat_sine_matrix",
    "mass_matrix",
    "fractional_stiffness",
    "discrete_spectrum",
    "eigenvalues_from_series",
    "sine_products",
    "to_nodal",
    "to_eigen",
    "project_l2",
    "project_ritz",
    "fem_solution",
    "discrete_norm",
    "l2_error_cross",
]

DEFAULT_K_SERIES = 10**6


@dataclass(frozen=True)
class FemMesh:
    """Uniform mesh with interior nodes x_i = i*h, i = 1..N, h = 1/(N+1)."""

    n_interior: int

    def __post_init__(self):
        if self.n_interior < 1:
            raise DomainError("FemMesh: need at least one interior node")

    @property
    def h(self) -> float:
        return 1.0 / (self.n_interior + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.n_interior + 1)


@dataclass(frozen=True)
class FemField:
    """A member of the FEM space, as nodal values or eigenbasis coefficients."""

    values: np.ndarray
    basis: str  # "nodal" | "eigen"

    def __post_init__(self):
        if self.basis not in ("nodal", "eigen"):
            raise DomainError(f"FemField: unknown basis {self.basis!r}")


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Eigenpairs of the discrete fractional Laplacian on a mesh.

    eigenvectors[:, j] holds the nodal values of the j-th eigenfunction,
    normalized against the mass matrix; eigenvalues are ascending.
    """

    mesh: FemMesh
    beta: float
    k_series: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    mass: np.ndarray
    stiffness: np.ndarray


def hat_sine_product(mesh: FemMesh, i: int, k: int) -> float:
    """Inner product of hat function phi_i with sqrt(2) sin(k pi x).

    Closed form sqrt(2) * 2(1 - cos(k pi h)) sin(k pi x_i) / (h k^2 pi^2);
    i is the 1-based interior node index, k >= 1 the sine mode.
    """
    if not (1 <= i <= mesh.n_interior):
        raise IndexError(f"hat_sine_product: node index {i} out of range")
    if k < 1:
        raise IndexError(f"hat_sine_product: mode {k} out of range")
    h = mesh.h
    kph = k * math.pi * h
    return SQRT2 * 2.0 * (1.0 - math.cos(kph)) * math.sin(kph * i) / (h * (k * math.pi) ** 2)


def hat_sine_matrix(mesh: FemMesh, k_max: int) -> np.ndarray:
    """(phi_i, e_k) for k = 1..k_max (rows) and i = 1..N (columns)."""
    return _hat_sine_block(mesh, 1, k_max)


def _hat_sine_block(mesh: FemMesh, k_lo: int, k_hi: int) -> np.ndarray:
    """(phi_i, e_k) for modes k_lo..k_hi inclusive (rows) and all nodes."""
    h = mesh.h
    k = np.arange(k_lo, k_hi + 1, dtype=float)
    amp = SQRT2 * 2.0 * (1.0 - np.cos(k * math.pi * h)) / (h * (k * math.pi) ** 2)
    phases = np.sin(np.outer(k * math.pi * h, np.arange(1, mesh.n_interior + 1)))
    return amp[:, None] * phases


def _weighted_hat_sine_sum(mesh: FemMesh, weights: np.ndarray) -> np.ndarray:
    """b_i = sum_k weights_k (phi_i, e_k), accumulated in mode blocks."""
    b = np.zeros(mesh.n_interior)
    block = 1 << 17
    for lo in range(0, weights.size, block):
        hi = min(lo + block, weights.size)
        b += _hat_sine_block(mesh, lo + 1, hi).T @ weights[lo:hi]
    return b


def mass_matrix(mesh: FemMesh) -> np.ndarray:
    """Tridiagonal (h/6) [1, 4, 1] Gram matrix of the hat basis."""
    n = mesh.n_interior
    m = np.zeros((n, n))
    np.fill_diagonal(m, 4.0)
    idx = np.arange(n - 1)
    m[idx, idx + 1] = 1.0
    m[idx + 1, idx] = 1.0
    return (mesh.h / 6.0) * m


def _alias_setup(mesh: FemMesh, beta: float):
    """Per-class prefactor and sine table shared by assembly paths."""
    n = mesh.n_interior
    p = n + 1
    h = mesh.h
    m = np.arange(1, n + 1, dtype=float)
    prefac = 8.0 * math.pi ** (2.0 * beta - 4.0) * (1.0 - np.cos(m * math.pi * h)) ** 2 / h**2
    return p, prefac


def _alias_class_sums(mesh: FemMesh, beta: float, k_series: int) -> np.ndarray:
    """sum of k^(2 beta - 4) over k <= k_series in each alias class 1..N."""
    n = mesh.n_interior
    p = n + 1
    expo = 2.0 * beta - 4.0
    sums = np.zeros(n, dtype=np.longdouble)
    block = 1 << 20
    for lo in range(1, k_series + 1, block):
        k = np.arange(lo, min(lo + block, k_series + 1))
        mm = k % (2 * p)
        m = np.where(mm <= p, mm, 2 * p - mm)
        keep = (m >= 1) & (m <= n)
        np.add.at(sums, m[keep] - 1, k[keep].astype(float) ** expo)
    return sums


def _alias_tail_sums(mesh: FemMesh, beta: float, k_series: int) -> np.ndarray:
    """Exact tails sum_{k > k_series, class m} k^(2 beta - 4) via Hurwitz zeta."""
    n = mesh.n_interior
    p = n + 1
    s = 4.0 - 2.0 * beta
    m = np.arange(1, n + 1)
    j_plus = (k_series - m) // (2 * p) + 1
    j_minus = (k_series + m) // (2 * p) + 1
    frac = m / (2.0 * p)
    return (2.0 * p) ** (-s) * (zeta(s, j_plus + frac) + zeta(s, j_minus - frac))


def fractional_stiffness(mesh: FemMesh, beta: float, k_series: int = DEFAULT_K_SERIES,
                         tail: bool = True) -> np.ndarray:
    """Gram matrix of the hat basis in the fractional form of order beta.

    Sums the spectral series over modes k <= k_series, reorganized into the
    N alias classes of the mesh; with tail=True (default) the k > k_series
    remainder of every class is added in closed form, making the matrix
    exact up to roundoff.
    """
    if not (0.0 < beta <= 1.0):
        raise DomainError(f"fractional_stiffness: need 0 < beta <= 1 (got {beta})")
    if k_series < 1:
        raise DomainError("fractional_stiffness: k_series must be >= 1")
    _, prefac = _alias_setup(mesh, beta)
    sums = _alias_class_sums(mesh, beta, k_series).astype(float)
    if tail:
        sums = sums + _alias_tail_sums(mesh, beta, k_series)
    w = prefac * sums
    smat = np.sin(math.pi * mesh.h * np.outer(np.arange(1, mesh.n_interior + 1),
                                              np.arange(1, mesh.n_interior + 1)))
    a = (smat * w) @ smat.T
    return 0.5 * (a + a.T)


def discrete_spectrum(mesh: FemMesh, beta: float, k_series: int = DEFAULT_K_SERIES,
                      tail: bool = True) -> DiscreteSpectrum:
    """Eigenpairs of the generalized problem A c = lam M c, M-orthonormal.

    The pencil is reduced by the Cholesky factor of the tridiagonal mass
    matrix and solved densely; eigenvalues come out ascending and simple.
    """
    a = fractional_stiffness(mesh, beta, k_series, tail=tail)
    m = mass_matrix(mesh)
    lam, vec = eigh(a, m)
    if not (lam > 0.0).all():
        raise DomainError("discrete_spectrum: nonpositive eigenvalue (assembly failed)")
    # fix signs so the largest-magnitude nodal entry is positive
    flip = vec[np.abs(vec).argmax(axis=0), np.arange(vec.shape[1])] < 0.0
    vec[:, flip] *= -1.0
    return DiscreteSpectrum(mesh=mesh, beta=beta, k_series=k_series,
                            eigenvalues=lam, eigenvectors=vec, mass=m, stiffness=a)


def eigenvalues_from_series(spectrum: DiscreteSpectrum) -> np.ndarray:
    """Recompute each eigenvalue as sum_k lam_k^beta (e_j^h, e_k)^2.

    Independent of the aliased assembly: the truncated part sums mode by
    mode through (phi_i, e_k) and the eigenvector nodal values, the
    k > k_series remainder reuses the closed-form class tails.  Agreement
    with `spectrum.eigenvalues` validates assembly and eigensolve together.
    """
    mesh, beta = spectrum.mesh, spectrum.beta
    n = mesh.n_interior
    c = spectrum.eigenvectors
    h = mesh.h
    acc = np.zeros(n)
    block = 1 << 17
    for lo in range(1, spectrum.k_series + 1, block):
        hi = min(lo + block - 1, spectrum.k_series)
        k = np.arange(lo, hi + 1, dtype=float)
        inner = _hat_sine_block(mesh, lo, hi) @ c
        acc += np.einsum("k,kj->j", (k * math.pi) ** (2.0 * beta), inner**2)
    _, prefac = _alias_setup(mesh, beta)
    wtail = prefac * _alias_tail_sums(mesh, beta, spectrum.k_series)
    smat = np.sin(math.pi * h * np.outer(np.arange(1, n + 1), np.arange(1, n + 1)))
    proj = smat.T @ c
    acc += np.einsum("m,mj->j", wtail, proj**2)
    return acc


def sine_products(spectrum: DiscreteSpectrum, k_max: int) -> np.ndarray:
    """(e_k, e_j^h) for sine modes k = 1..k_max (rows) and FEM modes j (cols)."""
    return hat_sine_matrix(spectrum.mesh, k_max) @ spectrum.eigenvectors


def to_nodal(spectrum: DiscreteSpectrum, field: FemField) -> FemField:
    if field.basis == "nodal":
        return field
    return FemField(spectrum.eigenvectors @ field.values, "nodal")


def to_eigen(spectrum: DiscreteSpectrum, field: FemField) -> FemField:
    if field.basis == "eigen":
        return field
    return FemField(spectrum.eigenvectors.T @ (spectrum.mass @ field.values), "eigen")


def project_l2(spectrum: DiscreteSpectrum, coeffs: np.ndarray) -> FemField:
    """L2-orthogonal projection of a sine expansion onto the FEM space.

    Solves M c = b with b_i = sum_k coeffs_k (phi_i, e_k); the residual
    against each discrete eigenfunction vanishes up to the truncation of
    the supplied expansion.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    b = _weighted_hat_sine_sum(spectrum.mesh, coeffs)
    sol = cho_solve(cho_factor(spectrum.mass), b)
    return FemField(sol, "nodal")


def project_ritz(spectrum: DiscreteSpectrum, coeffs: np.ndarray) -> FemField:
    """Projection in the fractional energy inner product.

    Solves A c = b with b_i = sum_k lam_k^beta coeffs_k (phi_i, e_k), i.e.
    the discrete fractional Laplacian of the result matches the projected
    fractional Laplacian of the datum.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    lam = fractional_eigenvalues(spectrum.beta, coeffs.size)
    b = _weighted_hat_sine_sum(spectrum.mesh, lam * coeffs)
    sol = cho_solve(cho_factor(spectrum.stiffness), b)
    return FemField(sol, "nodal")


def discrete_norm(spectrum: DiscreteSpectrum, field: FemField, p: float) -> float:
    """Weighted eigen-coefficient norm sqrt(sum (lam_j^h)^(p/beta) c_j^2).

    Coincides with the L2 norm at p = 0 and the fractional energy seminorm
    at p = beta.
    """
    c = to_eigen(spectrum, field).values
    return float(np.sqrt(np.sum(spectrum.eigenvalues ** (p / spectrum.beta) * c**2)))


def l2_error_cross(u_coeffs: np.ndarray, field: FemField, spectrum: DiscreteSpectrum) -> float:
    """L2 distance between a sine expansion and a FEM field.

    Expands ||u - v||^2 with the analytic cross inner products (e_k, e_j^h),
    truncated at the length of u_coeffs.  Tiny negative values from rounding
    clamp to zero; anything below -1e-14 signals inconsistent truncations.
    """
    u_coeffs = np.asarray(u_coeffs, dtype=float)
    c = to_eigen(spectrum, field).values
    cross = sine_products(spectrum, u_coeffs.size)
    w = np.einsum("k,kj->j", u_coeffs, cross)
    err2 = float(np.sum(u_coeffs**2) - 2.0 * np.dot(c, w) + np.sum(c**2))
    if err2 < -1e-14:
        raise DomainError(f"l2_error_cross: squared distance {err2} below rounding floor")
    return math.sqrt(max(err2, 0.0))


def _grid_index(t: float, dt: float) -> int:
    idx = int(round(t / dt))
    if idx < 1 or abs(t - idx * dt) > 1e-9 * max(1.0, abs(t)):
        raise DomainError(f"t = {t} is not a positive node of the dt = {dt} grid")
    return idx


def fem_solution(orders: FracOrders, spectrum: DiscreteSpectrum, v1h: FemField,
                 v2h: FemField, spec: NoiseSpec, paths: NoisePaths, t: float,
                 rule: str = "exact") -> FemField:
    """Galerkin solution at a noise-grid node t, in eigen coefficients.

    Each discrete mode evolves by the same Mittag-Leffler factors as a
    continuous mode with eigenvalue lam_j^h; the forcing enters through the
    L2 projections (e_k, e_j^h) of the driven sine modes, integrated exactly
    over each noise subinterval (rule="exact") or by the left-point sum
    (rule="left").
    """
    if spec.K_modes != paths.n_modes:
        raise DomainError("fem_solution: paths/spec mode counts differ")
    idx = _grid_index(t, paths.dt)
    if idx > paths.n_steps:
        raise DomainError(f"fem_solution: t = {t} beyond the path horizon")
    lamh = spectrum.eigenvalues
    tgrid = np.asarray([t])
    hom = (kernel_weights(orders.alpha, "init_value", lamh, tgrid)[:, 0]
           * to_eigen(spectrum, v1h).values
           + kernel_weights(orders.alpha, "init_velocity", lamh, tgrid)[:, 0]
           * to_eigen(spectrum, v2h).values)

    left_edges = paths.dt * np.arange(idx)
    sig = spec.sigma_matrix(left_edges, truncated=True)
    forced = np.einsum("kj,ki->ji", sine_products(spectrum, spec.K_modes),
                       sig * paths.increments[:, :idx])
    if rule == "exact":
        tau_all = t - paths.dt * np.arange(idx + 1)
        tau_all[-1] = 0.0
        prim = kernel_weights(orders.alpha, "impulse_primitive", lamh, tau_all)
        wt = (prim[:, :-1] - prim[:, 1:]) / paths.dt
    elif rule == "left":
        wt = kernel_weights(orders.alpha, "impulse", lamh, t - left_edges)
    else:
        raise DomainError(f"fem_solution: unknown rule {rule!r}")
    return FemField(hom + (wt * forced).sum(axis=1), "eigen")
