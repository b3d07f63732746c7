"""Mode-wise Brownian increments for the discretized space-time white noise.

The noise is a sine-series expansion with per-mode amplitudes sigma_k(t) and
independent Wiener processes xi_k(t); its time discretization keeps only the
increments xi_k(t_{i+1}) - xi_k(t_i) on a uniform fine grid.  Everything
downstream (coarser grids, the reference solution, the FEM forcing) is
derived from one fine-grid increment matrix, so all resolutions of an
experiment are coupled to the same underlying Brownian paths.

Mode k draws from its own counter-based stream keyed by (seed, k), so
enlarging the mode count never changes previously generated rows, and
generation parallelizes safely.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, ResourceLimitError

__all__ = [
    "NoiseSpec",
    "NoisePaths",
    "inverse_cubic_sigma",
    "generate",
    "coarsen",
    "normalized_increment",
    "save_increments",
    "load_increments",
    "trajectory_seed",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MAGIC = b"FWNOISE1"
_DEFAULT_ENTRY_CAP = 1 << 27


def inverse_cubic_sigma(k: np.ndarray, t: float) -> np.ndarray:
    """sigma_k(t) = 1/k^3, the amplitude family used by the experiments."""
    return 1.0 / np.asarray(k, dtype=float) ** 3


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def trajectory_seed(base_seed: int, index: int) -> int:
    """Splittable per-trajectory seed: hash of (base_seed, index)."""
    return _splitmix64(_splitmix64(base_seed & _MASK64) ^ ((index + 1) * _GOLDEN & _MASK64))


@dataclass(frozen=True)
class NoiseSpec:
    """Parameters of the discretized noise.

    sigma maps (mode-number array, time) -> amplitude array; modes above
    n_cutoff are dropped from the truncated amplitude sigma^n used by the
    regularized problem, while the reference construction keeps all K_modes.
    """

    sigma: Callable[[np.ndarray, float], np.ndarray]
    n_cutoff: int
    K_modes: int
    T: float
    N_fine: int

    def __post_init__(self):
        if not (1 <= self.n_cutoff <= self.K_modes):
            raise DomainError(
                f"NoiseSpec: need 1 <= n_cutoff <= K_modes (got {self.n_cutoff}, {self.K_modes})"
            )
        if not self.T > 0.0:
            raise DomainError("NoiseSpec: horizon T must be positive")
        if self.N_fine < 1:
            raise DomainError("NoiseSpec: N_fine must be >= 1")

    @property
    def dt_fine(self) -> float:
        return self.T / self.N_fine

    def sigma_matrix(self, times: np.ndarray, truncated: bool) -> np.ndarray:
        """sigma_k(t_i) on modes 1..K_modes x times; zero rows past n_cutoff."""
        modes = np.arange(1, self.K_modes + 1)
        cols = [np.asarray(self.sigma(modes, float(t)), dtype=float) for t in times]
        mat = np.stack(cols, axis=1)
        if truncated and self.n_cutoff < self.K_modes:
            mat[self.n_cutoff:, :] = 0.0
        return mat


@dataclass(frozen=True)
class NoisePaths:
    """Increment matrix: entry (k-1, i) = xi_k(t_{i+1}) - xi_k(t_i)."""

    increments: np.ndarray
    dt: float
    seed: int

    @property
    def n_modes(self) -> int:
        return self.increments.shape[0]

    @property
    def n_steps(self) -> int:
        return self.increments.shape[1]


def generate(spec: NoiseSpec, seed: int, max_entries: int = _DEFAULT_ENTRY_CAP) -> NoisePaths:
    """Draw the fine-grid increment matrix for one trajectory.

    Entry (k-1, i) ~ N(0, dt_fine), independent across modes and steps.
    Mode k uses a Philox stream keyed by (seed, k); rows are therefore
    reproducible and unchanged when K_modes grows.
    """
    if spec.K_modes * spec.N_fine > max_entries:
        raise ResourceLimitError(
            f"noise matrix {spec.K_modes}x{spec.N_fine} exceeds cap of {max_entries} entries"
        )
    seed = int(seed) & _MASK64
    root = np.sqrt(spec.dt_fine)
    out = np.empty((spec.K_modes, spec.N_fine))
    for k in range(1, spec.K_modes + 1):
        gen = np.random.Generator(np.random.Philox(key=np.array([seed, k], dtype=np.uint64)))
        out[k - 1] = gen.standard_normal(spec.N_fine)
    out *= root
    out.flags.writeable = False
    return NoisePaths(increments=out, dt=spec.dt_fine, seed=seed)


def coarsen(paths: NoisePaths, factor: int) -> NoisePaths:
    """Aggregate groups of `factor` consecutive increments.

    The same Brownian path is represented on the coarser grid; summation
    within each group runs in ascending step order so results are
    bit-reproducible.
    """
    if factor < 1 or paths.n_steps % factor != 0:
        raise DomainError(
            f"coarsen: factor {factor} must divide the {paths.n_steps} fine steps"
        )
    if factor == 1:
        return paths
    grouped = paths.increments.reshape(paths.n_modes, paths.n_steps // factor, factor)
    acc = grouped[:, :, 0].copy()
    for j in range(1, factor):
        acc += grouped[:, :, j]
    acc.flags.writeable = False
    return NoisePaths(increments=acc, dt=paths.dt * factor, seed=paths.seed)


def normalized_increment(paths: NoisePaths, k: int, i: int) -> float:
    """Unit-variance increment: entry (k, i) divided by sqrt(dt).

    Indices are 0-based positions into the increment matrix.
    """
    if not (0 <= k < paths.n_modes and 0 <= i < paths.n_steps):
        raise IndexError(f"normalized_increment: ({k}, {i}) out of range")
    return float(paths.increments[k, i] / np.sqrt(paths.dt))


def save_increments(paths: NoisePaths, filename) -> None:
    """Binary dump: 8-byte magic, K and N as little-endian int32, then the
    row-major little-endian float64 increment matrix."""
    header = _MAGIC + struct.pack("<ii", paths.n_modes, paths.n_steps)
    data = np.ascontiguousarray(paths.increments, dtype="<f8")
    with open(filename, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes(order="C"))


def load_increments(filename, dt: float, seed: int = 0) -> NoisePaths:
    """Read a dump written by `save_increments`.

    The file format carries only the matrix; the grid spacing (and
    optionally the originating seed) are supplied by the caller.
    """
    with open(filename, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16 or header[:8] != _MAGIC:
            raise DomainError(f"{filename}: not a noise increment dump")
        n_modes, n_steps = struct.unpack("<ii", header[8:])
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != n_modes * n_steps:
        raise DomainError(f"{filename}: truncated increment dump")
    mat = data.reshape(n_modes, n_steps).astype(float)
    mat.flags.writeable = False
    return NoisePaths(increments=mat, dt=float(dt), seed=int(seed) & _MASK64)
