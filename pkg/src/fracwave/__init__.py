"""fracwave: stochastic space-time fractional wave equation toolkit.

A 1-D solver suite for the Caputo-in-time, spectral-fractional-Laplacian-in-
space wave equation driven by additive space-time white noise on (0, 1),
built from Mittag-Leffler propagator kernels.  It provides

* `mittag_leffler` -- E_{alpha,beta} evaluation (fast path + slow oracle),
* `spectral` -- exact eigenbasis solutions and noise convolutions,
* `noise` -- reproducible mode-wise Brownian increments with coarsening,
* `fem` -- piecewise-linear Galerkin discretization of the fractional
  Laplacian, its discrete eigenpairs, projections and the FEM solution,
* `experiments` -- Monte Carlo mean-squared-error and convergence-rate
  harnesses with CSV output,
* `cli` -- the `fracwave` command-line front end.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("fracwave")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0-dev"

from .errors import ConvergenceError, DomainError, ResourceLimitError
from .mittag_leffler import ml, ml_series_hp, ml_time_kernel, ml_values
from .noise import NoisePaths, NoiseSpec
from .spectral import FracOrders

__all__ = [
    "__version__",
    "ConvergenceError",
    "DomainError",
    "ResourceLimitError",
    "FracOrders",
    "NoisePaths",
    "NoiseSpec",
    "ml",
    "ml_series_hp",
    "ml_time_kernel",
    "ml_values",
]
