"""Galerkin approximation error across meshes (small-scale run).

At a fixed time step the spectral regularized solution is compared with its
finite element approximation on a family of meshes, trajectory by
trajectory with identical noise.  The root-mean-squared L2 error decays at
order 2*beta in the mesh width (observed rates typically run at 2).

The full-size experiment (500 trajectories, beta in {0.6, 0.8, 1.0},
meshes down to h = 1/100) is `fracwave table2`; this demo runs a light
version.
"""

import numpy as np

from fracwave.experiments import ExperimentConfig, fem_error_experiment
from fracwave.spectral import FracOrders

for beta in (0.6, 1.0):
    cfg = ExperimentConfig(orders=FracOrders(1.5, beta), m_traj=60, base_seed=5,
                           n_fine=100, k_modes=300, n_cutoff=300,
                           dt_list=(0.01,), h_list=(1 / 10, 1 / 20, 1 / 40),
                           fem_k_series=100_000)
    tab = fem_error_experiment(cfg)
    print(f"beta = {beta} (guaranteed order {2*beta:.1f}, mean rate {tab.mean_rate:.3f})")
    print("  1/h    error        rate")
    for r, e, rt in zip(tab.resolutions, tab.errors, tab.rates):
        rate = "  --  " if np.isnan(rt) else f"{rt:.4f}"
        print(f"  {1/r:4.0f}  {e:.4e}  {rate}")
    print()
