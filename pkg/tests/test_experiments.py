import math

import numpy as np
import pytest

from fracwave.errors import DomainError
from fracwave.experiments import (
    ExperimentConfig,
    compute_rates,
    fem_error_experiment,
    fem_error_samples,
    modeling_error_experiment,
    modeling_error_samples,
    modeling_error_tables,
    stability_report,
    write_rate_table,
)
from fracwave.spectral import FracOrders


def _cfg(**kw):
    base = dict(orders=FracOrders(1.5, 0.75), m_traj=6, base_seed=7,
                n_fine=200, k_modes=64, n_cutoff=64,
                dt_list=(1 / 10, 1 / 20, 1 / 40), h_list=())
    base.update(kw)
    return ExperimentConfig(**base)


def test_compute_rates_examples():
    np.testing.assert_allclose(compute_rates([4.0, 1.0], [2.0, 1.0]), [2.0])
    np.testing.assert_allclose(compute_rates([1.0, 1.0], [2.0, 1.0]), [0.0])
    rate = compute_rates([1.2567e-2, 7.6842e-3], [1 / 25, 1 / 50])[0]
    assert abs(rate - 0.7097) < 2e-4
    with pytest.raises(DomainError):
        compute_rates([1.0, 0.0], [2.0, 1.0])
    with pytest.raises(DomainError):
        compute_rates([1.0], [1.0])


def test_config_validation():
    with pytest.raises(DomainError):
        _cfg(m_traj=0)
    with pytest.raises(DomainError):
        _cfg(dt_list=(1 / 3,))  # does not nest in the 200-step fine grid
    with pytest.raises(DomainError):
        _cfg(n_cutoff=100, k_modes=64)
    with pytest.raises(DomainError):
        _cfg(h_list=(0.3,))


def test_modeling_error_monotone_and_positive():
    tab = modeling_error_experiment(_cfg(m_traj=16))
    assert (tab.errors > 0.0).all()
    assert (np.diff(tab.errors) < 0.0).all()
    assert np.isnan(tab.rates[0]) and np.isfinite(tab.rates[1:]).all()
    assert (tab.stderrs > 0.0).all()


def test_modeling_error_reproducible_and_worker_invariant():
    cfg = _cfg()
    s_a = modeling_error_samples(cfg)
    s_b = modeling_error_samples(cfg)
    np.testing.assert_array_equal(s_a, s_b)
    s_c = modeling_error_samples(cfg, n_workers=3)
    np.testing.assert_array_equal(s_a, s_c)


def test_rectangle_rule_degeneration_is_exact_zero():
    # u_n configured to the reference's own rectangle rule on the fine grid
    # with full mode cutoff: per-trajectory squared error is bitwise zero
    cfg = _cfg(m_traj=5, n_fine=100, dt_list=(1 / 100,))
    samples = modeling_error_samples(cfg, rule="left")
    assert samples.shape == (5, 1)
    assert (samples == 0.0).all()


def test_doubling_trajectories_within_three_stderr():
    cfg_small = _cfg(m_traj=24)
    cfg_big = _cfg(m_traj=48)
    t_small = modeling_error_experiment(cfg_small)
    t_big = modeling_error_experiment(cfg_big)
    for j in range(len(cfg_small.dt_list)):
        gap = abs(t_small.errors[j] - t_big.errors[j])
        assert gap <= 3.0 * (t_small.stderrs[j] + t_big.stderrs[j])


def test_noise_cutoff_floor():
    # truncating sigma at n = 1 leaves an irreducible modeling-error floor
    # that dominates once the time step is fine enough
    dts = (1 / 10, 1 / 50)
    full = modeling_error_experiment(_cfg(m_traj=8, dt_list=dts))
    cut = modeling_error_experiment(_cfg(m_traj=8, n_cutoff=1, dt_list=dts))
    assert cut.errors[-1] > 1.7 * full.errors[-1]
    assert cut.errors[0] < 1.5 * full.errors[0]


def test_modeling_tables_share_noise_across_alphas():
    cfg = _cfg(m_traj=4)
    tables = modeling_error_tables(cfg, [1.25, 1.75])
    assert set(tables) == {1.25, 1.75}
    single = modeling_error_experiment(
        _cfg(m_traj=4, orders=FracOrders(1.25, 0.75)))
    np.testing.assert_allclose(tables[1.25].errors, single.errors, rtol=1e-12)
    assert tables[1.25].meta["alpha"] == 1.25
    assert tables[1.75].meta["alpha"] == 1.75


def test_fem_experiment_smoke():
    cfg = ExperimentConfig(orders=FracOrders(1.5, 0.8), m_traj=4, base_seed=11,
                           n_fine=50, k_modes=128, n_cutoff=128,
                           dt_list=(1 / 50,), h_list=(1 / 5, 1 / 10, 1 / 20),
                           fem_k_series=20_000)
    tab = fem_error_experiment(cfg)
    assert (tab.errors > 0.0).all()
    assert (np.diff(tab.errors) < 0.0).all()
    assert tab.rates[1:].min() > 2 * 0.8 - 0.3
    s1 = fem_error_samples(cfg)
    s2 = fem_error_samples(cfg, n_workers=2)
    np.testing.assert_array_equal(s1, s2)
    with pytest.raises(DomainError):
        fem_error_samples(_cfg(h_list=(1 / 5,)))  # needs exactly one dt


def test_stability_report_exponent_and_continuity():
    for alpha in (1.25, 1.5):
        rep = stability_report(FracOrders(alpha, 0.75))
        assert abs(rep["fitted_exponent"] - (-alpha)) < 0.15
        errs = rep["continuity_errors"]
        assert (np.diff(errs) < 0.0).all() and errs[-1] < 1e-4


def test_alpha_ordering_of_mean_rates():
    cfg = _cfg(m_traj=48, n_fine=400, k_modes=128, n_cutoff=128,
               dt_list=(1 / 10, 1 / 20, 1 / 40, 1 / 80))
    tables = modeling_error_tables(cfg, [1.1, 1.75])
    assert tables[1.1].mean_rate < tables[1.75].mean_rate


def test_write_rate_table_format(tmp_path):
    tab = modeling_error_experiment(_cfg(m_traj=3))
    path = tmp_path / "table.csv"
    write_rate_table(tab, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# alpha = 1.5")
    assert lines[1] == "# beta = 0.75"
    assert lines[2] == "# m_traj = 3"
    assert lines[3] == "# seed = 7"
    assert lines[4].startswith("# build = ")
    assert lines[5] == "resolution,error,rate,stderr"
    first = lines[6].split(",")
    assert float(first[0]) == 0.1 and first[2] == ""
    second = lines[7].split(",")
    assert float(second[2]) == pytest.approx(tab.rates[1])
    # shortest round-trip floats re-parse exactly
    assert float(first[1]) == tab.errors[0]
