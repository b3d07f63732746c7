import math
import os

import numpy as np
import pytest

from fracwave.cli import _parse_config, _sci17, main
from fracwave.fem import FemMesh, discrete_spectrum


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ml_subcommand_output(capsys):
    code, out, _ = run(["ml", "--alpha", "1", "--beta", "1", "--z", "-1"], capsys)
    assert code == 0
    assert out.strip() == "3.6787944117144233e-1"


def test_ml_subcommand_matches_oracle(capsys):
    from fracwave.mittag_leffler import ml_series_hp

    code, out, _ = run(["ml", "--alpha", "1.5", "--beta", "1.5", "--z", "-2"], capsys)
    assert code == 0
    assert math.isclose(float(out), ml_series_hp(1.5, 1.5, -2.0, 1e-30), rel_tol=1e-12)


def test_ml_domain_error_exit_code(capsys):
    code, _, err = run(["ml", "--alpha", "0", "--beta", "1", "--z", "0"], capsys)
    assert code == 2
    assert "alpha" in err


def test_usage_error_exit_code(capsys):
    code, _, _ = run(["ml", "--alpha", "1"], capsys)
    assert code == 1
    code, _, _ = run(["definitely-not-a-command"], capsys)
    assert code == 1


def test_sci17_format():
    assert _sci17(0.36787944117144233) == "3.6787944117144233e-1"
    assert _sci17(1.0) == "1.0000000000000000e0"
    assert _sci17(-12345.678) == "-1.2345678000000000e4"


def test_config_parser(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\n"
        "m_traj = 12\n"
        "beta = 0.8  # trailing comment\n"
        'label = "hello"\n'
        "flag = true\n"
        "dt_list = [0.1, 0.05]\n"
        "empty = []\n"
    )
    parsed = _parse_config(str(cfg))
    assert parsed == {"m_traj": 12, "beta": 0.8, "label": "hello", "flag": True,
                      "dt_list": [0.1, 0.05], "empty": []}


def test_config_parse_error_is_domain_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("m_traj 12\n")
    code, _, err = run(["table1", "--config", str(bad)], capsys)
    assert code == 2 and "key = value" in err


def test_missing_config_is_io_error(capsys):
    code, _, _ = run(["table1", "--config", "/nonexistent/x.cfg"], capsys)
    assert code == 3


def test_invalid_config_writes_no_partial_output(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    # second alpha is out of range; validation must reject the whole sweep
    # before any table is computed or written
    cfg.write_text("m_traj = 4\nn_fine = 100\nk_modes = 16\n"
                   "dt_list = [0.1]\nalpha_list = [1.5, 2.5]\n")
    out = tmp_path / "never"
    code, _, _ = run(["table1", "--config", str(cfg), "--out", str(out)], capsys)
    assert code == 2
    assert not out.exists() or not any(out.iterdir())


def _tiny_cfg(tmp_path):
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text(
        "m_traj = 5\n"
        "n_fine = 100\n"
        "k_modes = 32\n"
        "n_cutoff = 32\n"
        "dt_list = [0.1, 0.05]\n"
        "alpha_list = [1.5, 2.0]\n"
        "beta = 0.75\n"
    )
    return str(cfg)


def test_table1_outputs_and_determinism(tmp_path, capsys):
    cfg = _tiny_cfg(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    code, _, _ = run(["table1", "--config", cfg, "--seed", "7",
                      "--out", str(out_a), "--threads", "1"], capsys)
    assert code == 0
    code, _, _ = run(["table1", "--config", cfg, "--seed", "7",
                      "--out", str(out_b), "--threads", "2"], capsys)
    assert code == 0
    names = sorted(p.name for p in out_a.iterdir())
    assert names == ["table1_alpha1.5.csv", "table1_alpha2.csv"]
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    rows = (out_a / "table1_alpha1.5.csv").read_text().splitlines()
    assert rows[5] == "resolution,error,rate,stderr"
    assert len(rows) == 6 + 2  # one data row per dt


def test_table1_flag_overrides_config(tmp_path, capsys):
    cfg = _tiny_cfg(tmp_path)
    out = tmp_path / "c"
    code, _, _ = run(["table1", "--config", cfg, "--seed", "1", "--m-traj", "2",
                      "--out", str(out), "--threads", "1"], capsys)
    assert code == 0
    text = (out / "table1_alpha1.5.csv").read_text()
    assert "# m_traj = 2" in text


def test_out_dir_env_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FRACWAVE_OUT", str(tmp_path / "envout"))
    code, out, _ = run(["spectrum", "--n", "3", "--beta", "1.0",
                        "--k-series", "10000"], capsys)
    assert code == 0
    assert (tmp_path / "envout" / "spectrum_n3_beta1.csv").exists()


def test_table2_tiny_run(tmp_path, capsys):
    cfg = tmp_path / "t2.cfg"
    cfg.write_text(
        "alpha = 1.5\n"
        "beta_list = [0.8]\n"
        "dt = 0.1\n"
        "m_traj = 3\n"
        "k_modes = 32\n"
        "h_list = [0.1]\n"
        "fem_k_series = 10000\n"
    )
    out = tmp_path / "t2"
    code, _, _ = run(["table2", "--config", str(cfg), "--seed", "3",
                      "--out", str(out), "--threads", "1"], capsys)
    assert code == 0
    rows = (out / "table2_beta0.8.csv").read_text().splitlines()
    assert rows[5] == "resolution,error,rate,stderr"
    assert len(rows) == 7  # single mesh, no rate entry
    assert rows[6].split(",")[2] == ""


def test_spectrum_csv_matches_closed_form(tmp_path, capsys):
    code, _, _ = run(["spectrum", "--n", "9", "--beta", "1.0",
                      "--k-series", "20000", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = (tmp_path / "spectrum_n9_beta1.csv").read_text().splitlines()
    data = [r.split(",") for r in rows if not r.startswith("#")][1:]
    lam_h = np.array([float(r[1]) for r in data])
    lam_frac = np.array([float(r[2]) for r in data])
    h = 1.0 / 10.0
    j = np.arange(1, 10)
    ref = (6.0 / h**2) * (1 - np.cos(j * math.pi * h)) / (2 + np.cos(j * math.pi * h))
    np.testing.assert_allclose(lam_h, ref, rtol=1e-10)
    assert (lam_h >= lam_frac - 1e-9).all()
    assert (np.diff(lam_h) > 0.0).all()


def test_stability_csv(tmp_path, capsys):
    code, _, _ = run(["stability", "--alpha", "1.5", "--beta", "0.75",
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    text = (tmp_path / "stability_alpha1.5_beta0.75.csv").read_text()
    assert "# fitted_exponent = " in text
    assert "section,t,value" in text
    assert "decay," in text and "continuity," in text
