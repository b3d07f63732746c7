"""Command-line front end.

Subcommands: `ml` (point evaluation of E_{alpha,beta}), `table1` (modeling
error vs time step, one CSV per alpha), `table2` (Galerkin error vs mesh
width, one CSV per beta), `spectrum` (discrete fractional Laplacian
eigenvalues), `stability` (homogeneous decay/continuity diagnostics).

Exit codes: 0 success, 1 usage error, 2 domain error, 3 I/O error.
Output directory resolution: --out flag, else $FRACWAVE_OUT, else the
working directory.  A config file (flat `key = value` lines, a TOML
subset) may supply any experiment knob; flags override it.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConvergenceError, DomainError
from .experiments import (
    DEFAULT_DT_LIST,
    DEFAULT_H_LIST,
    ExperimentConfig,
    fem_error_experiment,
    modeling_error_tables,
    stability_report,
    write_rate_table,
)
from .fem import FemMesh, discrete_spectrum
from .mittag_leffler import ml
from .spectral import FracOrders, fractional_eigenvalues

DEFAULT_SEED = 12345
DEFAULT_ALPHAS = (1.1, 1.25, 1.5, 1.75, 2.0)
DEFAULT_BETAS = (0.6, 0.8, 1.0)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for domain errors
        raise _UsageError(message)


def _sci17(value: float) -> str:
    """17 significant digits, scientific, exponent without zero padding."""
    mantissa, exp = f"{value:.16e}".split("e")
    return f"{mantissa}e{int(exp)}"


def _parse_config(path: str) -> dict:
    """Flat `key = value` file: numbers, booleans, quoted strings, [lists]."""

    def scalar(tok: str):
        tok = tok.strip()
        if tok.lower() in ("true", "false"):
            return tok.lower() == "true"
        if tok.startswith('"') and tok.endswith('"') and len(tok) >= 2:
            return tok[1:-1]
        try:
            return int(tok)
        except ValueError:
            pass
        try:
            return float(tok)
        except ValueError:
            raise DomainError(f"config {path}: cannot parse value {tok!r}")

    out = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config {path}:{ln}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            if val.startswith("[") and val.endswith("]"):
                body = val[1:-1].strip()
                out[key] = [scalar(tok) for tok in body.split(",")] if body else []
            else:
                out[key] = scalar(val)
    return out


def _setting(args, cfg: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in cfg:
        return cfg[key]
    return default


def _out_dir(args) -> str:
    out = args.out or os.environ.get("FRACWAVE_OUT") or "."
    os.makedirs(out, exist_ok=True)
    return out


def _num(x: float) -> str:
    return repr(float(x))


def _write_csv(path: str, comment_lines: list[str], header: str, rows: list[str]) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        for line in comment_lines:
            fh.write(f"# {line}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_ml(args) -> int:
    print(_sci17(ml(args.alpha, args.beta, args.z)))
    return 0


def _cmd_table1(args) -> int:
    cfg_file = _parse_config(args.config) if args.config else {}
    alphas = [float(a) for a in _setting(args, cfg_file, "alpha_list", DEFAULT_ALPHAS)]
    beta = float(_setting(args, cfg_file, "beta", 0.75))
    m_traj = int(_setting(args, cfg_file, "m_traj", 1000))
    seed = int(_setting(args, cfg_file, "seed", DEFAULT_SEED))
    n_fine = int(_setting(args, cfg_file, "n_fine", 1000))
    k_modes = int(_setting(args, cfg_file, "k_modes", 1000))
    n_cutoff = int(_setting(args, cfg_file, "n_cutoff", k_modes))
    dt_list = tuple(float(x) for x in _setting(args, cfg_file, "dt_list", DEFAULT_DT_LIST))
    threads = args.threads or int(cfg_file.get("threads", 0)) or (os.cpu_count() or 1)

    base = ExperimentConfig(orders=FracOrders(alphas[0], beta), m_traj=m_traj,
                            base_seed=seed, n_fine=n_fine, k_modes=k_modes,
                            n_cutoff=n_cutoff, dt_list=dt_list, h_list=())
    for alpha in alphas:
        FracOrders(alpha, beta)  # validate the whole sweep before any work
    tables = modeling_error_tables(base, alphas, n_workers=threads)
    out = _out_dir(args)
    for alpha, table in tables.items():
        write_rate_table(table, os.path.join(out, f"table1_alpha{alpha:g}.csv"))
    print(f"wrote {len(tables)} modeling-error tables to {out}")
    return 0


def _cmd_table2(args) -> int:
    cfg_file = _parse_config(args.config) if args.config else {}
    alpha = float(_setting(args, cfg_file, "alpha", 1.5))
    betas = [float(b) for b in _setting(args, cfg_file, "beta_list", DEFAULT_BETAS)]
    dt = float(_setting(args, cfg_file, "dt", 0.01))
    m_traj = int(_setting(args, cfg_file, "m_traj", 500))
    seed = int(_setting(args, cfg_file, "seed", DEFAULT_SEED))
    k_modes = int(_setting(args, cfg_file, "k_modes", 1000))
    n_cutoff = int(_setting(args, cfg_file, "n_cutoff", k_modes))
    h_list = tuple(float(x) for x in _setting(args, cfg_file, "h_list", DEFAULT_H_LIST))
    k_series = int(_setting(args, cfg_file, "fem_k_series", 10**6))
    threads = args.threads or int(cfg_file.get("threads", 0)) or (os.cpu_count() or 1)

    n_steps = round(1.0 / dt)
    cfgs = [ExperimentConfig(orders=FracOrders(alpha, beta), m_traj=m_traj,
                             base_seed=seed, n_fine=n_steps, k_modes=k_modes,
                             n_cutoff=n_cutoff, dt_list=(dt,), h_list=h_list,
                             fem_k_series=k_series)
            for beta in betas]
    out = _out_dir(args)
    for beta, cfg in zip(betas, cfgs):
        table = fem_error_experiment(cfg, n_workers=threads)
        write_rate_table(table, os.path.join(out, f"table2_beta{beta:g}.csv"))
    print(f"wrote {len(cfgs)} Galerkin-error tables to {out}")
    return 0


def _cmd_spectrum(args) -> int:
    spectrum = discrete_spectrum(FemMesh(args.n), args.beta, args.k_series)
    lam_frac = fractional_eigenvalues(args.beta, args.n)
    rows = [",".join([str(j + 1), _num(spectrum.eigenvalues[j]), _num(lam_frac[j])])
            for j in range(args.n)]
    out = _out_dir(args)
    path = os.path.join(out, f"spectrum_n{args.n}_beta{args.beta:g}.csv")
    _write_csv(path, [f"n_interior = {args.n}", f"beta = {args.beta}",
                      f"k_series = {args.k_series}"],
               "j,lambda_h,lambda_frac", rows)
    print(path)
    return 0


def _cmd_stability(args) -> int:
    rep = stability_report(FracOrders(args.alpha, args.beta))
    rows = [f"decay,{_num(t)},{_num(v)}"
            for t, v in zip(rep["decay_t"], rep["decay_values"])]
    rows += [f"continuity,{_num(t)},{_num(v)}"
             for t, v in zip(rep["continuity_t"], rep["continuity_errors"])]
    out = _out_dir(args)
    path = os.path.join(out, f"stability_alpha{args.alpha:g}_beta{args.beta:g}.csv")
    _write_csv(path, [f"alpha = {args.alpha}", f"beta = {args.beta}",
                      f"fitted_exponent = {rep['fitted_exponent']}",
                      f"expected_exponent = {rep['expected_exponent']}"],
               "section,t,value", rows)
    print(path)
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="fracwave",
                     description="Stochastic fractional wave equation experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ml = sub.add_parser("ml", help="evaluate E_{alpha,beta}(z)")
    p_ml.add_argument("--alpha", type=float, required=True)
    p_ml.add_argument("--beta", type=float, required=True)
    p_ml.add_argument("--z", type=float, required=True)
    p_ml.set_defaults(func=_cmd_ml)

    def experiment_flags(p):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--seed", type=int, dest="seed")
        p.add_argument("--out", help="output directory (default $FRACWAVE_OUT or .)")
        p.add_argument("--threads", type=int)
        p.add_argument("--m-traj", type=int, dest="m_traj")

    p_t1 = sub.add_parser("table1", help="modeling error vs time step")
    experiment_flags(p_t1)
    p_t1.set_defaults(func=_cmd_table1)

    p_t2 = sub.add_parser("table2", help="Galerkin error vs mesh width")
    experiment_flags(p_t2)
    p_t2.set_defaults(func=_cmd_table2)

    p_sp = sub.add_parser("spectrum", help="discrete fractional Laplacian eigenvalues")
    p_sp.add_argument("--n", type=int, required=True, help="interior node count")
    p_sp.add_argument("--beta", type=float, required=True)
    p_sp.add_argument("--k-series", type=int, default=10**6, dest="k_series")
    p_sp.add_argument("--out")
    p_sp.set_defaults(func=_cmd_spectrum)

    p_st = sub.add_parser("stability", help="homogeneous decay diagnostics")
    p_st.add_argument("--alpha", type=float, required=True)
    p_st.add_argument("--beta", type=float, required=True)
    p_st.add_argument("--out")
    p_st.set_defaults(func=_cmd_stability)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DomainError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
