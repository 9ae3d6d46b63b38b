"""Command-line front end.

    bcrb-rmt sweep     BCRB vs SNR (exact over matrix seeds + closed forms)
    bcrb-rmt compare   two noise models at a common SNR
    bcrb-rmt mc        Monte Carlo MSE of reference estimators vs the bound
    bcrb-rmt validate  invariant suites, JSON report
    bcrb-rmt synth     dump one synthetic dataset as per-component CSV files

Exit codes: 0 success, 1 validation failure or I/O error, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments, validation
from .distributions import AmplitudePrior, NoisePrior
from .errors import DimensionError, DomainError
from .linmodel import MatrixEnsemble, ModelDims, dump_dataset, synthesize

DEFAULT_SEED = 1
SNR_DB = (-10.0, 30.0, 0.5)
MC_SNR_DB = (-10.0, 20.0, 10.0)

SWEEP_COLUMNS = ("snr_db", "r", "bcrb_exact_mean", "bcrb_exact_std", "bcrb_asymptotic",
                 "bcrb_small_beta", "bcrb_small_r", "small_r_valid", "bcrb_large_r")
COMPARE_COLUMNS = ("snr_db", "r0", "r1", "bcrb0", "bcrb1", "bcrb1_inf")
MC_COLUMNS = ("snr_db", "nu", "estimator", "trials", "mse_x", "std_err", "bound_x", "margin")


class UsageError(Exception):
    pass


def parse_nu(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "gaussian"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or 'inf': {text!r}") from None


def parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected START:STOP:STEP, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers in {text!r}") from None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def _jsonable(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return None if math.isnan(v) else v
    return value


def render(rows: list[dict], columns, fmt: str, meta: dict | None = None) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
        return buf.getvalue()
    doc = {"meta": {k: _jsonable(v) for k, v in (meta or {}).items()},
           "columns": list(columns),
           "rows": [{c: _jsonable(row[c]) for c in columns} for row in rows]}
    return json.dumps(doc, indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc


def _noise_scale(args) -> tuple[str, float] | None:
    if args.sigma2 is not None:
        return "sigma2", args.sigma2
    if args.sigma_e2 is not None:
        return "sigma_e2", args.sigma_e2
    return None


def cmd_sweep(args) -> int:
    if _noise_scale(args) is not None:
        raise UsageError("sweep uses --snr-db as its noise axis; drop --sigma2/--sigma-e2")
    cfg = experiments.SweepConfig(
        n_obs=args.n, n_params=args.k, sigma_x2=args.sigma_x2, nu=args.nu,
        snr_db=args.snr_db, ensemble=args.ensemble, matrix_seeds=args.seeds, seed=args.seed,
    )
    rows = experiments.sweep_rows(cfg, threads=args.threads)
    meta = {"command": "sweep", "n": args.n, "k": args.k, "nu": args.nu,
            "sigma_x2": args.sigma_x2, "ensemble": args.ensemble, "seeds": args.seeds,
            "seed": args.seed}
    emit(render(rows, SWEEP_COLUMNS, args.format, meta), args.out)
    return 0


def cmd_compare(args) -> int:
    dims = ModelDims(args.n, args.k)
    rows = experiments.compare_rows(nu0=args.nu, nu1=args.nu1, beta=dims.beta,
                                    sigma_x2=args.sigma_x2, snr_db=args.snr_db)
    meta = {"command": "compare", "nu0": args.nu, "nu1": args.nu1, "beta": dims.beta,
            "sigma_x2": args.sigma_x2}
    emit(render(rows, COMPARE_COLUMNS, args.format, meta), args.out)
    return 0


def cmd_mc(args) -> int:
    scale = _noise_scale(args)
    if scale is None:
        points = [(db, "snr", float(10.0 ** (db / 10.0))) for db in experiments.db_grid(*args.snr_db)]
    else:
        points = [(None, scale[0], scale[1])]
    nus = args.nu_list if args.nu_list else [args.nu]
    rows = experiments.mc_rows(args.n, args.k, args.sigma_x2, nus, points,
                               ensemble=args.ensemble, estimator=args.estimator,
                               trials=args.trials, seed=args.seed,
                               fixed_design=args.fixed_design, threads=args.threads)
    meta = {"command": "mc", "n": args.n, "k": args.k, "sigma_x2": args.sigma_x2,
            "ensemble": args.ensemble, "seed": args.seed}
    emit(render(rows, MC_COLUMNS, args.format, meta), args.out)
    return 0


def cmd_validate(args) -> int:
    report = validation.run_suite(args.suite, seed=args.seed, tol_scale=args.tol_scale,
                                  trials=args.trials)
    doc = {"suite": report["suite"], "seed": report["seed"],
           "checks": [{k: _jsonable(v) for k, v in c.items()} for c in report["checks"]]}
    emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0 if validation.report_passed(report) else 1


def cmd_synth(args) -> int:
    if args.out is None:
        raise UsageError("synth needs --out DIR")
    dims = ModelDims(args.n, args.k)
    scale = _noise_scale(args)
    if scale is None:
        noise = NoisePrior.from_noise_variance(1.0, args.nu)
    elif scale[0] == "sigma2":
        noise = NoisePrior(scale[1], args.nu)
    else:
        noise = NoisePrior.from_noise_variance(scale[1], args.nu)
    ds = synthesize(dims, AmplitudePrior(args.sigma_x2), noise, args.ensemble, args.seed)
    try:
        for path in dump_dataset(ds, args.out):
            print(path)
    except OSError as exc:
        raise OSError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=100, help="observations N")
    common.add_argument("--k", type=int, default=10, help="amplitudes K")
    common.add_argument("--nu", type=parse_nu, default=6.0, help="degrees of freedom (or 'inf')")
    common.add_argument("--nu1", type=parse_nu, default=100.0, help="alternative-model nu for compare")
    common.add_argument("--sigma-x2", type=float, default=1.0, dest="sigma_x2")
    scale = common.add_mutually_exclusive_group()
    scale.add_argument("--sigma2", type=float, default=None, help="Student scale parameter")
    scale.add_argument("--sigma-e2", type=float, default=None, dest="sigma_e2",
                       help="marginal noise variance")
    common.add_argument("--snr-db", type=parse_range, default=None, metavar="START:STOP:STEP",
                        help="SNR grid in dB, stop inclusive (default -10:30:0.5, mc -10:20:10)")
    common.add_argument("--ensemble", choices=[e.value for e in MatrixEnsemble], default="gaussian")
    common.add_argument("--seeds", type=int, default=100, help="matrix seeds per grid point")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--trials", type=int, default=10_000)
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default ${experiments.THREADS_ENV} or CPU count)")

    parser = argparse.ArgumentParser(prog="bcrb-rmt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="BCRB vs SNR with limit approximations")
    sub.add_parser("compare", parents=[common], help="two models at a common SNR")
    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo MSE vs bound")
    mc.add_argument("--estimator", choices=("lmmse", "genie"), default="lmmse")
    mc.add_argument("--nu-list", type=parse_nu, nargs="+", default=None,
                    help="run several nu values (overrides --nu)")
    mc.add_argument("--fixed-design", action="store_true", help="reuse one A for all trials")
    val = sub.add_parser("validate", parents=[common], help="run invariant suites")
    val.add_argument("--suite", choices=(*validation.SUITES, "all"), default="all")
    val.add_argument("--tol-scale", type=float, default=1.0,
                     help="multiply every tolerance (0 forces strict equality)")
    sub.add_parser("synth", parents=[common], help="dump one dataset to CSV files")
    return parser


COMMANDS = {"sweep": cmd_sweep, "compare": cmd_compare, "mc": cmd_mc,
            "validate": cmd_validate, "synth": cmd_synth}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads is None:
            args.threads = experiments.default_threads()
        if args.snr_db is None:
            args.snr_db = MC_SNR_DB if args.command == "mc" else SNR_DB
        if args.threads < 1:
            raise DomainError("threads", args.threads, "must be at least 1")
        return COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"bcrb-rmt: invalid parameter {exc.param}: {exc}", file=sys.stderr)
        return 2
    except (DimensionError, UsageError) as exc:
        print(f"bcrb-rmt: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"bcrb-rmt: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
