"""Grid experiments behind the CLI: the BCRB-vs-SNR sweep, the two-model
comparison and Monte Carlo MSE runs.  Each returns plain rows (dicts) in
grid order."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds_asymptotic import (
    bcrb_asymptotic_value,
    bcrb_large_r,
    bcrb_small_beta,
    bcrb_small_r,
)
from .bounds_exact import bcrb_x_from_gram, effective_snr
from .compare import ComparisonSpec, bcrb_pair, db_to_linear
from .distributions import AmplitudePrior, NoisePrior, variance_inflation
from .errors import DomainError
from .estimators import monte_carlo_mse
from .linmodel import MatrixEnsemble, ModelDims, generate_matrix

THREADS_ENV = "BCRB_RMT_THREADS"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise DomainError(THREADS_ENV, raw, "must be an integer") from None
        if n < 1:
            raise DomainError(THREADS_ENV, raw, "must be at least 1")
        return n
    return min(8, os.cpu_count() or 1)


def parse_db_range(text: str) -> np.ndarray:
    """'START:STOP:STEP' (stop inclusive) -> array of dB values."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise DomainError("snr_db", text, "expected START:STOP:STEP") from None
    return db_grid(start, stop, step)


def db_grid(start: float, stop: float, step: float) -> np.ndarray:
    if not step > 0:
        raise DomainError("snr_db", step, "step must be positive")
    if start > stop:
        raise DomainError("snr_db", (start, stop), "start must not exceed stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


@dataclass(frozen=True)
class SweepConfig:
    n_obs: int = 100
    n_params: int = 10
    sigma_x2: float = 1.0
    nu: float = 6.0
    snr_db: tuple = (-10.0, 30.0, 0.5)
    ensemble: str = "gaussian"
    matrix_seeds: int = 100
    seed: int = 0

    def __post_init__(self):
        ModelDims(self.n_obs, self.n_params)
        AmplitudePrior(self.sigma_x2)
        variance_inflation(self.nu)
        MatrixEnsemble(self.ensemble)
        db_grid(*self.snr_db)
        if self.matrix_seeds < 1:
            raise DomainError("seeds", self.matrix_seeds, "must be at least 1")

    @property
    def grid_db(self) -> np.ndarray:
        return db_grid(*self.snr_db)


def sweep_rows(cfg: SweepConfig, threads: int = 1) -> list[dict]:
    """BCRB vs SNR: exact bound statistics over matrix seeds next to the
    asymptotic expression and its three approximations."""
    dims = ModelDims(cfg.n_obs, cfg.n_params)
    beta = dims.beta
    ampl = AmplitudePrior(cfg.sigma_x2)
    grid_db = cfg.grid_db
    noises = [NoisePrior.from_snr(float(s), cfg.sigma_x2, cfg.nu) for s in db_to_linear(grid_db)]
    rs = [effective_snr(ampl, nz).r for nz in noises]

    def per_seed(child):
        a = generate_matrix(dims, cfg.ensemble, np.random.default_rng(child))
        gram = a.T @ a
        return [bcrb_x_from_gram(gram, r, cfg.sigma_x2) for r in rs]

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.matrix_seeds)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        exact = np.array(list(pool.map(per_seed, children)))  # seeds x grid

    rows = []
    for j, (db, r, nz) in enumerate(zip(grid_db, rs, noises)):
        column = exact[:, j]
        small_r = bcrb_small_r(r, cfg.sigma_x2, beta=beta, noise=nz)
        rows.append({
            "snr_db": float(db),
            "r": r,
            "bcrb_exact_mean": math.fsum(column) / len(column),
            "bcrb_exact_std": float(np.std(column, ddof=1)) if len(column) > 1 else 0.0,
            "bcrb_asymptotic": bcrb_asymptotic_value(r, beta, cfg.sigma_x2),
            "bcrb_small_beta": bcrb_small_beta(r, cfg.sigma_x2),
            "bcrb_small_r": small_r.value,
            "small_r_valid": small_r.valid,
            "bcrb_large_r": bcrb_large_r(r, beta, cfg.sigma_x2),
        })
    return rows


def compare_rows(nu0: float = 6.0, nu1: float = 100.0, beta: float = 0.1,
                 sigma_x2: float = 1.0, snr_db=(-10.0, 30.0, 0.5)) -> list[dict]:
    grid_db = db_grid(*snr_db)
    spec = ComparisonSpec(nu0=nu0, nu1=nu1, beta=beta, sigma_x2=sigma_x2,
                          snr_grid=tuple(db_to_linear(grid_db)))
    result = bcrb_pair(spec)
    return [
        {"snr_db": float(db), "r0": row.r0, "r1": row.r1, "bcrb0": row.bcrb0,
         "bcrb1": row.bcrb1, "bcrb1_inf": row.bcrb1_gaussian_limit}
        for db, row in zip(grid_db, result.rows)
    ]


def mc_rows(n_obs: int, n_params: int, sigma_x2: float, nus, noise_points,
            ensemble: str = "gaussian", estimator: str = "lmmse", trials: int = 10_000,
            seed: int = 0, fixed_design: bool = False, threads: int = 1) -> list[dict]:
    """Monte Carlo MSE for every (nu, noise point).

    ``noise_points`` is a list of (label_db, kind, value) with kind in
    {"snr", "sigma2", "sigma_e2"}.  Each cell gets its own child of ``seed``.
    """
    dims = ModelDims(n_obs, n_params)
    ampl = AmplitudePrior(sigma_x2)
    cells = []
    for nu in nus:
        for label, kind, value in noise_points:
            if kind == "snr":
                noise = NoisePrior.from_snr(value, sigma_x2, nu)
            elif kind == "sigma_e2":
                noise = NoisePrior.from_noise_variance(value, nu)
            else:
                variance_inflation(nu)
                noise = NoisePrior(value, nu)
            cells.append((nu, noise))
    children = np.random.SeedSequence(seed).spawn(len(cells))

    def run(cell):
        (nu, noise), child = cell
        return monte_carlo_mse(dims, ampl, noise, ensemble, estimator, trials,
                               seed=child, fixed_design=fixed_design)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, zip(cells, children)))

    rows = []
    for (nu, noise), res in zip(cells, results):
        snr = sigma_x2 / noise.sigma_e2
        rows.append({
            "snr_db": 10.0 * math.log10(snr),
            "nu": nu,
            "estimator": str(getattr(estimator, "value", estimator)),
            "trials": res.trials,
            "mse_x": res.mse_x,
            "std_err": res.std_err,
            "bound_x": res.bound_x,
            "margin": res.margin,
        })
    return rows
