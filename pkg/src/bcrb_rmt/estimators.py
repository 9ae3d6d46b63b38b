"""Reference estimators and a Monte Carlo MSE harness for checking the bounds.

LMMSE only uses the marginal noise variance, so it is a legitimate competitor
to the BCRB.  The genie estimator knows the realized gamma and is reported
as a diagnostic only; it may undercut the bound.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .bounds_exact import bcrb_x_exact
from .distributions import AmplitudePrior, NoisePrior
from .errors import DomainError, EstimationError
from .linmodel import ModelDims, _as_seed_sequence, generate_matrix, synthesize


class Estimator(str, enum.Enum):
    LMMSE = "lmmse"
    GENIE = "genie"


def _posterior_mean(design, y, sigma_x2: float, noise_var: float, form: str) -> np.ndarray:
    a = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = a.shape
    if form == "kxk":
        # sigma_x2 A^T (sigma_x2 A A^T + s I)^{-1} = (A^T A + (s/sigma_x2) I)^{-1} A^T
        m = a.T @ a + (noise_var / sigma_x2) * np.eye(k)
        rhs = a.T @ y
    elif form == "nxn":
        m = sigma_x2 * (a @ a.T) + noise_var * np.eye(n)
        rhs = y
    else:
        raise ValueError(f"unknown form {form!r}")
    try:
        sol = linalg.solve(m, rhs, assume_a="pos", check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise EstimationError(f"posterior-mean solve failed: {exc}", np.linalg.cond(m)) from exc
    return sol if form == "kxk" else sigma_x2 * (a.T @ sol)


def lmmse_estimate(design, y, ampl: AmplitudePrior, noise: NoisePrior,
                   form: str = "kxk") -> np.ndarray:
    """x_hat = sigma_x2 A^T (sigma_x2 A A^T + sigma_e2 I)^{-1} y, gamma-blind."""
    return _posterior_mean(design, y, ampl.sigma_x2, noise.sigma_e2, form)


def genie_mmse_estimate(design, y, gamma: float, ampl: AmplitudePrior, noise: NoisePrior,
                        form: str = "kxk") -> np.ndarray:
    """Conditional MMSE given the realized gamma (noise variance sigma2 / gamma)."""
    if not gamma > 0:
        raise DomainError("gamma", gamma, "must be positive")
    return _posterior_mean(design, y, ampl.sigma_x2, noise.sigma2 / gamma, form)


@dataclass(frozen=True)
class McResult:
    trials: int
    mse_x: float
    std_err: float | None  # None: unavailable with a single trial
    bound_x: float
    margin: float


def monte_carlo_mse(dims: ModelDims, ampl: AmplitudePrior, noise: NoisePrior, ensemble,
                    estimator="lmmse", trials: int = 10_000, seed: int = 0,
                    fixed_design: bool = False) -> McResult:
    """Empirical normalized MSE ||x - x_hat||^2 / K against the matched BCRB.

    Every trial gets its own child stream of ``seed``.  With a fresh A per
    trial the matched bound is the average exact BCRB over the drawn
    matrices; with ``fixed_design`` one A (drawn from ``seed``) is reused.
    """
    if trials < 1:
        raise DomainError("trials", trials, "must be at least 1")
    estimator = Estimator(estimator)
    master = _as_seed_sequence(seed)
    design_ss, trial_root = master.spawn(2)
    design = None
    if fixed_design:
        design = generate_matrix(dims, ensemble, np.random.default_rng(design_ss))
        fixed_bound = bcrb_x_exact(design, ampl, noise)

    errors = np.empty(trials)
    bounds = np.empty(trials)
    k = dims.n_params
    for i, child in enumerate(trial_root.spawn(trials)):
        ds = synthesize(dims, ampl, noise, ensemble, child, design=design)
        if estimator is Estimator.LMMSE:
            x_hat = lmmse_estimate(ds.design, ds.observations, ampl, noise)
        else:
            x_hat = genie_mmse_estimate(ds.design, ds.observations, ds.gamma, ampl, noise)
        diff = ds.amplitudes - x_hat
        errors[i] = float(diff @ diff) / k
        bounds[i] = fixed_bound if fixed_design else bcrb_x_exact(ds.design, ampl, noise)

    mse = math.fsum(errors) / trials
    bound = math.fsum(bounds) / trials
    std_err = None
    if trials > 1:
        var = math.fsum((errors - mse) ** 2) / (trials - 1)
        std_err = math.sqrt(var / trials)
    return McResult(trials=trials, mse_x=mse, std_err=std_err, bound_x=bound, margin=mse - bound)
