"""Named invariant suites run by ``bcrb-rmt validate``.

A report is ``{suite, seed, checks: [{name, value, target, tol, mode, pass}]}``.
``mode`` says how ``tol`` is read: ``abs`` |value - target| <= tol, ``rel``
|value - target| <= tol * |target|, ``max`` value <= target + tol and ``min``
value >= target - tol.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from .bounds_asymptotic import (
    bcrb_asymptotic_value,
    bcrb_large_r,
    empirical_spectral_stats,
    mp_lambda_max,
    mp_trace_inverse,
    mp_trace_inverse_sq,
)
from .bounds_exact import bcrb_gamma, bcrb_x_eigen, bcrb_x_exact, bim_full, bim_gamma
from .compare import ComparisonSpec, bcrb_pair, db_to_linear
from .distributions import (
    NU_INF,
    AmplitudePrior,
    NoisePrior,
    inv_gamma_second_moment,
    sample_gamma_hyper,
    sample_noise_conditional,
    sample_student_noise,
    student_cdf_numeric,
)
from .estimators import monte_carlo_mse
from .experiments import SweepConfig, sweep_rows
from .linmodel import ModelDims, generate_matrix

SUITES = ("distributions", "spectral", "bounds", "estimators")


@dataclass
class Check:
    name: str
    value: float
    target: float
    tol: float
    mode: str = "abs"

    @property
    def passed(self) -> bool:
        v, t, tol = self.value, self.target, self.tol
        if not math.isfinite(v):
            return False
        if self.mode == "abs":
            return abs(v - t) <= tol
        if self.mode == "rel":
            return abs(v - t) <= tol * abs(t)
        if self.mode == "max":
            return v <= t + tol
        if self.mode == "min":
            return v >= t - tol
        raise ValueError(self.mode)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def ks_critical_1pct(n: int) -> float:
    """Asymptotic one-sample Kolmogorov-Smirnov critical value at the 1% level."""
    return stats.kstwobign.isf(0.01) / math.sqrt(n)


def ks_distance(samples: np.ndarray, cdf_values_sorted: np.ndarray) -> float:
    n = samples.size
    upper = np.arange(1, n + 1) / n - cdf_values_sorted
    lower = cdf_values_sorted - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def distribution_checks(seed: int) -> list[Check]:
    ss = np.random.SeedSequence(seed).spawn(8)
    rng = lambda i: np.random.default_rng(ss[i])  # noqa: E731
    checks = []
    prior = NoisePrior(1.0, 6.0)
    gam = sample_gamma_hyper(prior, rng(0), size=1_000_000)
    checks.append(Check("gamma_mean_nu6", float(gam.mean()), 1.0, 0.005, "abs"))
    checks.append(Check("gamma_var_nu6", float(gam.var(ddof=1)), 2.0 / 6.0, 0.02, "rel"))
    # 1/gamma^2 has infinite variance at nu = 6; 10^7 draws in chunks
    g_rng, total = rng(7), 0.0
    for _ in range(10):
        total += float(np.sum(sample_gamma_hyper(prior, g_rng, size=1_000_000) ** -2.0))
    checks.append(Check("inv_gamma_sq_mean_nu6", total / 1e7,
                        inv_gamma_second_moment(6.0), 0.02, "rel"))

    e = sample_student_noise(prior, 1_000_000, rng(1))
    checks.append(Check("student_variance_nu6", float(np.mean(e * e)), prior.sigma_e2, 0.02, "rel"))

    cond = sample_noise_conditional(NoisePrior(2.0, 6.0), 0.5, 1_000_000, rng(2))
    checks.append(Check("conditional_variance", float(cond.var()), 4.0, 0.01, "rel"))

    n = 100_000
    for i, nu in enumerate((3.0, 6.0, 30.0)):
        draws = np.sort(sample_student_noise(NoisePrior(1.0, nu), n, rng(3 + i)))
        d = ks_distance(draws, student_cdf_numeric(draws, 0.0, 1.0, nu))
        checks.append(Check(f"ks_hierarchy_vs_marginal_nu{nu:g}", d, 0.0, ks_critical_1pct(n), "max"))
    return checks


def spectral_checks(seed: int, n_obs: int = 1000, beta: float = 0.1, seeds: int = 20) -> list[Check]:
    k = int(round(beta * n_obs))
    checks = []
    for ensemble in ("gaussian", "rademacher"):
        st = empirical_spectral_stats(n_obs, k, ensemble, seeds=seeds, seed=seed)
        checks += [
            Check(f"trace_inverse_{ensemble}", st.trace_inverse, mp_trace_inverse(beta), 0.02, "rel"),
            Check(f"trace_inverse_sq_{ensemble}", st.trace_inverse_sq, mp_trace_inverse_sq(beta), 0.02, "rel"),
            Check(f"lambda_max_{ensemble}", st.lambda_max, mp_lambda_max(beta), 0.03, "rel"),
        ]
    return checks


def bounds_checks(seed: int) -> list[Check]:
    checks = [
        Check("bcrb_asymptotic_0dB", bcrb_asymptotic_value(1.5, 0.1, 1.0), 0.414562, 1e-5, "abs"),
    ]
    noise = NoisePrior(1.0, 6.0)
    exact_j = Fraction(100 * 36, 2 * 4 * 2) + Fraction(36, 2 * 2)
    checks.append(Check("bim_gamma_N100_nu6", bim_gamma(100, noise), float(exact_j), 0.0, "abs"))
    checks.append(Check("bcrb_gamma_N100_nu6", bcrb_gamma(100, noise), float(1 / exact_j), 1e-15, "rel"))

    rows = sweep_rows(SweepConfig(seed=seed))
    worst = max(abs(r["bcrb_exact_mean"] - r["bcrb_asymptotic"]) / r["bcrb_asymptotic"] for r in rows)
    checks.append(Check("exact_vs_asymptotic_max_rel_dev", worst, 0.0, 0.02, "max"))

    large = [abs(bcrb_large_r(r["r"], 0.1) - r["bcrb_asymptotic"]) / r["bcrb_asymptotic"]
             for r in rows if r["snr_db"] >= 20.0]
    checks.append(Check("large_r_max_rel_dev_ge20dB", max(large), 0.0, 0.01, "max"))

    # block-diagonal consistency and eigen identity on one random design
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    ampl = AmplitudePrior(1.0)
    a = generate_matrix(ModelDims(100, 10), "gaussian", rng)
    cov = np.linalg.inv(bim_full(a, ampl, noise))
    ref = bcrb_x_exact(a, ampl, noise)
    checks.append(Check("block_inverse_trace", float(np.trace(cov[:10, :10])) / 10, ref, 1e-12, "rel"))
    checks.append(Check("block_inverse_gamma", float(cov[10, 10]), bcrb_gamma(100, noise), 1e-12, "rel"))
    checks.append(Check("eigen_vs_solve", bcrb_x_eigen(a, ampl, noise), ref, 1e-10, "rel"))

    spec = ComparisonSpec(snr_grid=tuple(db_to_linear(np.arange(0.5, 30.25, 0.5))))
    gaps = [row.bcrb1 - row.bcrb0 for row in bcrb_pair(spec).rows]
    checks.append(Check("compare_bcrb0_below_bcrb1_min_gap", min(gaps), 0.0, 0.0, "min"))
    return checks


def estimator_checks(seed: int, trials: int = 10_000) -> list[Check]:
    dims = ModelDims(100, 10)
    ampl = AmplitudePrior(1.0)
    checks = []
    nus = (5.0, 6.0, 10.0, 30.0, NU_INF)
    snrs_db = (-10.0, 0.0, 10.0, 20.0)
    children = np.random.SeedSequence(seed).spawn(len(nus) * len(snrs_db))
    for i, (nu, db) in enumerate((nu, db) for nu in nus for db in snrs_db):
        noise = NoisePrior.from_snr(float(db_to_linear(db)), 1.0, nu)
        res = monte_carlo_mse(dims, ampl, noise, "gaussian", "lmmse", trials, seed=children[i])
        tag = f"nu{nu:g}_snr{db:g}dB"
        # margin measured in standard errors
        z = res.margin / res.std_err
        checks.append(Check(f"lmmse_above_bound_{tag}", z, 0.0, 2.0, "min"))
        if math.isinf(nu):
            checks.append(Check(f"lmmse_gaussian_tightness_{tag}", z, 0.0, 2.0, "abs"))
    return checks


def run_suite(suite: str, seed: int = 0, tol_scale: float = 1.0, trials: int = 10_000) -> dict:
    if suite == "all":
        names = SUITES
    elif suite in SUITES:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}")
    checks: list[Check] = []
    for name in names:
        if name == "distributions":
            checks += distribution_checks(seed)
        elif name == "spectral":
            checks += spectral_checks(seed)
        elif name == "bounds":
            checks += bounds_checks(seed)
        else:
            checks += estimator_checks(seed, trials)
    for c in checks:
        c.tol *= tol_scale
    return {"suite": suite, "seed": seed, "checks": [c.as_dict() for c in checks]}


def report_passed(report: dict) -> bool:
    return all(c["pass"] for c in report["checks"])
