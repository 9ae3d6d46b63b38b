"""Finite-dimension Bayesian information matrix and the exact BCRB.

The BIM is block diagonal in (x, gamma).  Averaging the data term over
gamma uses E[gamma] = 1, which turns the amplitude block into

    J_xx = A^T A / sigma2 + I / sigma_x2 = (r A^T A + I) / sigma_x2,   r = sigma_x2 / sigma2,

and the hyper-parameter block into

    J_gg = N nu^2 / (2 (nu-2)(nu-4)) + nu^2 / (2 (nu-4)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .distributions import AmplitudePrior, NoisePrior, inv_gamma_second_moment, variance_inflation
from .errors import DimensionError, DomainError

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class EffectiveSnr:
    snr: float
    r: float


@dataclass(frozen=True)
class BcrbExact:
    bcrb_x: float
    bcrb_gamma: float | None  # None when nu <= 4 (the gamma block is unbounded)


def effective_snr(ampl: AmplitudePrior, noise: NoisePrior) -> EffectiveSnr:
    inflation = variance_inflation(noise.nu)
    snr = ampl.sigma_x2 / noise.sigma_e2
    return EffectiveSnr(snr=snr, r=snr * inflation)


def _check_design(design) -> np.ndarray:
    a = np.asarray(design, dtype=float)
    if a.ndim != 2:
        raise DimensionError(f"design must be a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("design contains non-finite entries")
    return a


def bim_xx(design, ampl: AmplitudePrior, noise: NoisePrior) -> np.ndarray:
    """Amplitude block (nu / ((nu-2) sigma_e2)) A^T A + I / sigma_x2."""
    a = _check_design(design)
    data_weight = variance_inflation(noise.nu) / noise.sigma_e2
    gram = a.T @ a
    gram = 0.5 * (gram + gram.T)
    return data_weight * gram + np.eye(a.shape[1]) / ampl.sigma_x2


def bim_gamma(n_obs: int, noise: NoisePrior) -> float:
    nu = noise.nu
    if not nu > 4:
        raise DomainError("nu", nu, "hyper-parameter information needs nu > 4")
    if n_obs < 0:
        raise DimensionError(f"N={n_obs} must be non-negative")
    if math.isinf(nu):
        return math.inf
    second = inv_gamma_second_moment(nu)
    # data part E[N / (2 gamma^2)] plus hyper-prior part (nu - 2)/2 * E[1/gamma^2]
    return 0.5 * n_obs * second + 0.5 * (nu - 2.0) * second


def bim_full(design, ampl: AmplitudePrior, noise: NoisePrior) -> np.ndarray:
    """The (K+1) x (K+1) BIM with the gamma block in the last row/column."""
    jxx = bim_xx(design, ampl, noise)
    k = jxx.shape[0]
    full = np.zeros((k + 1, k + 1))
    full[:k, :k] = jxx
    full[k, k] = bim_gamma(np.shape(design)[0], noise)
    return full


def trace_inverse_spd(m: np.ndarray) -> float:
    """Tr[M^{-1}] for symmetric positive definite M.

    Cholesky solve against the identity, accepted only if the relative
    residual is below 1e-10; otherwise falls back to the eigenvalues.
    """
    k = m.shape[0]
    eye = np.eye(k)
    try:
        factor = linalg.cho_factor(m, lower=True, check_finite=False)
        inv = linalg.cho_solve(factor, eye, check_finite=False)
        resid = np.linalg.norm(m @ inv - eye) / math.sqrt(k)
        if resid < RESIDUAL_TOL:
            return float(np.trace(inv))
    except linalg.LinAlgError:
        pass
    return trace_inverse_eig(m)


def trace_inverse_eig(m: np.ndarray) -> float:
    lam = linalg.eigvalsh(m)
    if np.any(lam <= 0):
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return float(np.sum(1.0 / lam))


def bcrb_x_exact(design, ampl: AmplitudePrior, noise: NoisePrior) -> float:
    """sigma_x2 * Tr[(r A^T A + I)^{-1}] / K for the realized design."""
    a = _check_design(design)
    r = effective_snr(ampl, noise).r
    return bcrb_x_from_gram(a.T @ a, r, ampl.sigma_x2)


def bcrb_x_from_gram(gram: np.ndarray, r: float, sigma_x2: float) -> float:
    k = gram.shape[0]
    m = r * 0.5 * (gram + gram.T) + np.eye(k)
    return sigma_x2 * trace_inverse_spd(m) / k


def bcrb_x_eigen(design, ampl: AmplitudePrior, noise: NoisePrior) -> float:
    """Same bound through sum_i 1 / (r lambda_i(A^T A) + 1)."""
    a = _check_design(design)
    r = effective_snr(ampl, noise).r
    lam = np.clip(linalg.eigvalsh(a.T @ a), 0.0, None)
    return ampl.sigma_x2 * float(np.mean(1.0 / (r * lam + 1.0)))


def bcrb_gamma(n_obs: int, noise: NoisePrior) -> float:
    return 1.0 / bim_gamma(n_obs, noise)


def bcrb_exact(design, ampl: AmplitudePrior, noise: NoisePrior) -> BcrbExact:
    n_obs = np.shape(design)[0]
    gam = bcrb_gamma(n_obs, noise) if noise.nu > 4 else None
    return BcrbExact(bcrb_x=bcrb_x_exact(design, ampl, noise), bcrb_gamma=gam)
