"""Large-system (K, N -> inf, K/N -> beta) limits of the amplitude BCRB.

    BCRB_inf = sigma_x2 * (1 - f(r, beta) / (4 r beta))
    f(r, beta) = (sqrt(r (1 + sqrt(beta))^2 + 1) - sqrt(r (1 - sqrt(beta))^2 + 1))^2

plus its small-beta, small-r and large-r approximations and the
Marchenko-Pastur functionals those rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .distributions import NoisePrior, variance_inflation
from .errors import DomainError
from .linmodel import ModelDims, generate_matrix

SMALL_BETA_MAX = 0.15
LARGE_R_FACTOR = 10.0


def _check_beta(beta: float) -> None:
    if not 0.0 < beta < 1.0:
        raise DomainError("beta", beta, "must lie strictly inside (0, 1)")


def _check_r(r: float) -> None:
    if not r >= 0.0:
        raise DomainError("r", r, "must be non-negative")


@dataclass(frozen=True)
class AsymptoticParams:
    r: float
    beta: float
    sigma_x2: float = 1.0

    def __post_init__(self):
        _check_beta(self.beta)
        _check_r(self.r)
        if not self.sigma_x2 > 0:
            raise DomainError("sigma_x2", self.sigma_x2, "must be positive")


@dataclass(frozen=True)
class BcrbAsymptotic:
    value: float
    f_value: float
    regime_flags: frozenset


def _radicals(r: float, beta: float) -> tuple[float, float]:
    sb = math.sqrt(beta)
    return math.sqrt(r * (1.0 + sb) ** 2 + 1.0), math.sqrt(r * (1.0 - sb) ** 2 + 1.0)


def f_func(r: float, beta: float) -> float:
    _check_beta(beta)
    _check_r(r)
    hi, lo = _radicals(r, beta)
    # hi^2 - lo^2 = 4 r sqrt(beta) exactly; avoids cancellation in hi - lo
    diff = 4.0 * r * math.sqrt(beta) / (hi + lo)
    return diff * diff


def _information_fraction(r: float, beta: float) -> float:
    """f(r, beta) / (4 r beta) rewritten as 4 r / (hi + lo)^2 (finite at r = 0)."""
    hi, lo = _radicals(r, beta)
    return 4.0 * r / (hi + lo) ** 2


def mp_lambda_max(beta: float) -> float:
    _check_beta(beta)
    return (1.0 + math.sqrt(beta)) ** 2


def mp_trace_inverse(beta: float) -> float:
    """Limit of (1/K) Tr[(A^T A)^{-1}]."""
    _check_beta(beta)
    return 1.0 / (1.0 - beta)


def mp_trace_inverse_sq(beta: float) -> float:
    """Limit of (1/K) Tr[(A^T A)^{-2}]."""
    _check_beta(beta)
    return 1.0 / (1.0 - beta) ** 3


def small_r_valid(r: float, beta: float, snr: float | None = None,
                  nu: float | None = None) -> bool:
    """Neumann-series guard r * lambda_max < 1, and SNR < (nu-2)/(4 nu) when nu is known."""
    ok = r * mp_lambda_max(beta) < 1.0
    if ok and nu is not None:
        snr = r / variance_inflation(nu) if snr is None else snr
        ok = snr < 1.0 / (4.0 * variance_inflation(nu))
    return ok


def regime_flags(r: float, beta: float, nu: float | None = None) -> frozenset:
    flags = set()
    if beta < SMALL_BETA_MAX:
        flags.add("small_beta_ok")
    if small_r_valid(r, beta, nu=nu):
        flags.add("small_r_ok")
    if r > LARGE_R_FACTOR / (1.0 - beta) ** 2:
        flags.add("large_r_ok")
    return frozenset(flags)


def bcrb_x_asymptotic(p: AsymptoticParams, nu: float | None = None) -> BcrbAsymptotic:
    fraction = _information_fraction(p.r, p.beta)
    return BcrbAsymptotic(
        value=p.sigma_x2 * (1.0 - fraction),
        f_value=f_func(p.r, p.beta),
        regime_flags=regime_flags(p.r, p.beta, nu),
    )


def bcrb_asymptotic_value(r: float, beta: float, sigma_x2: float = 1.0) -> float:
    """Scalar shortcut for ``bcrb_x_asymptotic(...).value``."""
    _check_beta(beta)
    _check_r(r)
    return sigma_x2 * (1.0 - _information_fraction(r, beta))


def bcrb_small_beta(r: float, sigma_x2: float = 1.0) -> float:
    _check_r(r)
    return sigma_x2 / (r + 1.0)


class SmallRApprox(NamedTuple):
    value: float
    valid: bool


def bcrb_small_r(r: float, sigma_x2: float = 1.0, beta: float | None = None,
                 noise: NoisePrior | None = None) -> SmallRApprox:
    """First-order Neumann approximation sigma_x2 (1 - r).

    Never refuses; ``valid`` reports whether r lambda_max < 1 (needs ``beta``)
    and, given ``noise``, whether SNR < (nu-2)/(4 nu).
    """
    _check_r(r)
    valid = True
    if beta is not None:
        valid = r * mp_lambda_max(beta) < 1.0
    if noise is not None:
        snr = sigma_x2 / noise.sigma_e2
        valid = valid and snr < 1.0 / (4.0 * variance_inflation(noise.nu))
    return SmallRApprox(sigma_x2 * (1.0 - r), valid)


def bcrb_large_r(r: float, beta: float, sigma_x2: float = 1.0) -> float:
    _check_beta(beta)
    if not r > 0:
        raise DomainError("r", r, "large-r expansion needs r > 0")
    return (sigma_x2 / r) * (mp_trace_inverse(beta) - mp_trace_inverse_sq(beta) / r)


@dataclass(frozen=True)
class SpectralStats:
    trace_inverse: float
    trace_inverse_sq: float
    lambda_max: float


def empirical_spectral_stats(n_obs: int, n_params: int, ensemble="gaussian",
                             seeds: int = 20, seed: int = 0) -> SpectralStats:
    """Seed-averaged (1/K) Tr[(A^T A)^-1], (1/K) Tr[(A^T A)^-2] and lambda_max(A^T A)."""
    dims = ModelDims(n_obs, n_params)
    inv, inv_sq, top = [], [], []
    for child in np.random.SeedSequence(seed).spawn(seeds):
        a = generate_matrix(dims, ensemble, np.random.default_rng(child))
        lam = np.linalg.eigvalsh(a.T @ a)
        inv.append(np.mean(1.0 / lam))
        inv_sq.append(np.mean(1.0 / lam**2))
        top.append(lam[-1])
    return SpectralStats(float(np.mean(inv)), float(np.mean(inv_sq)), float(np.mean(top)))
