"""Normal-Gamma noise hierarchy and its Student's t marginal.

The noise model is

    gamma ~ Gamma(nu/2, rate=nu/2)
    e_i | gamma ~ N(0, sigma2 / gamma)

so that marginally e_i ~ S(0, sigma2, nu) with variance sigma2 * nu / (nu - 2).
``nu = math.inf`` is accepted everywhere as the dense-Gaussian sentinel: the
hyper-parameter is then degenerate at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError

NU_INF = math.inf


def variance_inflation(nu: float) -> float:
    """nu / (nu - 2), with the Gaussian limit 1 at ``nu = inf``."""
    if nu <= 2:
        raise DomainError("nu", nu, "finite noise variance needs nu > 2")
    if math.isinf(nu):
        return 1.0
    return nu / (nu - 2.0)


@dataclass(frozen=True)
class NoisePrior:
    """Student / Normal-Gamma noise law: scale ``sigma2`` and degrees of freedom ``nu``."""

    sigma2: float
    nu: float

    def __post_init__(self):
        if not (self.sigma2 > 0 and math.isfinite(self.sigma2)):
            raise DomainError("sigma2", self.sigma2, "must be positive and finite")
        if not self.nu > 0:
            raise DomainError("nu", self.nu, "must be positive")

    @property
    def is_gaussian(self) -> bool:
        return math.isinf(self.nu)

    @property
    def sigma_e2(self) -> float:
        """Marginal noise variance sigma2 * nu / (nu - 2)."""
        return self.sigma2 * variance_inflation(self.nu)

    @classmethod
    def from_noise_variance(cls, sigma_e2: float, nu: float) -> "NoisePrior":
        """Build the prior whose marginal variance equals ``sigma_e2``."""
        if not sigma_e2 > 0:
            raise DomainError("sigma_e2", sigma_e2, "must be positive")
        return cls(sigma2=sigma_e2 / variance_inflation(nu), nu=nu)

    @classmethod
    def from_snr(cls, snr: float, sigma_x2: float, nu: float) -> "NoisePrior":
        """Noise prior giving ``sigma_x2 / sigma_e2 == snr``."""
        if not snr > 0:
            raise DomainError("snr", snr, "must be positive")
        return cls.from_noise_variance(sigma_x2 / snr, nu)


@dataclass(frozen=True)
class AmplitudePrior:
    sigma_x2: float

    def __post_init__(self):
        if not (self.sigma_x2 > 0 and math.isfinite(self.sigma_x2)):
            raise DomainError("sigma_x2", self.sigma_x2, "must be positive and finite")


def sample_gamma_hyper(noise: NoisePrior, rng: np.random.Generator, size=None):
    """Draw gamma ~ Gamma(nu/2, rate=nu/2) (mean 1, variance 2/nu).

    Returns a float when ``size`` is None, otherwise an array.
    """
    if not noise.nu > 0:
        raise DomainError("nu", noise.nu, "must be positive")
    if noise.is_gaussian:
        return 1.0 if size is None else np.ones(size)
    half = 0.5 * noise.nu
    # numpy's sampler is Marsaglia-Tsang: exact, not moment matched
    draw = rng.gamma(shape=half, scale=1.0 / half, size=size)
    return float(draw) if size is None else draw


def sample_noise_conditional(noise: NoisePrior, gamma: float, n: int,
                             rng: np.random.Generator) -> np.ndarray:
    """i.i.d. N(0, sigma2 / gamma) samples of length ``n``."""
    if not gamma > 0:
        raise DomainError("gamma", gamma, "must be positive")
    if n < 1:
        raise DomainError("n", n, "must be at least 1")
    return rng.standard_normal(n) * math.sqrt(noise.sigma2 / gamma)


def sample_student_noise(noise: NoisePrior, n: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. Student's t S(0, sigma2, nu) samples via the hierarchy, one gamma per entry.

    The linear model draws a single gamma per realization instead; this
    generator exists to check the marginal law.
    """
    if n < 1:
        raise DomainError("n", n, "must be at least 1")
    gam = sample_gamma_hyper(noise, rng, size=n)
    return rng.standard_normal(n) * np.sqrt(noise.sigma2 / gam)


def student_pdf(u, mu: float, sigma2: float, nu: float):
    """Density of the non-standardized Student's t S(mu, sigma2, nu)."""
    if not sigma2 > 0:
        raise DomainError("sigma2", sigma2, "must be positive")
    if not nu > 0:
        raise DomainError("nu", nu, "must be positive")
    z2 = (np.asarray(u, dtype=float) - mu) ** 2 / sigma2
    if math.isinf(nu):
        return np.exp(-0.5 * z2) / math.sqrt(2.0 * math.pi * sigma2)
    # Gamma((nu+1)/2) / (Gamma(nu/2) sqrt(pi nu)) == 1 / (sqrt(nu) B(nu/2, 1/2));
    # betaln keeps this accurate for huge nu where gammaln differences lose digits
    log_norm = -special.betaln(0.5 * nu, 0.5) - 0.5 * math.log(nu * sigma2)
    return np.exp(log_norm - 0.5 * (nu + 1.0) * np.log1p(z2 / nu))


def student_cdf_numeric(u, mu: float, sigma2: float, nu: float, grid_step: float = 1e-3):
    """CDF of S(mu, sigma2, nu) by numerically integrating :func:`student_pdf`.

    Quadrature handles the tails beyond +-50 scale units; the core is a
    cumulative trapezoid on a fine grid, interpolated at ``u``.
    """
    scale = math.sqrt(sigma2)
    lo, hi = -50.0, 50.0
    z = (np.asarray(u, dtype=float) - mu) / scale
    pdf = lambda t: float(student_pdf(t, 0.0, 1.0, nu))  # noqa: E731
    left_tail = integrate.quad(pdf, -np.inf, lo, epsabs=1e-13)[0]
    grid = np.arange(lo, hi + grid_step / 2, grid_step)
    core = integrate.cumulative_trapezoid(student_pdf(grid, 0.0, 1.0, nu), grid, initial=0.0)
    cdf_grid = left_tail + core
    out = np.interp(z, grid, cdf_grid)
    below, above = z < lo, z > hi
    if np.any(below) or np.any(above):
        out = np.array(out, dtype=float, copy=True)
        for idx in np.flatnonzero(below | above):
            zi = z.flat[idx]
            if zi < lo:
                out.flat[idx] = integrate.quad(pdf, -np.inf, zi)[0]
            else:
                out.flat[idx] = 1.0 - integrate.quad(pdf, zi, np.inf)[0]
    return out


def inv_gamma_second_moment(nu: float) -> float:
    """E[1/gamma^2] = nu^2 / ((nu - 2)(nu - 4)) for gamma ~ Gamma(nu/2, nu/2)."""
    if not nu > 4:
        raise DomainError("nu", nu, "second moment of 1/gamma diverges for nu <= 4")
    if math.isinf(nu):
        return 1.0
    return nu * nu / ((nu - 2.0) * (nu - 4.0))


def student_excess_kurtosis(nu: float) -> float:
    if not nu > 4:
        raise DomainError("nu", nu, "kurtosis is infinite for nu <= 4")
    return 0.0 if math.isinf(nu) else 6.0 / (nu - 4.0)
