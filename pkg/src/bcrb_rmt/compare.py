"""Comparing two Student noise models at a common target SNR.

With SNR_0 = SNR_1, the effective parameters are tied by
r1 = nu1 (nu0 - 2) / (nu0 (nu1 - 2)) * r0.  ``nu1 = math.inf`` is the exact
dense-Gaussian model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds_asymptotic import _check_beta, bcrb_asymptotic_value, f_func
from .distributions import NU_INF, variance_inflation
from .errors import DomainError


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


@dataclass(frozen=True)
class ComparisonSpec:
    nu0: float = 6.0
    nu1: float = 100.0
    beta: float = 0.1
    sigma_x2: float = 1.0
    snr_grid: tuple = field(default_factory=lambda: tuple(db_to_linear(np.arange(-10.0, 30.25, 0.5))))
    with_gaussian_limit: bool = True

    def __post_init__(self):
        variance_inflation(self.nu0)
        variance_inflation(self.nu1)
        _check_beta(self.beta)
        if not self.sigma_x2 > 0:
            raise DomainError("sigma_x2", self.sigma_x2, "must be positive")
        grid = tuple(float(s) for s in self.snr_grid)
        if not grid:
            raise DomainError("snr_grid", grid, "must be non-empty")
        if any(s <= 0 for s in grid) or list(grid) != sorted(grid):
            raise DomainError("snr_grid", grid, "must be positive and sorted")
        object.__setattr__(self, "snr_grid", grid)


@dataclass(frozen=True)
class ComparisonRow:
    snr: float
    r0: float
    r1: float
    bcrb0: float
    bcrb1: float
    bcrb1_gaussian_limit: float | None


@dataclass(frozen=True)
class ComparisonResult:
    spec: ComparisonSpec
    rows: tuple


def map_r_common_snr(r0: float, nu0: float, nu1: float) -> float:
    """r1 such that both models share the same sigma_x2 / sigma_e2."""
    variance_inflation(nu0)
    infl1 = variance_inflation(nu1)
    if math.isinf(nu1) and math.isinf(nu0):
        return r0
    if math.isinf(nu1):
        return r0 * (nu0 - 2.0) / nu0
    if math.isinf(nu0):
        return r0 * infl1
    return r0 * ((nu1 * (nu0 - 2.0)) / (nu0 * (nu1 - 2.0)))


def bcrb_gaussian_limit(r0: float, nu0: float, beta: float, sigma_x2: float = 1.0) -> float:
    """Model-1 bound in the nu1 -> inf limit, as a function of model-0's r0."""
    shrink = 1.0 / variance_inflation(nu0)  # (nu0 - 2) / nu0
    _check_beta(beta)
    if not r0 >= 0:
        raise DomainError("r0", r0, "must be non-negative")
    if r0 == 0:
        return sigma_x2
    return sigma_x2 * (1.0 - f_func(shrink * r0, beta) / (4.0 * shrink * r0 * beta))


def bcrb_pair(spec: ComparisonSpec) -> ComparisonResult:
    rows = []
    infl0 = variance_inflation(spec.nu0)
    for snr in spec.snr_grid:
        r0 = snr * infl0
        r1 = map_r_common_snr(r0, spec.nu0, spec.nu1)
        b0 = bcrb_asymptotic_value(r0, spec.beta, spec.sigma_x2)
        limit = bcrb_gaussian_limit(r0, spec.nu0, spec.beta, spec.sigma_x2)
        if spec.nu1 == NU_INF:
            b1 = limit
        else:
            b1 = bcrb_asymptotic_value(r1, spec.beta, spec.sigma_x2)
        rows.append(ComparisonRow(snr=snr, r0=r0, r1=r1, bcrb0=b0, bcrb1=b1,
                                  bcrb1_gaussian_limit=limit if spec.with_gaussian_limit else None))
    return ComparisonResult(spec=spec, rows=tuple(rows))
