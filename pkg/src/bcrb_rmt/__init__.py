"""Bayesian Cramér-Rao bounds for a random-design linear model in Student's t noise."""

from .bounds_asymptotic import (
    AsymptoticParams,
    BcrbAsymptotic,
    bcrb_large_r,
    bcrb_small_beta,
    bcrb_small_r,
    bcrb_x_asymptotic,
    f_func,
    mp_lambda_max,
    mp_trace_inverse,
    mp_trace_inverse_sq,
)
from .bounds_exact import (
    BcrbExact,
    EffectiveSnr,
    bcrb_exact,
    bcrb_gamma,
    bcrb_x_exact,
    bim_gamma,
    bim_xx,
    effective_snr,
)
from .compare import ComparisonSpec, bcrb_gaussian_limit, bcrb_pair, map_r_common_snr
from .distributions import NU_INF, AmplitudePrior, NoisePrior
from .errors import DimensionError, DomainError, EstimationError
from .estimators import McResult, genie_mmse_estimate, lmmse_estimate, monte_carlo_mse
from .linmodel import Dataset, MatrixEnsemble, ModelDims, generate_matrix, synthesize

__version__ = "0.1.0"
