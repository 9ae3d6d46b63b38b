import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcrb_rmt.bounds_asymptotic import bcrb_asymptotic_value
from bcrb_rmt.bounds_exact import (
    bcrb_exact,
    bcrb_gamma,
    bcrb_x_eigen,
    bcrb_x_exact,
    bcrb_x_from_gram,
    bim_full,
    bim_gamma,
    bim_xx,
    effective_snr,
    trace_inverse_eig,
    trace_inverse_spd,
)
from bcrb_rmt.distributions import NU_INF, AmplitudePrior, NoisePrior, sample_gamma_hyper
from bcrb_rmt.errors import DomainError
from bcrb_rmt.linmodel import ModelDims, generate_matrix

from .oracles import j_gamma_exact

AMPL = AmplitudePrior(1.0)


def random_design(seed, n=100, k=10):
    return generate_matrix(ModelDims(n, k), "gaussian", np.random.default_rng(seed))


class TestEffectiveSnr:
    def test_r_equals_sigma_ratio(self):
        e = effective_snr(AMPL, NoisePrior(1.0, 6.0))
        assert e.snr == pytest.approx(2 / 3)
        assert e.r == pytest.approx(1.0)

    def test_unit_noise_variance(self):
        e = effective_snr(AMPL, NoisePrior.from_noise_variance(1.0, 6.0))
        assert e.snr == pytest.approx(1.0)
        assert e.r == pytest.approx(1.5)

    def test_gaussian_limit(self):
        e = effective_snr(AMPL, NoisePrior.from_noise_variance(1.0, 1e8))
        assert e.r - e.snr < 1e-7
        g = effective_snr(AMPL, NoisePrior(1.0, NU_INF))
        assert g.r == g.snr == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            effective_snr(AMPL, NoisePrior(1.0, 2.0))

    @given(st.floats(2.01, 1e4), st.floats(0.01, 100))
    def test_r_dominates_snr(self, nu, sigma2):
        e = effective_snr(AMPL, NoisePrior(sigma2, nu))
        assert e.r >= e.snr
        assert e.r / e.snr == pytest.approx(nu / (nu - 2))


class TestBimXX:
    def test_zero_design(self):
        j = bim_xx(np.zeros((20, 4)), AmplitudePrior(2.0), NoisePrior(1.0, 6.0))
        np.testing.assert_array_equal(j, 0.5 * np.eye(4))

    def test_scalar_example(self):
        noise = NoisePrior.from_noise_variance(1.0, 6.0)
        a = np.zeros((5, 1))
        a[2, 0] = 1.0
        assert bim_xx(a, AMPL, noise)[0, 0] == pytest.approx(2.5, rel=1e-14)

    def test_scalar_example_against_curvature_oracle(self):
        # finite-difference curvature of -log p(y, x | gamma) in x, averaged over gamma
        noise = NoisePrior.from_noise_variance(1.0, 6.0)
        a = np.zeros(5)
        a[2] = 1.0
        rng = np.random.default_rng(2)
        gammas = sample_gamma_hyper(noise, rng, size=200_000)
        h = 1e-3
        y = rng.standard_normal(5)

        def neg_log_joint(x, g):
            resid = y - a * x
            return g * (resid @ resid) / (2 * noise.sigma2) + x * x / (2 * AMPL.sigma_x2)

        x0 = 0.3
        curv = np.array([(neg_log_joint(x0 + h, g) - 2 * neg_log_joint(x0, g) + neg_log_joint(x0 - h, g)) / h**2
                         for g in gammas[:2000]])
        # curvature is affine in gamma, so its gamma average follows from the mean of gamma
        slope = (curv[1] - curv[0]) / (gammas[1] - gammas[0])
        offset = curv[0] - slope * gammas[0]
        assert offset + slope * gammas.mean() == pytest.approx(2.5, rel=0.01)

    def test_symmetry(self):
        j = bim_xx(random_design(3), AMPL, NoisePrior(1.0, 6.0))
        assert np.max(np.abs(j - j.T)) == 0.0
        assert np.all(np.linalg.eigvalsh(j) > 0)


class TestBimGamma:
    def test_value(self):
        assert bim_gamma(100, NoisePrior(1.0, 6.0)) == float(j_gamma_exact(100, 6)) == 234.0

    def test_prior_only(self):
        assert bim_gamma(0, NoisePrior(1.0, 6.0)) == 9.0

    @pytest.mark.parametrize("nu", [4.0, 3.0])
    def test_pole(self, nu):
        with pytest.raises(DomainError):
            bim_gamma(100, NoisePrior(1.0, nu))

    @given(st.integers(0, 10_000), st.floats(4.1, 500))
    def test_matches_rational_oracle(self, n, nu):
        assert bim_gamma(n, NoisePrior(1.0, nu)) == pytest.approx(float(j_gamma_exact(n, nu)), rel=1e-12)

    def test_bcrb_gamma(self):
        noise = NoisePrior(1.0, 6.0)
        assert bcrb_gamma(100, noise) == pytest.approx(1 / 234, rel=1e-15)
        assert bcrb_gamma(0, noise) == pytest.approx(1 / 9, rel=1e-15)
        values = [bcrb_gamma(n, noise) for n in (10, 100, 1000, 10_000)]
        assert all(b > c for b, c in zip(values, values[1:]))


class TestBcrbX:
    def test_prior_only(self):
        assert bcrb_x_exact(np.zeros((30, 3)), AmplitudePrior(2.0), NoisePrior(1.0, 6.0)) == 2.0

    def test_scalar(self):
        noise = NoisePrior.from_noise_variance(1.0, 6.0)  # r = 1.5
        a = np.zeros((4, 1))
        a[0, 0] = 1.0
        assert bcrb_x_exact(a, AMPL, noise) == pytest.approx(0.4, rel=1e-14)

    def test_non_finite(self):
        a = random_design(0)
        a[0, 0] = np.nan
        with pytest.raises(ValueError):
            bcrb_x_exact(a, AMPL, NoisePrior(1.0, 6.0))

    def test_seed_average_near_asymptotic(self):
        noise = NoisePrior.from_noise_variance(1.0, 6.0)
        children = np.random.SeedSequence(1).spawn(200)
        vals = [bcrb_x_exact(generate_matrix(ModelDims(100, 10), "gaussian", np.random.default_rng(c)), AMPL, noise)
                for c in children]
        assert abs(np.mean(vals) - 0.4146) < 0.01

    def test_monotone_in_r(self):
        gram = random_design(4).T @ random_design(4)
        values = [bcrb_x_from_gram(gram, r, 1.0) for r in np.geomspace(1e-3, 1e4, 60)]
        assert all(b > c for b, c in zip(values, values[1:]))

    @given(st.integers(0, 2**31), st.floats(2.5, 1e3), st.floats(1e-3, 1e3))
    def test_bounded_by_prior_and_eigen_identity(self, seed, nu, sigma2):
        a = random_design(seed, 40, 6)
        noise = NoisePrior(sigma2, nu)
        b = bcrb_x_exact(a, AMPL, noise)
        assert 0 < b < 1.0
        assert bcrb_x_eigen(a, AMPL, noise) == pytest.approx(b, rel=1e-10)

    def test_block_diagonal_consistency(self):
        a = random_design(5)
        noise = NoisePrior(0.7, 6.0)
        cov = np.linalg.inv(bim_full(a, AMPL, noise))
        assert np.trace(cov[:10, :10]) == pytest.approx(10 * bcrb_x_exact(a, AMPL, noise), rel=1e-12)
        assert cov[10, 10] == pytest.approx(bcrb_gamma(100, noise), rel=1e-12)
        assert np.all(cov[:10, 10] == 0)

    def test_bcrb_exact_container(self):
        a = random_design(6)
        res = bcrb_exact(a, AMPL, NoisePrior(1.0, 6.0))
        assert res.bcrb_gamma == pytest.approx(1 / 234)
        assert bcrb_exact(a, AMPL, NoisePrior(1.0, 3.0)).bcrb_gamma is None

    def test_gaussian_limit_matches_asymptotic_scale(self):
        a = random_design(7, 1000, 100)
        noise = NoisePrior(1.0, NU_INF)
        assert bcrb_x_exact(a, AMPL, noise) == pytest.approx(bcrb_asymptotic_value(1.0, 0.1), rel=0.01)


class TestTraceInverse:
    def test_fallback_on_ill_conditioned(self):
        m = np.diag([1.0, 1e-14])
        assert trace_inverse_spd(m) == pytest.approx(1 + 1e14, rel=1e-8)

    def test_not_positive_definite(self):
        with pytest.raises(np.linalg.LinAlgError):
            trace_inverse_eig(np.diag([1.0, -1.0]))

    def test_solve_vs_eig(self):
        a = random_design(8)
        m = 3.0 * a.T @ a + np.eye(10)
        assert trace_inverse_spd(m) == pytest.approx(trace_inverse_eig(m), rel=1e-12)
        assert math.isfinite(trace_inverse_spd(m))
