import math

import numpy as np
import pytest
from scipy import stats

from bcrb_rmt.validation import Check, ks_critical_1pct, ks_distance, report_passed, run_suite


@pytest.mark.parametrize("mode,value,expected", [
    ("abs", 1.05, True), ("abs", 1.2, False),
    ("rel", 1.09, True), ("rel", 0.8, False),
    ("max", 1.1, True), ("max", 1.2, False),
    ("min", 0.9, True), ("min", 0.8, False),
])
def test_check_modes(mode, value, expected):
    assert Check("c", value, 1.0, 0.1, mode).passed is expected


def test_check_rejects_nan_and_unknown_mode():
    assert not Check("c", math.nan, 0.0, 1.0).passed
    with pytest.raises(ValueError):
        Check("c", 0.0, 0.0, 1.0, "bogus").passed


def test_ks_matches_scipy(rng):
    x = np.sort(rng.standard_normal(500))
    ours = ks_distance(x, stats.norm.cdf(x))
    assert ours == pytest.approx(stats.kstest(x, "norm").statistic, abs=1e-15)


def test_ks_critical_value():
    assert ks_critical_1pct(10_000) == pytest.approx(1.6276 / 100, rel=1e-3)


def test_run_suite_spectral():
    report = run_suite("spectral", seed=1)
    assert report["suite"] == "spectral" and report["seed"] == 1
    assert report_passed(report)


def test_tol_scale_zero_fails():
    assert not report_passed(run_suite("spectral", seed=1, tol_scale=0.0))


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
