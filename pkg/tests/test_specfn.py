import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from momentmono.errors import ConvergenceError, DomainError
from momentmono.specfn import (
    QuadratureConfig,
    digamma,
    gamma_oracle,
    log_gamma,
    log_gamma_shift,
    trigamma_oracle,
)

# frozen with mpmath at 30 digits
LN_GAMMA_HALF = 0.5723649429247000870717
GAMMA_THREE_HALVES = 0.8862269254527580136491
EULER = 0.5772156649015328606065
ZETA2 = 1.6449340668482264364724

positive = st.floats(min_value=1e-3, max_value=1e7, allow_nan=False)
oracle_range = st.floats(min_value=0.1, max_value=30.0)


class TestLogGamma:
    def test_exact_points(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(2.0) == 0.0
        assert log_gamma(4.0) == pytest.approx(math.log(6.0), rel=1e-15)

    def test_half(self):
        assert log_gamma(0.5) == pytest.approx(LN_GAMMA_HALF, rel=1e-14)

    def test_relative_error_against_mpmath(self):
        # libm lgamma itself drifts ~1e-12 relative next to x = 2, so use 30 digits
        xs = np.concatenate([np.geomspace(1e-3, 1e7, 2000), np.linspace(0.5, 3.0, 1001)])
        worst = 0.0
        with mpmath.workdps(30):
            for x in xs:
                ref = float(mpmath.loggamma(x))
                if ref != 0.0:
                    worst = max(worst, abs(log_gamma(x) - ref) / abs(ref))
        assert worst <= 1e-12

    def test_near_the_zeros_keeps_relative_accuracy(self):
        # lnGamma(1 + e) ~ -gamma e, lnGamma(2 + e) ~ (1 - gamma) e
        for e in (1e-6, 1e-9, -1e-9):
            assert log_gamma(1 + e) == pytest.approx(-EULER * e, rel=1e-5)
            assert log_gamma(2 + e) == pytest.approx((1 - EULER) * e, rel=1e-5)

    @given(positive)
    def test_recurrence(self, x):
        assert log_gamma(x + 1) - log_gamma(x) == pytest.approx(math.log(x), abs=1e-12 * max(1, abs(log_gamma(x))))

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            log_gamma(bad)


class TestLogGammaShift:
    @pytest.mark.parametrize("x", [0.3, 2.0, 9.5, 10.0, 150.0, 1e6])
    @pytest.mark.parametrize("d", [0.25, 1.0, 3.5])
    def test_matches_scipy(self, x, d):
        ref = special.gammaln(x + d) - special.gammaln(x) - d * math.log(x)
        assert log_gamma_shift(x, d) == pytest.approx(ref, abs=1e-12 * max(1.0, special.gammaln(x + d)))

    def test_large_argument_is_not_cancelled_away(self):
        # lnGamma(a+2) - lnGamma(a) - 2 ln a = ln(1 + 1/a) exactly
        a = 1e6
        assert log_gamma_shift(a, 2.0) == pytest.approx(math.log1p(1 / a), rel=1e-10)


class TestDigamma:
    def test_at_one(self):
        assert digamma(1.0) == pytest.approx(-EULER, abs=1e-14)

    def test_against_finite_difference_of_log_gamma(self):
        h = 1e-5
        fd = (log_gamma(1 + h) - log_gamma(1 - h)) / (2 * h)
        assert digamma(1.0) == pytest.approx(fd, abs=1e-9)
        assert fd == pytest.approx(-0.5772156649, abs=1e-9)

    def test_recurrence_example(self):
        assert digamma(2.0) == pytest.approx(digamma(1.0) + 1.0, abs=1e-14)
        assert digamma(3.0) - digamma(2.0) > 0

    def test_absolute_error_against_scipy(self):
        xs = np.geomspace(1e-3, 1e7, 3000)
        err = max(abs(digamma(x) - special.digamma(x)) for x in xs)
        assert err <= 1e-10

    def test_strictly_increasing_on_grid(self):
        vals = [digamma(x) for x in np.geomspace(1e-3, 1e7, 2000)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    @given(positive)
    def test_recurrence(self, x):
        assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, abs=1e-10, rel=1e-12)


class TestQuadratureConfig:
    def test_defaults(self):
        cfg = QuadratureConfig()
        assert (cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions) == (1e-10, 1e-10, 2000)

    @pytest.mark.parametrize(
        "kwargs", [dict(abs_tol=0.0), dict(rel_tol=-1.0), dict(max_subdivisions=0)]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureConfig(**kwargs)


class TestGammaOracle:
    def test_examples(self):
        assert gamma_oracle(1.0) == pytest.approx(1.0, abs=1e-10)
        assert gamma_oracle(5.0) == pytest.approx(24.0, rel=1e-8)
        assert gamma_oracle(1.5) == pytest.approx(GAMMA_THREE_HALVES, rel=1e-10)
        assert gamma_oracle(1.5) == pytest.approx(math.exp(log_gamma(1.5)), rel=1e-10)

    def test_grid_against_log_gamma(self):
        for x in np.linspace(0.1, 30, 100):
            assert abs(gamma_oracle(x) - math.exp(log_gamma(x))) / math.exp(log_gamma(x)) <= 1e-8

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            gamma_oracle(31.0)
        with pytest.raises(DomainError):
            gamma_oracle(0.05)

    def test_starved_budget_raises(self):
        with pytest.raises(ConvergenceError):
            gamma_oracle(0.13, QuadratureConfig(max_subdivisions=1, abs_tol=1e-15, rel_tol=1e-15))


class TestTrigammaOracle:
    def test_at_one_matches_finite_difference_of_digamma(self):
        h = 1e-4
        fd = (digamma(1 + h) - digamma(1 - h)) / (2 * h)
        assert trigamma_oracle(1.0) == pytest.approx(fd, abs=1e-6)
        assert trigamma_oracle(1.0) == pytest.approx(ZETA2, abs=1e-10)

    def test_recurrence_example(self):
        assert trigamma_oracle(2.0) == pytest.approx(trigamma_oracle(1.0) - 1.0, abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(oracle_range)
    def test_positive_and_consistent(self, x):
        v = trigamma_oracle(x)
        assert v > 0
        h = 1e-4 * x
        fd = (digamma(x + h) - digamma(x - h)) / (2 * h)
        assert v == pytest.approx(fd, abs=1e-6, rel=1e-7)
