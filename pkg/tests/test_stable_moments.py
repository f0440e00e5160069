"""Fractional moments, power-law tails, and truncated Cauchy moments,
each checked against an independent quadrature oracle."""

import math

import numpy as np
import pytest
from scipy import integrate

from stableinfer import (
    StableParams,
    cauchy_cdf,
    cauchy_pdf,
    fractional_moment,
    tail_asymptote,
    truncated_cauchy_moments,
    validate_params,
)


class TestFractionalMoment:
    def test_cauchy_first_moment_infinite(self):
        assert fractional_moment(StableParams.cauchy(0, 1), 1.0).is_infinite

    def test_order_above_alpha_infinite(self):
        assert fractional_moment(validate_params(1.5, 0.2, 1.0, 0.0), 1.7).is_infinite

    def test_cauchy_half_moment_against_quadrature(self):
        out = fractional_moment(StableParams.cauchy(0, 1), 0.5)
        oracle, _ = integrate.quad(
            lambda u: math.sqrt(abs(u)) * cauchy_pdf(0, 1, u), -np.inf, np.inf,
        )
        assert out.is_finite
        assert out.value == pytest.approx(oracle, rel=1e-6)
        assert out.value == pytest.approx(math.sqrt(2.0), rel=1e-6)

    @pytest.mark.parametrize("alpha,beta,p", [(1.0, 0.0, 0.5), (1.5, 0.3, 0.75)])
    def test_scale_law(self, alpha, beta, p):
        # E|gamma u|^p = gamma^p E|u|^p: homogeneity of order p
        v1 = fractional_moment(validate_params(alpha, beta, 1.0, 0.0), p).value
        v2 = fractional_moment(validate_params(alpha, beta, 2.0, 0.0), p).value
        assert v2 / v1 == pytest.approx(2.0 ** p, rel=1e-3)

    def test_gaussian_all_orders_finite(self):
        p = StableParams.normal(0.0, 1.0)
        second = fractional_moment(p, 2.0)
        assert second.is_finite
        assert second.value == pytest.approx(1.0, rel=1e-8)
        fourth = fractional_moment(p, 4.0)
        assert fourth.value == pytest.approx(3.0, rel=1e-8)

    def test_point_mass(self):
        out = fractional_moment(validate_params(1.0, 0.0, 0.0, -2.0), 0.5)
        assert out.value == pytest.approx(math.sqrt(2.0))

    def test_shifted_cauchy_against_quadrature(self):
        out = fractional_moment(StableParams.cauchy(1.5, 1.0), 0.5)
        oracle, _ = integrate.quad(
            lambda u: math.sqrt(abs(u)) * cauchy_pdf(1.5, 1.0, u), -np.inf, np.inf,
        )
        assert out.value == pytest.approx(oracle, rel=1e-6)


class TestTailAsymptote:
    def test_power_law_doubling_ratio_exact(self):
        p = validate_params(1.5, 0.3, 2.0, 0.0)
        a = tail_asymptote(p, 40.0)
        b = tail_asymptote(p, 80.0)
        assert b.survival / a.survival == pytest.approx(2.0 ** -1.5, rel=1e-13)

    def test_pdf_to_survival_ratio_exact(self):
        p = validate_params(0.8, 0.0, 1.0, 0.0)
        x = 60.0
        t = tail_asymptote(p, x)
        assert t.pdf / t.survival == pytest.approx(p.alpha / x, rel=1e-13)

    def test_cauchy_survival_within_two_percent(self):
        t = tail_asymptote(StableParams.cauchy(0, 1), 50.0)
        exact = 1.0 - cauchy_cdf(0, 1, 50.0)
        assert abs(t.survival / exact - 1.0) < 0.02

    def test_skewness_reweights_tail(self):
        sym = tail_asymptote(validate_params(1.5, 0.0, 1.0, 0.0), 50.0)
        skew = tail_asymptote(validate_params(1.5, 0.5, 1.0, 0.0), 50.0)
        assert skew.survival / sym.survival == pytest.approx(1.5, rel=1e-12)

    def test_gaussian_rejected(self):
        with pytest.raises(Exception):
            tail_asymptote(StableParams.normal(0, 1), 10.0)


def _oracle_truncated(gamma, cut):
    tail, _ = integrate.quad(lambda u: cauchy_pdf(0, gamma, u), cut, np.inf)
    m1, _ = integrate.quad(lambda u: abs(u) * cauchy_pdf(0, gamma, u), -cut, cut,
                           points=[0.0], epsabs=1e-13, limit=200)
    m2, _ = integrate.quad(lambda u: u * u * cauchy_pdf(0, gamma, u), -cut, cut,
                           points=[0.0], epsabs=1e-13, limit=200)
    return 2.0 * tail, m1, m2


class TestTruncatedCauchyMoments:
    def test_unit_case_closed_values(self):
        p, m1, m2 = truncated_cauchy_moments(1.0, 1.0)
        assert p == pytest.approx(0.5, abs=1e-15)
        assert m1 == pytest.approx(math.log(2.0) / math.pi, abs=1e-15)
        assert m2 == pytest.approx(2.0 / math.pi - 0.5, abs=1e-15)

    def test_second_moment_respects_probability_bound(self):
        # E[u^2; |u| < A] can never exceed A^2 P[|u| < A]
        for gamma in (0.1, 1.0, 3.0):
            for cut in (0.5, 1.0, 8.0):
                p, _, m2 = truncated_cauchy_moments(gamma, cut)
                assert m2 <= cut * cut * (1.0 - p) + 1e-15

    def test_vanishing_width_gives_zero(self):
        assert truncated_cauchy_moments(0.0, 2.0) == (0.0, 0.0, 0.0)

    def test_against_quadrature_oracle(self):
        p, m1, m2 = truncated_cauchy_moments(0.3, 2.0)
        op, om1, om2 = _oracle_truncated(0.3, 2.0)
        assert p == pytest.approx(op, abs=1e-10)
        assert m1 == pytest.approx(om1, abs=1e-10)
        assert m2 == pytest.approx(om2, abs=1e-10)
