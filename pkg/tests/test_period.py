import math

import numpy as np
import pytest

from oscperiod.errors import OutOfDomain, ToleranceNotReached
from oscperiod.period import (
    F_eval,
    PeriodResult,
    asymptotic_period,
    dT_dA,
    hb_frequency,
    inv_sqrt_F,
    period_integral_u,
    period_quad,
)
from oscperiod.quadrature import gauss_legendre_adaptive
from oscperiod.series import evaluate_partial_sum, period_series

TWO_PI = 2 * math.pi

# 40-digit mpmath quadrature of the theta form (computed once, frozen)
MPMATH_PERIOD = {
    0.1: 6.275333785026456144633568,
    0.5: 6.088448909266382091479113,
    1.0: 5.527199848278131614413931,
    2.0: 3.761338829466538364489539,
    3.0: 2.348302364746459361478709,
    5.0: 1.296556881727942644260082,
}


class TestFEval:
    def test_zero(self):
        assert F_eval(0.0) == 1.0

    def test_one(self):
        assert F_eval(1.0) == pytest.approx(math.e - 1, rel=1e-15)

    def test_tiny_argument(self):
        assert F_eval(1e-12) == 1.0 + 5e-13

    def test_overflow_is_infinite(self):
        assert F_eval(1000.0) == math.inf

    def test_inv_sqrt_matches_direct(self):
        z = np.array([0.0, 1e-9, 0.3, 5.0, 50.0])
        direct = [1 / math.sqrt(F_eval(v)) for v in z]
        assert inv_sqrt_F(z) == pytest.approx(direct, rel=1e-14)

    def test_inv_sqrt_large_argument_finite(self):
        assert 0 < inv_sqrt_F(1e4) < 1e-300 or inv_sqrt_F(1e4) == 0.0


class TestPeriodQuad:
    def test_harmonic_limit(self):
        assert abs(period_quad(1e-6).period - TWO_PI) < 1e-9

    @pytest.mark.parametrize("A", sorted(MPMATH_PERIOD))
    def test_against_high_precision(self, A):
        res = period_quad(A)
        assert res.period == pytest.approx(MPMATH_PERIOD[A], abs=1e-12)
        assert res.error_estimate < 1e-12

    def test_large_amplitude_scaling(self):
        assert abs(10 * period_quad(10.0).period / TWO_PI - 1) < 0.1

    def test_result_fields(self):
        res = period_quad(2.0)
        assert res.method == "quad-theta"
        assert res.rho == 4.0 and res.amplitude == 2.0

    def test_budget_exhaustion(self):
        with pytest.raises(ToleranceNotReached):
            gauss_legendre_adaptive(lambda x: np.abs(x - 0.3) ** 0.5, 0.0, 1.0, tol=1e-30, budget=500)

    def test_rejects_nonpositive_amplitude(self):
        with pytest.raises(ValueError):
            period_quad(0.0)


class TestDualRoute:
    @pytest.mark.parametrize("A", [0.1, 0.5, 1.0, 2.0, 3.0, 5.0])
    def test_u_form_agrees(self, A):
        q = period_quad(A, tol=1e-12)
        u = period_integral_u(A, tol=1e-12)
        assert u.method == "quad-u"
        assert abs(q.period - u.period) < 2 * (1e-12 + 1e-12)

    @pytest.mark.parametrize("rho", [0.01, 0.1, 0.25, 0.5])
    def test_small_rho_series(self, rho):
        series = TWO_PI * evaluate_partial_sum(period_series(10), rho, 10)
        assert abs(period_quad(math.sqrt(rho)).period - series) < 1e-10


class TestShape:
    def test_monotone_decreasing(self):
        grid = np.arange(1, 51) * 0.1
        T = [period_quad(A).period for A in grid]
        assert all(b < a for a, b in zip(T, T[1:]))

    def test_fourth_order_bound(self):
        # series predicts |T - 2pi(1 - A^2/8)| ~ (2 pi/256) A^4; allow 10 % margin
        C = TWO_PI / 256 * 1.1
        for A in (0.05, 0.1, 0.2, 0.3):
            assert abs(period_quad(A).period - asymptotic_period(A, "small")) <= C * A**4

    @pytest.mark.parametrize("A", [0.2, 0.5])
    def test_slope_small_amplitude(self, A):
        assert dT_dA(A) == pytest.approx(-math.pi * A / 2, rel=0.05)

    @pytest.mark.parametrize("A", [1.0, 3.0])
    def test_slope_negative(self, A):
        assert dT_dA(A) < 0

    def test_slope_needs_room(self):
        with pytest.raises(ValueError):
            dT_dA(1e-5, h=1e-4)


class TestHarmonicBalance:
    def test_linear_limit(self):
        assert hb_frequency(0.0) == 1.0

    def test_unit_amplitude(self):
        assert hb_frequency(1.0) == pytest.approx(2 / math.sqrt(3), rel=1e-15)

    @pytest.mark.parametrize("A", [2.0, 2.5, 10.0])
    def test_undefined_from_two(self, A):
        with pytest.raises(OutOfDomain):
            hb_frequency(A)

    def test_increasing_and_at_least_one(self):
        grid = np.linspace(0, 1.999, 200)
        w = [hb_frequency(A) for A in grid]
        assert all(v >= 1 for v in w)
        assert all(b > a for a, b in zip(w, w[1:]))


class TestAsymptotes:
    def test_small(self):
        assert asymptotic_period(0.1, "small") == pytest.approx(TWO_PI * 0.99875, rel=1e-15)
        assert asymptotic_period(0.0, "small") == TWO_PI

    def test_large(self):
        assert asymptotic_period(10.0, "large") == pytest.approx(0.6283185307179586)

    def test_unknown_regime(self):
        with pytest.raises(ValueError):
            asymptotic_period(1.0, "medium")


def test_period_result_invariants():
    with pytest.raises(ValueError):
        PeriodResult.make(1.0, -1.0, 0.0, "quad-theta")
    with pytest.raises(ValueError):
        PeriodResult.make(1.0, 1.0, -1e-3, "quad-theta")
    r = PeriodResult.make(3.0, 2.0, 0.0, "ode")
    assert r.rho == 9.0
