import cmath
import math
from fractions import Fraction as Fr

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oscperiod.errors import ZeroConstantTerm
from oscperiod.series import ExactSeries, period_series
from oscperiod.singularity import (
    c_coefficients,
    critical_rho_prediction,
    dlog_pade_scan,
    dlog_series,
    dlog_singularity_scan,
    pade,
    pade_scan,
    poly_roots,
    potential_minimum,
    radius_estimate,
    singularity_scan,
)

TWO_PI = 2 * math.pi
small = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def series_of_rational(P, Q, n):
    """Taylor coefficients of P/Q by long division (Q[0] = 1)."""
    out = []
    for k in range(n + 1):
        acc = P[k] if k < len(P) else Fr(0)
        for i in range(1, min(k, len(Q) - 1) + 1):
            acc -= Q[i] * out[k - i]
        out.append(acc)
    return out


def binomial_series(alpha, z0, n):
    """Coefficients of (1 - z/z0)^alpha."""
    out, c = [], Fr(1)
    for k in range(n + 1):
        out.append(c)
        c = c * (alpha - k) / (k + 1) * Fr(-1) / z0
    return out


class TestPade:
    def test_one_one_of_period_series(self):
        pa = pade([Fr(1), Fr(-1, 8), Fr(1, 256)], 1, 1)
        assert pa.num == (Fr(1), Fr(-3, 32))
        assert pa.den == (Fr(1), Fr(1, 32))
        assert pa.taylor(2) == [Fr(1), Fr(-1, 8), Fr(1, 256)]

    def test_geometric_series(self):
        pa = pade([1, 1, 1, 1], 0, 1)
        assert pa.num == (Fr(1),) and pa.den == (Fr(1), Fr(-1))

    def test_zero_denominator_degree_is_truncation(self):
        a = list(period_series(5).coeffs)
        pa = pade(a, 5, 0)
        assert list(pa.num) == a and pa.den == (Fr(1),)

    @pytest.mark.parametrize("N", range(2, 11))
    def test_accuracy_through_order_on_period_series(self, N):
        a = list(period_series(2 * N).coeffs)
        pa = pade(a, N, N)
        assert pa.taylor(2 * N) == a

    @given(
        st.lists(small, min_size=1, max_size=3),
        st.lists(small, min_size=1, max_size=3),
        st.integers(0, 2),
        st.integers(0, 2),
    )
    @settings(max_examples=60, deadline=None)
    def test_recovers_rational_functions(self, P, Qtail, extra_m, extra_n):
        assume(P[-1] != 0 and Qtail[-1] != 0)
        Q = [Fr(1)] + Qtail
        M, N = len(P) - 1 + extra_m, len(Q) - 1 + extra_n
        a = series_of_rational(P, Q, M + N)
        pa = pade(a, M, N)
        # compare after clearing common factors by cross multiplication
        lhs = _polymul(list(pa.num), Q)
        rhs = _polymul(P, list(pa.den))
        assert _strip(lhs) == _strip(rhs)
        assert pa.taylor(M + N) == a

    def test_exact_recovery_in_lowest_terms(self):
        P, Q = [Fr(2), Fr(-1)], [Fr(1), Fr(1, 3), Fr(1, 5)]
        a = series_of_rational(P, Q, 10)
        pa = pade(a, 3, 4)
        assert _strip(list(pa.num)) == P and _strip(list(pa.den)) == Q


def _polymul(a, b):
    out = [Fr(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _strip(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


class TestRoots:
    def test_conjugate_pair(self):
        r = poly_roots([1, 0, 1])
        assert r[0] == pytest.approx(-1j) and r[1] == pytest.approx(1j)

    def test_linear(self):
        assert poly_roots([1, Fr(1, 32)]) == [pytest.approx(-32)]

    def test_sorted_by_modulus_and_residual(self):
        coeffs = [6, -5, -2, 1]  # (z-1)(z+2)(z-3)
        roots = poly_roots(coeffs)
        assert [r.real for r in roots] == pytest.approx([1, -2, 3])
        for r in roots:
            p = sum(c * r**k for k, c in enumerate(coeffs))
            assert abs(p) <= 1e-8 * 6 * max(1, abs(r)) ** 3

    def test_trailing_zero_strip(self):
        assert len(poly_roots([2, 1, 0, 0])) == 1

    def test_period_pade_denominator(self):
        pa = pade(list(period_series(20).coeffs), 10, 10)
        nearest = poly_roots(pa.den)[0]
        assert abs(abs(nearest) - TWO_PI) < 0.2


class TestScan:
    def test_recovers_simple_pole(self):
        a = [Fr(-1, 5) ** k for k in range(9)]
        scan = pade_scan(a, 4, min_order=1)
        assert [e.location for e in scan] == [complex(-5, 0)] * 4

    def test_low_order_is_imaginary_dominant(self):
        est = singularity_scan(2).final
        assert len(singularity_scan(2)) == 1
        assert abs(est.location.imag) > 10 * abs(est.location.real)

    def test_conjugate_pairs(self):
        for e in singularity_scan(10):
            z, w = e.pair
            assert abs(z - w.conjugate()) <= 1e-10 * abs(z)

    def test_residuals_settle(self):
        res = [e.residual for e in singularity_scan(10)]
        assert res[-3] > res[-2] > res[-1]
        assert res[-1] < 0.05

    def test_converging_towards_two_pi_i(self):
        ims = [e.location.imag for e in singularity_scan(10)]
        assert all(b < a for a, b in zip(ims[2:], ims[3:]))
        assert ims[-1] > TWO_PI


class TestDlog:
    def test_one_plus_x(self):
        L = dlog_series(ExactSeries.from_list([1, 1, 0, 0, 0]))
        assert L.coeffs == (Fr(1), Fr(-1), Fr(1), Fr(-1))

    def test_exponential(self):
        e = ExactSeries.from_list([Fr(1, math.factorial(k)) for k in range(4)])
        assert dlog_series(e).coeffs == (Fr(1), Fr(0), Fr(0))

    def test_period_series_leading_term(self):
        assert dlog_series(period_series(4))[0] == Fr(-1, 8)

    def test_zero_constant(self):
        with pytest.raises(ZeroConstantTerm):
            dlog_series(ExactSeries.from_list([0, 1, 2]))

    def test_square_root_branch_point(self):
        # (1 - z/3)^(1/2): S'/S = (1/2)/(z - 3), residue = alpha
        S = ExactSeries.from_list(binomial_series(Fr(1, 2), Fr(3), 9))
        scan = dlog_pade_scan(S, 4, min_order=1)
        for e in scan:
            assert e.location == pytest.approx(3.0)
            assert e.exponent == pytest.approx(0.5)

    def test_period_scan_is_paired_and_settles(self):
        scan = dlog_singularity_scan(10)
        final = scan.final
        assert final.pair[1] == final.pair[0].conjugate()
        assert final.residual < 1e-3
        assert abs(final.location - 1j * TWO_PI) < 0.05


class TestRadius:
    def test_geometric(self):
        est = radius_estimate([Fr(1, 7**k) for k in range(12)], "ratio")
        assert all(v == pytest.approx(7.0, rel=1e-14) for _, v in est.per_order)
        assert est.extrapolated == pytest.approx(7.0, rel=1e-12)

    @pytest.mark.parametrize("R", [1.0, TWO_PI])
    @pytest.mark.parametrize("estimator", ["ratio", "two-step", "root"])
    def test_even_fixture(self, R, estimator):
        # 1/(1 + z^2/R^2); odd coefficients vanish and are bridged or skipped
        r2 = Fr(R).limit_denominator(10**12) ** 2
        a = [(-1) ** (k // 2) / r2 ** (k // 2) if k % 2 == 0 else Fr(0) for k in range(31)]
        est = radius_estimate(a, estimator)
        assert est.extrapolated == pytest.approx(R, rel=0.01)
        assert est.flagged

    def test_c_series_two_step(self):
        est = radius_estimate(c_coefficients(39).coeffs, "two-step")
        assert est.extrapolated == pytest.approx(TWO_PI, rel=0.02)

    def test_period_series_two_step(self):
        est = radius_estimate(period_series(39).coeffs, "two-step")
        assert est.extrapolated == pytest.approx(TWO_PI, rel=0.02)
        assert math.sqrt(est.extrapolated) == pytest.approx(math.sqrt(TWO_PI), rel=0.01)

    def test_needs_six_coefficients(self):
        with pytest.raises(ValueError):
            radius_estimate([1, 1, 1, 1, 1], "ratio")

    def test_positive(self):
        for name in ("ratio", "two-step", "root"):
            est = radius_estimate(period_series(20).coeffs, name)
            assert all(v > 0 for _, v in est.per_order)


class TestCritical:
    def test_prediction(self):
        assert critical_rho_prediction() == (complex(0, TWO_PI), complex(0, -TWO_PI))

    def test_potential_vanishes(self):
        assert abs(potential_minimum(2j * math.pi)) < 1e-12

    def test_potential_at_half_way(self):
        assert abs(potential_minimum(1j * math.pi)) == pytest.approx(1 / math.pi)

    def test_potential_negative_on_real_axis(self):
        for rho in (0.0, 0.5, 4.0):
            v = potential_minimum(rho)
            assert v.real < 0 if isinstance(v, complex) else v < 0
        assert cmath.isclose(potential_minimum(1.0), (1 - math.e) / 2)
