"""Cross-oracle acceptance checks, shared by ``oscperiod verify`` and the tests.

Each check returns a :class:`CheckResult`; none of them raise on a numerical
mismatch, so a single run reports every criterion.
"""

from __future__ import annotations

import math
import traceback
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ode, period, series, singularity
from .errors import OutOfDomain

TWO_PI = 2.0 * math.pi
TRIPLE_ORACLE_AMPLITUDES = (0.1, 0.5, 1.0, 2.0, 3.0, 5.0)


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    detail: str
    values: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} [{self.id:2d}] {self.name}: {self.detail}"

    def as_dict(self):
        return {
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "values": self.values,
        }


def _fr(values):
    return [Fraction(v) for v in values]


def check_series_exactness() -> CheckResult:
    got = list(series.inv_sqrt_series(series.taylor_F(3), 3).coeffs)
    want = _fr(["1", "-1/4", "1/96", "1/384"])
    return CheckResult(
        1, "series 1/sqrt(F) coefficients", got == want,
        f"got {[str(c) for c in got]}, want {[str(c) for c in want]}",
    )


def check_period_series() -> CheckResult:
    got = list(series.period_series(2).coeffs)
    want = _fr(["1", "-1/8", "1/256"])
    return CheckResult(
        2, "series T/(2pi) in rho", got == want,
        f"got {[str(c) for c in got]}, want {[str(c) for c in want]}",
    )


def check_inverted_series() -> CheckResult:
    got = list(series.inverted_period_series(3).coeffs)
    want = _fr(["0", "-4", "1/2", "-13/24"])
    return CheckResult(
        3, "series inverted rho(tau)", got == want,
        f"got {[str(c) for c in got]}, want {[str(c) for c in want]}",
    )


def check_triple_oracle() -> CheckResult:
    rows = {}
    worst = 0.0
    for A in TRIPLE_ORACLE_AMPLITUDES:
        q = period.period_quad(A).period
        u = period.period_integral_u(A).period
        o = ode.ode_period(A).period
        rows[A] = {"quad": q, "quad_u": u, "ode": o}
        worst = max(worst, abs(q - u), abs(q - o))
    return CheckResult(
        4, "triple-oracle period agreement", worst < 1e-8,
        f"max deviation {worst:.3e} (tol 1e-8)", {"periods": rows, "max_dev": worst},
    )


def check_harmonic_limit() -> CheckResult:
    t0 = period.period_quad(1e-6).period
    ok = abs(t0 - TWO_PI) < 1e-9
    ratios = {}
    for A in (0.05, 0.1, 0.2):
        dev = abs(period.period_quad(A).period - period.asymptotic_period(A, "small"))
        ratios[A] = dev / A**4
        ok = ok and dev < 0.5 * A**4
    return CheckResult(
        5, "harmonic limit and small-A asymptote", ok,
        f"|T(1e-6)-2pi|={abs(t0 - TWO_PI):.2e}; max |dT|/A^4={max(ratios.values()):.4f} (< 0.5)",
        {"dev_over_A4": ratios},
    )


def check_large_amplitude() -> CheckResult:
    devs = [abs(A * period.period_quad(A).period / TWO_PI - 1.0) for A in (5.0, 10.0, 20.0)]
    ok = devs[0] > devs[1] > devs[2] and devs[2] < 0.1
    return CheckResult(
        6, "large-A asymptote 2pi/A", ok,
        "|A T/(2pi) - 1| at A=5,10,20: " + ", ".join(f"{d:.4e}" for d in devs),
        {"deviations": devs},
    )


def check_monotonicity() -> CheckResult:
    grid = np.round(np.arange(1, 51) * 0.1, 10)
    slopes = [period.dT_dA(float(A)) for A in grid]
    worst = max(slopes)
    return CheckResult(
        7, "dT/dA < 0 on 0.1..5.0", worst < 0,
        f"largest dT/dA on grid {worst:.4e}", {"max_slope": worst},
    )


def check_conservation() -> CheckResult:
    drifts = {}
    for A in (0.1, 1.0, 3.0, 5.0):
        traj = ode.integrate(A, tol=1e-11, t_max=3 * TWO_PI + 0.1, stop_after_maxima=3)
        drifts[A] = ode.invariant_drift(traj)
    worst = max(drifts.values())
    return CheckResult(
        8, "conserved ln(1+y^2)+x^2 over 3 periods", worst < 1e-9,
        f"max drift {worst:.3e} (tol 1e-9)", {"drift": drifts},
    )


def check_pade_singularity() -> CheckResult:
    scan = singularity.singularity_scan(10)
    est = scan.final
    im_dev = abs(abs(est.location.imag) - TWO_PI)
    pair_ok = len(est.pair) == 2 and est.pair[1] == est.pair[0].conjugate()
    re_ok = abs(est.location.real) <= est.residual
    ok = im_dev < 0.1 and re_ok and pair_ok
    return CheckResult(
        9, "[10/10] Pade denominator zero pair near +-2pi i", ok,
        f"rho = {est.location.real:.5f} +- {est.location.imag:.5f}i, "
        f"||Im|-2pi| = {im_dev:.4f} (tol 0.1), |Re| <= residual {est.residual:.4f}: {re_ok}",
        {"location": [est.location.real, est.location.imag], "residual": est.residual},
    )


def _dlog_final():
    return singularity.dlog_singularity_scan(10).final


def check_dlog_singularity() -> CheckResult:
    est = _dlog_final()
    dist = abs(est.location - complex(0, TWO_PI))
    return CheckResult(
        10, "[10/10] d-log Pade pole pair near +-2pi i", dist < 1e-2,
        f"pole {est.location.real:.5f} +- {est.location.imag:.5f}i, distance {dist:.4e} "
        f"(tol 1e-2), residue {est.exponent:.4f}",
        {"location": [est.location.real, est.location.imag], "distance": dist,
         "exponent": est.exponent},
    )


def check_radius() -> CheckResult:
    c = singularity.radius_estimate(singularity.c_coefficients(39).coeffs, "two-step")
    a = singularity.radius_estimate(series.period_series(39).coeffs, "two-step")
    dev_c = abs(c.extrapolated / TWO_PI - 1)
    dev_a = abs(a.extrapolated / TWO_PI - 1)
    r_a = math.sqrt(a.extrapolated)
    dev_ra = abs(r_a / math.sqrt(TWO_PI) - 1)
    ok = dev_c < 0.02 and dev_a < 0.02 and dev_ra < 0.01
    return CheckResult(
        11, "radius of convergence 2pi (two-step)", ok,
        f"R(c)={c.extrapolated:.5f} ({dev_c:.2%}), R(T)={a.extrapolated:.5f} ({dev_a:.2%}), "
        f"R_A={r_a:.5f} ({dev_ra:.2%}); tail medians {c.tail_median:.4f}, {a.tail_median:.4f}",
        {"R_c": c.extrapolated, "R_T": a.extrapolated, "R_A": r_a},
    )


def check_divergence() -> CheckResult:
    rho = 8.0
    exact = period.period_quad(math.sqrt(rho)).period
    S = series.period_series(30)
    err10 = abs(TWO_PI * series.evaluate_partial_sum(S, rho, 10) - exact)
    err30 = abs(TWO_PI * series.evaluate_partial_sum(S, rho, 30) - exact)
    return CheckResult(
        12, "partial sums diverge at rho = 8", err30 > 10 * err10,
        f"error N=10: {err10:.3e}, N=30: {err30:.3e}, ratio {err30 / err10:.1f} (> 10)",
        {"err10": err10, "err30": err30},
    )


def inverse_period(T: float, a_max: float = 3.0) -> float:
    """Amplitude with period_quad(A) = T, for T in [T(a_max), 2 pi]."""
    from scipy.optimize import brentq

    if T >= TWO_PI:
        return 0.0
    f = lambda A: period.period_quad(A).period - T  # noqa: E731
    hi = a_max
    if f(hi) > 0:
        raise OutOfDomain(f"period {T} is below T({a_max}); cannot bracket")
    return brentq(f, 1e-12, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def ipt_rows(orders=(1, 2, 3, 4, 5, 6), points: int = 50, a_max: float = 3.0):
    """Rows (T, A_exact, [rho_N for N in orders]) on an even grid T(a_max)..2pi."""
    t_min = period.period_quad(a_max).period
    inv = series.inverted_period_series(max(orders))
    rows = []
    for T in np.linspace(t_min, TWO_PI, points):
        T = float(T)
        A_exact = a_max if T == t_min else inverse_period(T, a_max)
        tau = (T - TWO_PI) / math.pi
        rhos = [series.evaluate_partial_sum(inv, tau, N) for N in orders]
        rows.append((T, A_exact, rhos))
    return rows


def check_from_below() -> CheckResult:
    orders = (1, 2, 3, 4, 5, 6)
    rows = ipt_rows(orders)
    ok = True
    worst_gap = -math.inf
    for T, A_exact, rhos in rows:
        rho_exact = A_exact**2
        if any(b < a for a, b in zip(rhos, rhos[1:])):
            ok = False
        gap = max(r - rho_exact for r in rhos)
        worst_gap = max(worst_gap, gap)
        if gap > 1e-10:
            ok = False
    return CheckResult(
        13, "inverted partial sums increase towards rho from below", ok,
        f"{len(rows)} grid points, max(rho_N - rho_exact) = {worst_gap:.3e} (<= 1e-10)",
        {"max_excess": worst_gap},
    )


def check_critical_rho() -> CheckResult:
    pred = singularity.critical_rho_prediction()
    exact = pred == (complex(0, TWO_PI), complex(0, -TWO_PI))
    est = _dlog_final()
    dist = max(abs(p - q) for p, q in zip(pred, est.pair))
    return CheckResult(
        14, "V(0)=0 prediction matches d-log estimate", exact and dist < 1e-2,
        f"prediction +-{pred[0].imag:.6f}i; distance to d-log pair {dist:.4e} (tol 1e-2)",
        {"distance": dist},
    )


def check_harmonic_balance() -> CheckResult:
    raised = []
    for A in (2.0, 2.0 + 1e-12, 3.0):
        try:
            period.hb_frequency(A)
            raised.append(False)
        except OutOfDomain:
            raised.append(True)
    below_ok = True
    try:
        period.hb_frequency(2.0 - 1e-9)
    except OutOfDomain:
        below_ok = False
    rel = {}
    for A in (0.1, 0.3, 0.5):
        rel[A] = abs(period.hb_period(A) / period.period_quad(A).period - 1)
    ok = all(raised) and below_ok and max(rel.values()) < 0.01
    return CheckResult(
        15, "harmonic balance domain and small-A accuracy", ok,
        f"errors at A>=2: {all(raised)}, defined below 2: {below_ok}, "
        f"max rel. deviation {max(rel.values()):.2e} (< 1%)",
        {"rel_dev": rel},
    )


CHECKS = (
    check_series_exactness,
    check_period_series,
    check_inverted_series,
    check_triple_oracle,
    check_harmonic_limit,
    check_large_amplitude,
    check_monotonicity,
    check_conservation,
    check_pade_singularity,
    check_dlog_singularity,
    check_radius,
    check_divergence,
    check_from_below,
    check_critical_rho,
    check_harmonic_balance,
)


def run_all() -> list[CheckResult]:
    results = []
    for i, check in enumerate(CHECKS, start=1):
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failed check
            results.append(CheckResult(i, check.__name__, False, f"raised {exc!r}",
                                       {"traceback": traceback.format_exc()}))
    return results
