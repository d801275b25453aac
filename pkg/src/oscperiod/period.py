"""Floating-point period of x'' + (1 + x'^2) x = 0 with x(0) = A, x'(0) = 0."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomain
from .quadrature import gauss_legendre_adaptive, tanh_sinh

DEFAULT_TOL = 1e-12
METHODS = ("quad-theta", "quad-u", "ode", "series", "hb", "asymptotic-small", "asymptotic-large")


@dataclass(frozen=True)
class PeriodResult:
    amplitude: float
    rho: float
    period: float
    error_estimate: float
    method: str

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")
        if not self.error_estimate >= 0:
            raise ValueError("error estimate must be non-negative")
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")

    @classmethod
    def make(cls, amplitude, period, error_estimate, method):
        return cls(float(amplitude), float(amplitude) ** 2, float(period), float(error_estimate), method)

    def as_dict(self):
        return {
            "amplitude": self.amplitude,
            "rho": self.rho,
            "period": self.period,
            "error_estimate": self.error_estimate,
            "method": self.method,
        }


def F_eval(z: float) -> float:
    """(e^z - 1)/z, with the removable singularity at 0 filled in."""
    if abs(z) < 1e-8:
        return 1.0 + z / 2.0 + z * z / 6.0
    try:
        return math.expm1(z) / z
    except OverflowError:
        return math.inf


def inv_sqrt_F(z):
    """Vectorized 1/sqrt(F(z)) for z >= 0, safe against overflow at large z."""
    z = np.asarray(z, dtype=float)
    small = z < 1e-8
    zs = np.where(small, 1.0, z)
    big = np.exp(-0.5 * zs) * np.sqrt(zs / -np.expm1(-zs))
    tiny = 1.0 / np.sqrt(1.0 + z / 2.0 + z * z / 6.0)
    return np.where(small, tiny, big)


def _check_amplitude(A):
    if not (A > 0 and math.isfinite(A)):
        raise ValueError(f"amplitude must be positive and finite, got {A}")


def period_quad(A: float, tol: float = DEFAULT_TOL) -> PeriodResult:
    """Period from the theta form: T = 4 * int_0^{pi/2} dtheta / sqrt(F(rho sin^2 theta))."""
    _check_amplitude(A)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    rho = A * A

    def integrand(theta):
        return inv_sqrt_F(rho * np.sin(theta) ** 2)

    value, err, _ = gauss_legendre_adaptive(integrand, 0.0, 0.5 * math.pi, tol=tol / 4)
    return PeriodResult.make(A, 4.0 * value, 4.0 * err, "quad-theta")


def period_integral_u(A: float, tol: float = DEFAULT_TOL) -> PeriodResult:
    """Period from T = 4A * int_0^1 du / sqrt(exp(A^2 (1 - u^2)) - 1).

    The 1/sqrt(1-u) singularity at u = 1 is left in place and handled by
    tanh-sinh quadrature; 1 - u is carried separately to keep it exact.
    """
    _check_amplitude(A)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    rho = A * A

    def integrand(u, one_minus_u):
        x = rho * one_minus_u * (1.0 + u)
        # 1/sqrt(e^x - 1) written to survive both x -> 0 and x large
        return np.exp(-0.5 * x) / np.sqrt(-np.expm1(-x))

    value, err, _ = tanh_sinh(integrand, tol=tol / (4 * A))
    return PeriodResult.make(A, 4.0 * A * value, 4.0 * A * err, "quad-u")


def hb_frequency(A: float) -> float:
    """First-order harmonic-balance frequency 2/sqrt(4 - A^2); undefined for A >= 2."""
    if A < 0:
        raise OutOfDomain(f"amplitude must be non-negative, got {A}")
    if A >= 2:
        raise OutOfDomain(
            f"harmonic-balance frequency 2/sqrt(4 - A^2) is singular at A = 2 "
            f"and undefined beyond it (A = {A})"
        )
    return 2.0 / math.sqrt(4.0 - A * A)


def hb_period(A: float) -> float:
    return 2.0 * math.pi / hb_frequency(A)


def asymptotic_period(A: float, regime: str) -> float:
    """Leading small-A (2 pi (1 - A^2/8)) or large-A (2 pi / A) behaviour."""
    if regime == "small":
        return 2.0 * math.pi * (1.0 - A * A / 8.0)
    if regime == "large":
        if not A > 0:
            raise ValueError("large-amplitude asymptote needs A > 0")
        return 2.0 * math.pi / A
    raise ValueError(f"regime must be 'small' or 'large', got {regime!r}")


def dT_dA(A: float, h: float | None = None) -> float:
    """Central difference of period_quad at tolerance 1e-12."""
    if h is None:
        h = 1e-4 * max(1.0, A)
    if not (A > h > 0):
        raise ValueError(f"need A > h > 0 (A={A}, h={h})")
    upper = period_quad(A + h, tol=1e-12).period
    lower = period_quad(A - h, tol=1e-12).period
    return (upper - lower) / (2.0 * h)
