"""Exact truncated power series for the small-amplitude period expansion.

Coefficients are :class:`fractions.Fraction` throughout, so every identity
in here (the inverse square root, the reversion round trip, the Wallis
factors) holds with exact equality rather than to a tolerance.

All factors of pi are kept out of the stored coefficients:

* the period series in ``rho = A**2`` is stored as ``T / (2*pi)``;
* the inverted series is stored in ``tau = (T - 2*pi) / pi``, so the
  coefficient of ``DeltaT**k`` is ``q_k / pi**k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    NonUnitConstantTerm,
    NonzeroConstant,
    TruncationTooHigh,
    VariableMismatch,
    ZeroLinearTerm,
)

Rational = Fraction

DEFAULT_ORDER = 40

VARIABLES = ("z", "rho", "tau")


@dataclass(frozen=True)
class ExactSeries:
    """Power series truncated at ``order`` with rational coefficients.

    ``coeffs[j]`` multiplies ``variable**j``; ``len(coeffs) == order + 1``.
    """

    variable: str
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"unknown series variable {self.variable!r}")
        if not self.coeffs:
            raise ValueError("a series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_list(cls, coeffs: Iterable, variable: str = "z") -> "ExactSeries":
        return cls(variable, tuple(Fraction(c) for c in coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, j):
        return self.coeffs[j]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, n: int) -> "ExactSeries":
        if n > self.order:
            raise TruncationTooHigh(f"cannot truncate order {self.order} series at {n}")
        return ExactSeries(self.variable, self.coeffs[: n + 1])

    def __add__(self, other: "ExactSeries") -> "ExactSeries":
        _check_same_variable(self, other)
        n = min(self.order, other.order)
        return ExactSeries(self.variable, tuple(self[j] + other[j] for j in range(n + 1)))

    def __sub__(self, other: "ExactSeries") -> "ExactSeries":
        _check_same_variable(self, other)
        n = min(self.order, other.order)
        return ExactSeries(self.variable, tuple(self[j] - other[j] for j in range(n + 1)))

    def __mul__(self, other):
        if isinstance(other, ExactSeries):
            return multiply(self, other)
        return ExactSeries(self.variable, tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]


@dataclass(frozen=True)
class PiScaledRational:
    """The exact real number ``rational * pi**pi_power``."""

    rational: Fraction
    pi_power: int

    def __float__(self):
        return float(self.rational) * math.pi**self.pi_power

    def __truediv__(self, other: "PiScaledRational") -> "PiScaledRational":
        return PiScaledRational(self.rational / other.rational, self.pi_power - other.pi_power)

    def __mul__(self, other: "PiScaledRational") -> "PiScaledRational":
        return PiScaledRational(self.rational * other.rational, self.pi_power + other.pi_power)


def _check_same_variable(a: ExactSeries, b: ExactSeries):
    if a.variable != b.variable:
        raise VariableMismatch(f"cannot combine series in {a.variable!r} and {b.variable!r}")


def _cauchy(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    return [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)]


def multiply(a: ExactSeries, b: ExactSeries) -> ExactSeries:
    """Cauchy product, truncated at the smaller of the two orders."""
    _check_same_variable(a, b)
    n = min(a.order, b.order)
    return ExactSeries(a.variable, tuple(_cauchy(a.coeffs, b.coeffs, n)))


def reciprocal(s: ExactSeries) -> ExactSeries:
    """Series of ``1/s``; requires a nonzero constant term."""
    if s[0] == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    inv0 = 1 / s[0]
    out = [inv0]
    for k in range(1, s.order + 1):
        acc = sum((s[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
        out.append(-acc * inv0)
    return ExactSeries(s.variable, tuple(out))


def compose(outer: ExactSeries, inner: ExactSeries) -> ExactSeries:
    """``outer(inner(x))`` for ``inner`` without constant term.

    The result carries the variable of ``inner`` and the smaller order.
    """
    if inner[0] != 0:
        raise NonzeroConstant("inner series of a composition must vanish at 0")
    n = min(outer.order, inner.order)
    # Horner in series arithmetic
    acc = [Fraction(0)] * (n + 1)
    acc[0] = outer[n]
    for j in range(n - 1, -1, -1):
        acc = _cauchy(acc, inner.coeffs, n)
        acc[0] += outer[j]
    return ExactSeries(inner.variable, tuple(acc))


def taylor_F(n: int) -> ExactSeries:
    """Taylor series of ``F(z) = (exp(z) - 1)/z``: coefficient ``1/(j+1)!``."""
    if n < 0:
        raise ValueError("order must be non-negative")
    return ExactSeries("z", tuple(Fraction(1, math.factorial(j + 1)) for j in range(n + 1)))


def inv_sqrt_series(G: ExactSeries, n: int | None = None) -> ExactSeries:
    """Solve ``H**2 * G = 1`` for ``H`` term by term.

    ``G`` must have constant term exactly 1; then ``H[0] = 1`` and each new
    coefficient enters linearly.  Internally ``Q = H**2 = 1/G`` is built
    alongside ``H``.
    """
    if n is None:
        n = G.order
    if n > G.order:
        raise TruncationTooHigh(f"requested order {n} exceeds input order {G.order}")
    if G[0] != 1:
        raise NonUnitConstantTerm(f"constant term is {G[0]}, expected 1")
    q = [Fraction(1)] + [Fraction(0)] * n
    h = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        q[k] = -sum((q[k - l] * G[l] for l in range(1, k + 1)), Fraction(0))
        cross = sum((h[i] * h[k - i] for i in range(1, k)), Fraction(0))
        h[k] = (q[k] - cross) / 2
    return ExactSeries(G.variable, tuple(h))


def wallis_integral(j: int) -> PiScaledRational:
    """Integral of ``sin(theta)**(2j)`` over a quarter period, as a multiple of pi."""
    if j < 0:
        raise ValueError("index must be non-negative")
    return PiScaledRational(Fraction(math.comb(2 * j, j), 2 * 4**j), 1)


def period_series(n: int = DEFAULT_ORDER) -> ExactSeries:
    """Small-amplitude series of ``T(rho) / (2*pi)`` to order ``n``.

    ``a_j = 2 * c_j * I_j / pi`` where ``c_j`` are the coefficients of
    ``1/sqrt(F)`` and ``I_j`` the Wallis integrals.
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    c = inv_sqrt_series(taylor_F(n), n)
    coeffs = []
    for j in range(n + 1):
        w = wallis_integral(j)
        assert w.pi_power == 1
        coeffs.append(2 * c[j] * w.rational)
    return ExactSeries("rho", tuple(coeffs))


def revert_series(S: ExactSeries, n: int | None = None) -> ExactSeries:
    """Compositional inverse ``R`` with ``R(S(x)) = x + O(x**(n+1))``.

    Uses Lagrange inversion: ``R_k = [x**(k-1)] (x/S(x))**k / k``.
    """
    if n is None:
        n = S.order
    if n > S.order:
        raise TruncationTooHigh(f"requested order {n} exceeds input order {S.order}")
    if S[0] != 0:
        raise NonzeroConstant(f"constant term is {S[0]}, expected 0")
    if n >= 1 and S.order >= 1 and S[1] == 0:
        raise ZeroLinearTerm("series has no linear term and cannot be reverted")
    out = [Fraction(0)] * (n + 1)
    if n == 0:
        return ExactSeries(S.variable, tuple(out))
    # W = x / S(x), needed through x**(n-1)
    shifted = ExactSeries(S.variable, S.coeffs[1 : n + 1])
    W = reciprocal(shifted).coeffs
    power = list(W)
    for k in range(1, n + 1):
        out[k] = power[k - 1] / k
        if k < n:
            power = _cauchy(power, W, n - 1)
    return ExactSeries(S.variable, tuple(out))


def forward_tau_series(n: int = DEFAULT_ORDER) -> ExactSeries:
    """``tau(rho) = (T - 2*pi)/pi = 2*(T/(2*pi) - 1)`` as a series in rho."""
    a = period_series(n)
    return ExactSeries("rho", (Fraction(0),) + tuple(2 * c for c in a.coeffs[1:]))


def inverted_period_series(n: int = DEFAULT_ORDER) -> ExactSeries:
    """Series of ``rho`` in ``tau = DeltaT/pi``; ``rho_k = q_k / pi**k``."""
    if n < 1:
        raise ValueError("inverted series needs order >= 1")
    R = revert_series(forward_tau_series(n), n)
    return ExactSeries("tau", R.coeffs)


def evaluate_partial_sum(S: ExactSeries, x: float, N: int | None = None) -> float:
    """Horner evaluation of ``sum_{j<=N} S[j] * x**j`` in double precision."""
    if N is None:
        N = S.order
    if N < 0:
        raise ValueError("truncation order must be non-negative")
    if N > S.order:
        raise TruncationTooHigh(f"truncation {N} exceeds series order {S.order}")
    acc = 0.0
    for j in range(N, -1, -1):
        acc = acc * x + float(S[j])
    return acc
