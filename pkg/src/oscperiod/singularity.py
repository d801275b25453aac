"""Locating the complex singularities of the small-amplitude period series.

Three independent looks at the same question:

* diagonal Pade approximants of T(rho)/(2 pi), whose denominator zeros
  track the singular points nearest the origin;
* Pade approximants of the logarithmic derivative T'/T, whose poles are
  simple and whose residues estimate the local exponent;
* ratio-type radius-of-convergence estimators on the raw coefficients.

Pade linear algebra is done in exact rationals; only root finding is
floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NoConvergence, SingularSystem, ZeroConstantTerm
from .series import ExactSeries, inv_sqrt_series, period_series, taylor_F

FROISSART_DISTANCE = 1e-6
FROISSART_RESIDUE = 1e-4
CONJUGATE_TOL = 1e-10
ESTIMATORS = ("ratio", "two-step", "root")


# ---------------------------------------------------------------------------
# Pade approximants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PadeApproximant:
    num: tuple[Fraction, ...]
    den: tuple[Fraction, ...]
    orders: tuple[int, int]

    def __post_init__(self):
        if self.den[0] != 1:
            raise ValueError("denominator must be normalized to den[0] = 1")

    def taylor(self, n: int) -> list[Fraction]:
        """First n+1 Taylor coefficients of num/den."""
        out = []
        for k in range(n + 1):
            acc = self.num[k] if k < len(self.num) else Fraction(0)
            for i in range(1, min(k, len(self.den) - 1) + 1):
                acc -= self.den[i] * out[k - i]
            out.append(acc)
        return out

    def __call__(self, x):
        return _horner(self.num, x) / _horner(self.den, x)

    def poles(self) -> list[complex]:
        return poly_roots(self.den)

    def zeros(self) -> list[complex]:
        return poly_roots(self.num)

    def residue(self, pole: complex) -> complex:
        """Residue of num/den at a simple pole."""
        dden = [k * c for k, c in enumerate(self.den)][1:]
        return _horner(self.num, pole) / _horner(dden, pole)


def _horner(coeffs, x):
    cast = complex if isinstance(x, complex) else float
    acc = cast(0)
    for c in reversed(coeffs):
        acc = acc * x + cast(c)
    return acc


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Gauss-Jordan over the rationals.

    Returns ``(solution, rank)``; ``solution`` is None when the system is
    inconsistent.  Free unknowns (rank deficiency) are set to zero.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if aug[i][n_cols] != 0:
            return None, r
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][n_cols]
    return x, r


def pade(coeffs: Sequence, M: int, N: int) -> PadeApproximant:
    """[M/N] Pade approximant of a power series, in exact arithmetic.

    The denominator solves the N x N Toeplitz system
    ``sum_k q_k a_{M+i-k} = -a_{M+i}`` (i = 1..N, q_0 = 1).  When that
    system is singular but consistent (the series is itself a rational
    function of lower type) the lowest-degree denominator that satisfies all
    N equations is used.  An inconsistent system raises SingularSystem.
    """
    a = [Fraction(c) for c in coeffs]
    if M < 0 or N < 0:
        raise ValueError("Pade degrees must be non-negative")
    if len(a) < M + N + 1:
        raise ValueError(f"[{M}/{N}] needs {M + N + 1} coefficients, got {len(a)}")

    def at(k):
        return a[k] if k >= 0 else Fraction(0)

    q = [Fraction(1)]
    if N > 0:
        rhs = [-at(M + i) for i in range(1, N + 1)]
        full = [[at(M + i - k) for k in range(1, N + 1)] for i in range(1, N + 1)]
        sol, rank = _solve_exact(full, rhs)
        if sol is not None and rank == N:
            q += sol
        else:
            for d in range(0, N + 1):
                sub = [row[:d] for row in full]
                sol, rank = _solve_exact(sub, rhs) if d else (
                    ([] if all(b == 0 for b in rhs) else None), 0)
                if sol is not None and rank == d:
                    q += sol + [Fraction(0)] * (N - d)
                    break
            else:
                raise SingularSystem(f"[{M}/{N}] Pade system has no solution")
    p = [sum((q[i] * at(k - i) for i in range(0, min(k, N) + 1)), Fraction(0)) for k in range(M + 1)]
    return PadeApproximant(tuple(p), tuple(q), (M, N))


# ---------------------------------------------------------------------------
# Polynomial roots
# ---------------------------------------------------------------------------


def poly_roots(coeffs: Sequence, polish_steps: int = 3) -> list[complex]:
    """All roots of ``sum_k coeffs[k] z**k``, sorted by modulus.

    Companion-matrix eigenvalues followed by a few Newton steps on the
    original coefficients.  Each root must satisfy
    ``|p(r)| <= 1e-8 * max|coeff| * max(1, |r|)**deg``.
    """
    c = [complex(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if not c:
        raise ValueError("zero polynomial has no well-defined roots")
    deg = len(c) - 1
    if deg == 0:
        return []
    lead = c[-1]
    companion = np.zeros((deg, deg), dtype=complex)
    companion[1:, :-1] = np.eye(deg - 1)
    companion[:, -1] = [-ck / lead for ck in c[:-1]]
    roots = list(np.linalg.eigvals(companion))

    dc = [k * ck for k, ck in enumerate(c)][1:]
    scale = max(abs(ck) for ck in c)
    polished = []
    for r in roots:
        r = complex(r)
        for _ in range(polish_steps):
            d = _horner(dc, r)
            if d == 0:
                break
            step = _horner(c, r) / d
            if not cmath.isfinite(step):
                break
            r_new = r - step
            if abs(_horner(c, r_new)) > abs(_horner(c, r)):
                break
            r = r_new
        if abs(_horner(c, r)) > 1e-8 * scale * max(1.0, abs(r)) ** deg:
            raise NoConvergence(f"root {r} failed the residual check")
        polished.append(r)
    if all(isinstance(x, (int, float, Fraction)) for x in coeffs):
        polished = _symmetrize(polished)
    return sorted(polished, key=lambda z: (abs(z), z.imag))


def _symmetrize(roots: list[complex]) -> list[complex]:
    """Make roots of a real polynomial exact conjugate pairs."""
    out = []
    pending = list(roots)
    while pending:
        r = pending.pop(0)
        if abs(r.imag) <= CONJUGATE_TOL * max(1.0, abs(r)):
            out.append(complex(r.real, 0.0))
            continue
        j = min(range(len(pending)), key=lambda i: abs(pending[i] - r.conjugate()), default=None)
        if j is None or abs(pending[j] - r.conjugate()) > 1e-6 * max(1.0, abs(r)):
            out.append(r)
            continue
        partner = pending.pop(j)
        mid = 0.5 * (r + partner.conjugate())
        out += [mid, mid.conjugate()]
    return out


# ---------------------------------------------------------------------------
# Singularity scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularityEstimate:
    """Nearest singular point found by one Pade order.

    ``location`` is the member with non-negative imaginary part;
    ``pair`` holds it together with its conjugate when the singularity is
    off the real axis.
    """

    location: complex
    pair: tuple[complex, ...]
    pade_order: tuple[int, int]
    residual: float
    exponent: float | None = None
    residue: complex | None = None


@dataclass
class ScanResult:
    estimates: list[SingularityEstimate] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)
    dlog: bool = False

    def __iter__(self):
        return iter(self.estimates)

    def __len__(self):
        return len(self.estimates)

    def __getitem__(self, i):
        return self.estimates[i]

    @property
    def final(self) -> SingularityEstimate:
        if not self.estimates:
            raise SingularSystem("every Pade order in the scan was defective")
        return self.estimates[-1]


def _filter_froissart(pa: PadeApproximant, poles: list[complex]) -> list[complex]:
    """Drop spurious pole/zero pairs.

    A pole is discarded when a numerator zero lies within
    FROISSART_DISTANCE of it, or when its residue is below
    FROISSART_RESIDUE times the largest residue of the approximant.
    """
    if len(pa.num) < 2 or all(c == 0 for c in pa.num[1:]):
        return poles
    zeros = pa.zeros()
    residues = [abs(pa.residue(p)) for p in poles]
    biggest = max(residues, default=0.0)
    return [
        p
        for p, res in zip(poles, residues)
        if not any(abs(p - z) < FROISSART_DISTANCE for z in zeros)
        and res >= FROISSART_RESIDUE * biggest
    ]


def _nearest(poles: list[complex]) -> tuple[complex, tuple[complex, ...]]:
    r = min(poles, key=abs)
    if abs(r.imag) <= CONJUGATE_TOL * max(1.0, abs(r)):
        return complex(r.real, 0.0), (complex(r.real, 0.0),)
    up = complex(r.real, abs(r.imag))
    return up, (up, up.conjugate())


def _scan(coeffs: Sequence[Fraction], max_order: int, dlog: bool, min_order: int = 2) -> ScanResult:
    result = ScanResult(dlog=dlog)
    previous = None
    for N in range(min_order, max_order + 1):
        try:
            pa = pade(coeffs, N, N)
            poles = _filter_froissart(pa, pa.poles())
        except (SingularSystem, NoConvergence):
            result.skipped.append(N)
            continue
        if not poles:
            result.skipped.append(N)
            continue
        loc, pair = _nearest(poles)
        residual = math.inf if previous is None else abs(loc - previous)
        previous = loc
        exponent = residue = None
        if dlog:
            residue = complex(pa.residue(loc))
            exponent = residue.real
        result.estimates.append(SingularityEstimate(loc, pair, (N, N), residual, exponent, residue))
    return result


def pade_scan(coeffs: Sequence, max_order: int, min_order: int = 2) -> ScanResult:
    """Nearest denominator zero of the [N/N] approximants, N = min_order..max_order."""
    coeffs = list(coeffs)
    if len(coeffs) < 2 * max_order + 1:
        raise ValueError(f"need {2 * max_order + 1} coefficients for [{max_order}/{max_order}]")
    return _scan(coeffs, max_order, dlog=False, min_order=min_order)


def singularity_scan(max_order: int) -> ScanResult:
    """Pade scan of the T(rho)/(2 pi) series."""
    if max_order < 2:
        raise ValueError("max_order must be at least 2")
    return pade_scan(period_series(2 * max_order).coeffs, max_order)


def dlog_series(S: ExactSeries, n: int | None = None) -> ExactSeries:
    """Series of S'/S through order n - 1 (n defaults to the order of S)."""
    if n is None:
        n = S.order
    if n > S.order:
        raise ValueError(f"order {n} exceeds series order {S.order}")
    if n < 1:
        raise ValueError("need n >= 1 to differentiate")
    if S[0] == 0:
        raise ZeroConstantTerm("logarithmic derivative needs S[0] != 0")
    d = [(k + 1) * S[k + 1] for k in range(n)]
    L: list[Fraction] = []
    for k in range(n):
        acc = d[k] - sum((L[i] * S[k - i] for i in range(k)), Fraction(0))
        L.append(acc / S[0])
    return ExactSeries(S.variable, tuple(L))


def dlog_pade_scan(S: ExactSeries, max_order: int, min_order: int = 2) -> ScanResult:
    """Pade scan of S'/S; residues at the poles estimate the exponent alpha.

    Near ``S ~ (z - z0)**alpha`` the logarithmic derivative behaves like
    ``alpha / (z - z0)``, so the residue is alpha itself.
    """
    L = dlog_series(S, 2 * max_order + 1)
    return _scan(L.coeffs, max_order, dlog=True, min_order=min_order)


def dlog_singularity_scan(max_order: int) -> ScanResult:
    """d-log Pade scan of T(rho).

    The logarithmic derivative is taken with respect to rho; T^{-1} dT/dA
    differs from it by the factor 2 sqrt(rho), which does not move poles.
    """
    if max_order < 2:
        raise ValueError("max_order must be at least 2")
    return dlog_pade_scan(period_series(2 * max_order + 1), max_order)


# ---------------------------------------------------------------------------
# Radius of convergence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusEstimate:
    """Per-index radius estimates and their extrapolation to j -> infinity.

    ``extrapolated`` fits ``estimate = R + b/j`` separately to even and odd
    j over the last ``FIT_WINDOW`` entries and averages the two intercepts;
    ``tail_median`` is the plain median of the last five entries.
    """

    per_order: tuple[tuple[int, float], ...]
    extrapolated: float
    estimator: str
    tail_median: float
    flagged: tuple[int, ...] = ()


FIT_WINDOW = 10


def _extrapolate(per_order: list[tuple[int, float]]) -> float:
    tail = [(j, v) for j, v in per_order[-FIT_WINDOW:] if j > 0]
    intercepts = []
    for parity in (0, 1):
        pts = [(j, v) for j, v in tail if j % 2 == parity]
        if len(pts) >= 2:
            x = np.array([1.0 / j for j, _ in pts])
            y = np.array([v for _, v in pts])
            intercepts.append(float(np.polyfit(x, y, 1)[1]))
    if not intercepts:
        return per_order[-1][1]
    return float(np.mean(intercepts))


def radius_estimate(coeffs: Sequence, estimator: str = "two-step") -> RadiusEstimate:
    """Radius of convergence from ratio-type tests on series coefficients.

    ratio     |c_j / c_{j+1}|
    two-step  |c_j / c_{j+2}|^(1/2), insensitive to the sign pattern of a
              conjugate pair of singularities on the imaginary axis
    root      |c_j|^(-1/j)

    A ratio entry whose neighbour vanishes is bridged to the next nonzero
    coefficient c_k as |c_j/c_k|^(1/(k-j)) and its index flagged; entries at
    vanishing c_j are skipped and flagged.
    """
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}")
    c = [Fraction(x) for x in coeffs]
    if len(c) < 6:
        raise ValueError("need at least 6 coefficients")
    per_order: list[tuple[int, float]] = []
    flagged: list[int] = []
    n = len(c)
    if estimator == "root":
        for j in range(1, n):
            if c[j] == 0:
                flagged.append(j)
                continue
            per_order.append((j, math.exp(-_log_abs(c[j]) / j)))
    else:
        step = 1 if estimator == "ratio" else 2
        for j in range(0, n - step):
            if c[j] == 0:
                flagged.append(j)
                continue
            k = j + step
            if estimator == "ratio":
                while k < n and c[k] == 0:
                    k += 1
                if k == n:
                    flagged.append(j)
                    continue
                if k != j + 1:
                    flagged.append(j)
            elif c[k] == 0:
                flagged.append(j)
                continue
            per_order.append((j, math.exp((_log_abs(c[j]) - _log_abs(c[k])) / (k - j))))
    if not per_order:
        raise ValueError("no usable coefficients for the radius estimate")
    tail = [v for _, v in per_order[-5:]]
    return RadiusEstimate(
        tuple(per_order), _extrapolate(per_order), estimator, float(np.median(tail)), tuple(flagged)
    )


def _log_abs(q: Fraction) -> float:
    # exact rationals can under/overflow a float; take logs of the parts
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def c_coefficients(n: int = 40) -> ExactSeries:
    """Coefficients c_j of 1/sqrt(F(z)) through order n."""
    return inv_sqrt_series(taylor_F(n), n)


# ---------------------------------------------------------------------------
# Energy argument
# ---------------------------------------------------------------------------


def potential_minimum(rho: complex) -> complex:
    """Bottom of the effective potential, V(0) = (1 - e^rho)/(2 rho)."""
    if rho == 0:
        return -0.5
    return (1 - cmath.exp(rho)) / (2 * rho)


def critical_rho_prediction() -> tuple[complex, complex]:
    """Zeros of V(0) nearest the origin: rho = +-2 pi i (where e^rho = 1)."""
    pair = (complex(0.0, 2 * math.pi), complex(0.0, -2 * math.pi))
    for rho in pair:
        if abs(potential_minimum(rho)) >= 1e-12:
            raise NoConvergence(f"V(0) does not vanish at {rho}")
    return pair
