"""Direct integration of the oscillator as an independent period oracle.

Dormand-Prince 5(4) with the standard fourth-order continuous extension;
period events are the maxima of x, located by root-finding the velocity on
the dense output.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .errors import InsufficientSpan, StepSizeUnderflow
from .period import PeriodResult

DEFAULT_TOL = 1e-11
MIN_STEP = 1e-14
MAX_STEPS = 2_000_000

# Dormand-Prince tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = _A[6] + (0.0,)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))
_D = (
    -12715105075 / 11282082432,
    0.0,
    87487479700 / 32700410799,
    -10690763975 / 1880347072,
    701980252875 / 199316789632,
    -1453857185 / 822651844,
    69997945 / 29380423,
)


@dataclass(frozen=True)
class OscState:
    t: float
    x: float
    y: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t, self.x, self.y)):
            raise ValueError(f"non-finite state {self}")


@dataclass(frozen=True)
class Trajectory:
    """Accepted steps of one integration plus their interpolants.

    ``dense[i]`` holds ``(t0, h, r1, r2, r3, r4, r5)`` for the step from
    ``states[i]`` to ``states[i + 1]``; each ``r`` is an ``(x, y)`` pair.
    """

    amplitude: float
    states: tuple[OscState, ...]
    dense: tuple = field(repr=False)

    def __post_init__(self):
        first = self.states[0]
        if (first.t, first.x, first.y) != (0.0, self.amplitude, 0.0):
            raise ValueError("trajectory must start at (0, A, 0)")

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.states]

    def evaluate(self, t: float) -> tuple[float, float]:
        """(x, y) at time t from the dense output."""
        if not self.dense:
            return self.states[0].x, self.states[0].y
        starts = [d[0] for d in self.dense]
        i = max(0, min(bisect.bisect_right(starts, t) - 1, len(self.dense) - 1))
        return _interpolate(self.dense[i], t)


def _interpolate(seg, t):
    t0, h, r1, r2, r3, r4, r5 = seg
    th = (t - t0) / h
    th1 = 1.0 - th
    return tuple(
        r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))) for i in range(2)
    )


def rhs(s: OscState) -> tuple[float, float]:
    """(dx/dt, dy/dt) = (y, -(1 + y^2) x)."""
    return _f(s.x, s.y)


def _f(x, y):
    return y, -(1.0 + y * y) * x


def integrate(
    A: float, tol: float = DEFAULT_TOL, t_max: float = 20.0, stop_after_maxima: int | None = None
) -> Trajectory:
    """Integrate from (x, y) = (A, 0) to t_max with local error control.

    The error of each accepted step is below ``tol * (min(1, A) + |state|)``
    componentwise, so tiny amplitudes are still resolved relatively.  With
    ``stop_after_maxima`` the run ends on the step containing that many
    maxima of x after the initial one.
    """
    if not A > 0:
        raise ValueError("amplitude must be positive")
    if not (tol > 0 and t_max > 0):
        raise ValueError("tolerance and t_max must be positive")

    t, x, y = 0.0, float(A), 0.0
    states = [OscState(t, x, y)]
    dense = []
    floor = min(1.0, float(A))
    maxima = 0
    k1 = _f(x, y)
    h = min(1e-3, t_max)
    for _ in range(MAX_STEPS):
        if t >= t_max:
            break
        h = min(h, t_max - t)
        if h < MIN_STEP and t + h < t_max:
            raise StepSizeUnderflow(f"step size {h:g} fell below {MIN_STEP:g} at t={t}")
        k = [k1]
        for stage in range(1, 7):
            row = _A[stage]
            xs = x + h * sum(a * kk[0] for a, kk in zip(row, k))
            ys = y + h * sum(a * kk[1] for a, kk in zip(row, k))
            k.append(_f(xs, ys))
        # stage 7 is evaluated at the 5th-order solution (FSAL)
        x5 = x + h * sum(b * kk[0] for b, kk in zip(_B5, k))
        y5 = y + h * sum(b * kk[1] for b, kk in zip(_B5, k))
        ex = h * sum(e * kk[0] for e, kk in zip(_E, k))
        ey = h * sum(e * kk[1] for e, kk in zip(_E, k))
        err = max(
            abs(ex) / (tol * (floor + max(abs(x), abs(x5)))),
            abs(ey) / (tol * (floor + max(abs(y), abs(y5)))),
        )
        if not math.isfinite(err):
            err = 1e10
        if err <= 1.0:
            r2 = (x5 - x, y5 - y)
            r3 = (h * k[0][0] - r2[0], h * k[0][1] - r2[1])
            r4 = (r2[0] - h * k[6][0] - r3[0], r2[1] - h * k[6][1] - r3[1])
            r5 = tuple(h * sum(d * kk[i] for d, kk in zip(_D, k)) for i in range(2))
            dense.append((t, h, (x, y), r2, r3, r4, r5))
            if y > 0.0 >= y5 and x > 0:
                maxima += 1
            t = t + h
            x, y = x5, y5
            states.append(OscState(t, x, y))
            k1 = k[6]
            if stop_after_maxima is not None and maxima >= stop_after_maxima:
                break
            factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err**-0.2))
        else:
            factor = max(0.1, 0.9 * err**-0.2)
        h *= factor
        if h < MIN_STEP:
            raise StepSizeUnderflow(f"step size {h:g} fell below {MIN_STEP:g} at t={t}")
    else:
        raise StepSizeUnderflow(f"step budget of {MAX_STEPS} exhausted at t={t}")
    return Trajectory(float(A), tuple(states), tuple(dense))


def event_times(traj: Trajectory) -> list[float]:
    """Times of the maxima of x: y crosses zero downward with x > 0.

    The initial state is a maximum by construction and is included.
    """
    events = [0.0]
    for seg, s0, s1 in zip(traj.dense, traj.states, traj.states[1:]):
        if s0.y > 0.0 >= s1.y and s0.x > 0:
            if s1.y == 0.0:
                events.append(s1.t)
                continue
            t_event = brentq(
                lambda t: _interpolate(seg, t)[1], s0.t, s1.t, xtol=1e-13, rtol=1e-15
            )
            events.append(t_event)
    return events


def detect_period(traj: Trajectory) -> PeriodResult:
    """Mean spacing of successive maxima of x; spread of spacings as error."""
    events = event_times(traj)
    if len(events) < 2:
        raise InsufficientSpan(
            f"need at least two maxima of x, found {len(events)}; integrate longer"
        )
    spacings = [b - a for a, b in zip(events, events[1:])]
    period = (events[-1] - events[0]) / len(spacings)
    spread = max(abs(s - period) for s in spacings)
    return PeriodResult.make(traj.amplitude, period, spread, "ode")


def ode_period(A: float, tol: float = DEFAULT_TOL, periods: int = 3) -> PeriodResult:
    """Integrate long enough for ``periods`` full periods and measure the period.

    The period never exceeds 2*pi, so ``periods * 2*pi`` is always enough.
    """
    traj = integrate(A, tol=tol, t_max=periods * 2.0 * math.pi + 0.1, stop_after_maxima=periods)
    return detect_period(traj)


def invariant_drift(traj: Trajectory) -> float:
    """max |ln(1 + y^2) + x^2 - A^2| over the stored states (zero on the exact orbit)."""
    A2 = traj.amplitude**2
    return max(abs(math.log1p(s.y * s.y) + s.x * s.x - A2) for s in traj.states)
