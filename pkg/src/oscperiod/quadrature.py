"""Adaptive quadrature rules used by the period integrals.

Two independent rules are provided so that the two period routes do not
share an integrator: Gauss-Legendre panels with recursive bisection for
smooth integrands, and double-exponential (tanh-sinh) quadrature for
integrands with an integrable endpoint singularity.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import ToleranceNotReached

GL_NODES = 15
DEFAULT_BUDGET = 100_000


@lru_cache(maxsize=8)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel(f, a, b, n):
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(w, f(mid + half * x)))


def gauss_legendre_adaptive(f, a, b, tol=1e-12, budget=DEFAULT_BUDGET, nodes=GL_NODES):
    """Integrate a vectorized ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Each panel is compared with the sum over its two halves; panels whose
    discrepancy exceeds their share of ``tol`` are bisected.  Returns
    ``(value, error_estimate, evaluations)``.
    """
    if not b > a:
        raise ValueError("need a < b")
    width = b - a
    evals = nodes
    stack = [(a, b, _panel(f, a, b, nodes))]
    total = 0.0
    err = 0.0
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid, nodes)
        right = _panel(f, mid, hi, nodes)
        evals += 2 * nodes
        diff = abs(left + right - whole)
        share = tol * (hi - lo) / width
        if diff <= share or (hi - lo) < 1e-13 * width:
            total += left + right
            err += diff
        else:
            stack.append((lo, mid, left))
            stack.append((mid, hi, right))
        if evals > budget:
            raise ToleranceNotReached(
                f"Gauss-Legendre panel budget of {budget} evaluations exhausted"
            )
    return total, err, evals


def tanh_sinh(f_mapped, tol=1e-12, max_level=12, t_max=None):
    """Tanh-sinh quadrature over ``[0, 1]``.

    ``f_mapped(u, one_minus_u)`` receives both the abscissa and its
    complement (computed without cancellation) so that integrands singular
    at ``u = 1`` can be evaluated accurately there.  The step is halved
    until two successive levels agree within ``tol``.
    Returns ``(value, error_estimate, evaluations)``.
    """
    if t_max is None:
        # complement 1-u reaches ~1e-62 here; the neglected tails are far below tol
        t_max = 4.5

    def contributions(t):
        s = 0.5 * math.pi * np.sinh(t)
        c = 0.5 * math.pi * np.cosh(t)
        # u = (1 + tanh s)/2 ; 1 - u = 1/(1 + e^{2s}) ; u = 1/(1 + e^{-2s})
        one_minus_u = 1.0 / (1.0 + np.exp(2.0 * s))
        u = 1.0 / (1.0 + np.exp(-2.0 * s))
        weight = 0.5 * c / np.cosh(s) ** 2
        keep = (one_minus_u > 0) & (u > 0)
        vals = np.zeros_like(t)
        vals[keep] = weight[keep] * f_mapped(u[keep], one_minus_u[keep])
        return vals

    h = 1.0
    t = np.arange(-t_max, t_max + 0.5 * h, h)
    acc = float(np.sum(contributions(t)))
    evals = t.size
    estimate = h * acc
    for _ in range(max_level):
        h *= 0.5
        t_new = np.arange(-t_max + h, t_max, 2 * h)
        acc += float(np.sum(contributions(t_new)))
        evals += t_new.size
        new = h * acc
        err = abs(new - estimate)
        estimate = new
        if err < tol:
            return estimate, err, evals
    raise ToleranceNotReached(f"tanh-sinh did not reach {tol:g} after {max_level} levels")
