"""A numerically exact instantiation of the additive-character delta expansion.

With a smooth bump w0 supported on (1/2, 1), unit mass, and the normalizing
constant cQ chosen so that sum_d cQ/Q * w0(d/Q) = 1, the indicator of n = 0
on the integers has the finite expansion

    delta(n) = (cQ / Q^2) * sum_{q >= 1} c_q(n) * h(q/Q, n/Q^2),

    h(x, y)  = sum_{j >= 1} (x j)^{-1} * ( w0(x j) - w0(|y| / (x j)) ),

with c_q(n) the Ramanujan sum.  The identity is exact, not asymptotic: for
n != 0 it telescopes over the divisor pairing d <-> |n|/d, and for n = 0 it
is the defining normalization of cQ.  The q-sum is finite because h(x, y)
vanishes once x > max(1, 2|y|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import InputTooLargeError, PreconditionError
from .modular import ramanujan_row

RECONSTRUCT_CAP = 10**6


def _raw_bump(t: float) -> float:
    if t <= 0.5 or t >= 1.0:
        return 0.0
    return math.exp(-1.0 / ((t - 0.5) * (1.0 - t)))


@lru_cache(maxsize=1)
def _bump_norm() -> float:
    val, err = quad(_raw_bump, 0.5, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    if err > 1e-13:
        raise ArithmeticError(f"bump normalization quadrature error {err}")
    return 1.0 / val


def bump_w0(t) -> float | np.ndarray:
    """Smooth bump supported on (1/2, 1), normalized to unit integral."""
    K = _bump_norm()
    if np.isscalar(t):
        return K * _raw_bump(float(t))
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    inside = (t > 0.5) & (t < 1.0)
    ti = t[inside]
    with np.errstate(over="ignore"):
        out[inside] = K * np.exp(-1.0 / ((ti - 0.5) * (1.0 - ti)))
    return out


def h_function(x: float, y) -> float | np.ndarray:
    """h(x, y) of the expansion; exactly zero for x > max(1, 2|y|).

    Only finitely many j contribute: w0(xj) needs 1/(2x) < j < 1/x and
    w0(|y|/(xj)) needs |y| < xj < 2|y|.
    """
    if x <= 0:
        raise PreconditionError("h requires x > 0")
    scalar = np.isscalar(y)
    ya = np.abs(np.atleast_1d(np.asarray(y, dtype=np.float64)))
    out = np.zeros_like(ya)
    jmax = int(max(1.0, 2.0 * float(ya.max(initial=0.0))) / x) + 1
    for j in range(1, jmax + 1):
        xj = x * j
        if xj >= 1.0 and xj > 2.0 * ya.max(initial=0.0):
            break
        out += (bump_w0(xj) - bump_w0(ya / xj)) / xj
    return float(out[0]) if scalar else out.reshape(np.shape(y))


@dataclass(frozen=True)
class DeltaKernel:
    """Scale Q plus the exactly computed normalizing constant cQ."""

    Q: float
    cQ: float

    @classmethod
    def build(cls, Q: float) -> "DeltaKernel":
        return cls(float(Q), compute_cQ(float(Q)))


def compute_cQ(Q: float) -> float:
    """cQ = 1 / sum_{d} Q^{-1} w0(d/Q); finite sum over Q/2 < d < Q."""
    if Q < 2:
        raise PreconditionError(f"Q = {Q} leaves no integer in (Q/2, Q)")
    d = np.arange(1, int(Q) + 1, dtype=np.float64)
    total = float(np.sum(bump_w0(d / Q)) / Q)
    if total <= 0:
        raise PreconditionError(f"Q = {Q} leaves no integer in (Q/2, Q)")
    return 1.0 / total


def delta_reconstruct(kernel: DeltaKernel, n: int) -> float:
    """The expansion evaluated at n; equals delta(n) up to float roundoff.

    The q-sum is truncated at the exact support bound
    q <= Q * max(1, 2|n|/Q^2), so no analytic error is introduced.
    """
    if abs(n) > RECONSTRUCT_CAP:
        raise InputTooLargeError(f"|n| = {abs(n)} exceeds cap {RECONSTRUCT_CAP}")
    Q, cQ = kernel.Q, kernel.cQ
    qmax = int(Q * max(1.0, 2.0 * abs(n) / Q**2)) + 1
    cq = ramanujan_row(n, qmax).astype(np.float64)
    y = n / Q**2
    hs = np.array([h_function(qv / Q, y) for qv in range(1, qmax + 1)])
    return cQ / Q**2 * float(np.dot(cq[1:], hs))
