"""Exact lattice-point counters for the pair (psi1, psi2).

All box counters run over the zero set {x : psi1(x) = 0, |x_i| <= B}.  The
enumeration kernel walks the nonnegative octant (the form is even in every
coordinate) and each representative carries multiplicity 2^(#nonzero
coordinates); every summand used downstream (theta(psi2), smooth weights,
quadratic characters of psi2) is itself even per coordinate, so the octant
aggregation is exact.  A naive full-box enumeration is kept in the test
suite as the oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import _kernels
from .charsum import excluded_primes
from .errors import (
    ArithmeticDomainError,
    InvalidFormError,
    PreconditionError,
)
from .forms import FormPair, dual_form, is_perfect_square
from .modular import factorize, legendre_table, primes_up_to
from .oscint import DEFAULT_WEIGHT, SmoothWeight

ENUM_CAP = 2000
NPROXY_CAP = 500


@dataclass(frozen=True)
class CountRecord:
    B: int
    label: str  # one of M, Mstar, Tq, Nproxy, isotropic
    q_or_P: int
    value: float
    bound: float
    ratio: float
    seconds: float


def zero_representatives(coeffs, B: int) -> np.ndarray:
    """Nonnegative-octant representatives of the zero set of a diagonal form."""
    if B > ENUM_CAP:
        raise PreconditionError(f"B = {B} exceeds enumeration cap {ENUM_CAP}")
    if coeffs[3] == 0:
        raise InvalidFormError("solved coordinate has zero coefficient")
    if B < 0:
        return np.empty((0, 4), dtype=np.int64)
    return _kernels.enumerate_octant(tuple(int(c) for c in coeffs), B)


def multiplicities(reps: np.ndarray) -> np.ndarray:
    """Sign-pattern count 2^(#nonzero coordinates) per representative."""
    return np.int64(1) << (reps != 0).sum(axis=1)


def enumerate_psi1_zeros(pair: FormPair, B: int):
    """Yield every x in [-B,B]^4 with psi1(x) = 0, exactly once."""
    reps = zero_representatives(pair.a, B)
    for row in reps:
        choices = [(-int(v), int(v)) if v else (0,) for v in row]
        seen = set()
        for x in product(*choices):
            if x not in seen:
                seen.add(x)
                yield x


def _psi2_values(pair: FormPair, reps: np.ndarray) -> np.ndarray:
    b = np.array(pair.b, dtype=np.int64)
    return (reps * reps * b).sum(axis=1)


def _square_mask(vals: np.ndarray) -> np.ndarray:
    out = np.zeros(len(vals), dtype=bool)
    nonneg = vals >= 0
    v = vals[nonneg].astype(np.float64)
    r = np.sqrt(v).astype(np.int64)
    r = np.where((r + 1) * (r + 1) <= vals[nonneg], r + 1, r)
    r = np.where(r * r > vals[nonneg], r - 1, r)
    out[nonneg] = r * r == vals[nonneg]
    return out


def count_M(pair: FormPair, B: int) -> int:
    """#{x : psi1(x) = 0, psi2(x) a perfect square, |x_i| <= B}."""
    reps = zero_representatives(pair.a, B)
    if len(reps) == 0:
        return 0
    sq = _square_mask(_psi2_values(pair, reps))
    return int(multiplicities(reps)[sq].sum())


def count_M_star(
    pair: FormPair, B: int, weight: SmoothWeight = DEFAULT_WEIGHT
) -> float:
    """Smoothed count: sum of W(x/B) * theta(psi2(x)) over the zero set."""
    reps = zero_representatives(pair.a, B)
    if len(reps) == 0:
        return 0.0
    sq = _square_mask(_psi2_values(pair, reps))
    wv = weight(reps / float(B)) if B > 0 else weight(reps.astype(np.float64))
    return float((multiplicities(reps) * wv)[sq].sum())


def count_N_proxy(pair: FormPair, B: int) -> int:
    """Primitive five-variable count: psi1(x) = 0, psi2(x) = x5^2, x1 > 0.

    Upper-bounds the projective point count; no line deletion is attempted.
    """
    if B > NPROXY_CAP:
        raise PreconditionError(f"B = {B} exceeds cap {NPROXY_CAP}")
    reps = zero_representatives(pair.a, B)
    total = 0
    for row in reps:
        x1 = int(row[0])
        if x1 == 0:
            continue
        n = sum(int(bi) * int(v) * int(v) for bi, v in zip(pair.b, row))
        if n < 0 or not is_perfect_square(n):
            continue
        s = math.isqrt(n)
        if s > B:
            continue
        mult = 1 << int((row != 0).sum() - 1)  # sign patterns with x1 = +|x1|
        g = math.gcd(math.gcd(int(row[1]), math.gcd(int(row[2]), int(row[3]))), x1)
        if s == 0:
            total += mult if g == 1 else 0
        else:
            total += 2 * mult if math.gcd(g, s) == 1 else 0
    return total


def admissible_q(pair: FormPair, q: int) -> bool:
    """q odd, squarefree, coprime to 2*alpha (enough for chi_q and the blocks)."""
    if q < 1 or q % 2 == 0:
        return q == 1
    if any(e > 1 for _, e in factorize(q)):
        return False
    return math.gcd(q, 2 * pair.alpha) == 1


def t_q(
    pair: FormPair, q: int, B: int, weight: SmoothWeight = DEFAULT_WEIGHT
) -> float:
    """Twisted count T_q(B) = sum W(x/B) * jacobi(psi2(x), q) over the zero set."""
    if not admissible_q(pair, q):
        raise PreconditionError(f"q = {q} is not admissible for this pair")
    reps = zero_representatives(pair.a, B)
    if len(reps) == 0:
        return 0.0
    vals = _psi2_values(pair, reps)
    chi = np.ones(len(reps), dtype=np.float64)
    if q > 1:
        for p, _ in factorize(q):
            chi *= legendre_table(p)[vals % p]
    wv = weight(reps / float(B)) if B > 0 else weight(reps.astype(np.float64))
    return float((multiplicities(reps) * wv * chi).sum())


def count_isotropic_w(pair: FormPair, R: int) -> int:
    """#{w != 0, |w|_inf <= R, dual1(w) = 0}."""
    if R > ENUM_CAP:
        raise PreconditionError(f"R = {R} exceeds cap {ENUM_CAP}")
    if R < 1:
        return 0
    dual = dual_form(pair.psi1)
    reps = zero_representatives(dual.coeffs, R)
    if len(reps) == 0:
        return 0
    return int(multiplicities(reps).sum()) - 1  # drop the origin


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    stderr: float
    n_used: int


def fit_exponent(records) -> ExponentFit:
    """Least-squares slope of log(value) against log(B)."""
    xs, ys = [], []
    for B, value in records:
        if value <= 0:
            warnings.warn(f"dropping nonpositive value {value} at B={B}")
            continue
        xs.append(math.log(B))
        ys.append(math.log(value))
    if len(xs) < 3:
        raise ArithmeticDomainError("need at least 3 usable points")
    x = np.array(xs)
    y = np.array(ys)
    xc = x - x.mean()
    slope = float(np.dot(xc, y) / np.dot(xc, xc))
    resid = y - (y.mean() + slope * xc)
    dof = len(x) - 2
    stderr = float(np.sqrt(resid @ resid / dof / np.dot(xc, xc))) if dof > 0 else 0.0
    return ExponentFit(slope, stderr, len(x))


def prime_set(pair: FormPair, P: int) -> list[int]:
    """The P smallest primes above P*log(max(P,3)) avoiding divisors of 2*alpha*D."""
    if P < 1:
        raise PreconditionError("P must be >= 1")
    threshold = P * math.log(max(P, 3))
    bad = excluded_primes(pair, include_minors=True)
    limit = int(threshold) + 64
    while True:
        cands = [p for p in primes_up_to(limit) if p > threshold and p not in bad]
        if len(cands) >= P:
            return cands[:P]
        limit *= 2


@dataclass(frozen=True)
class SieveDecomposition:
    B: int
    P: int
    primes: tuple[int, ...]
    mstar: float
    zero_mass: float  # weighted mass of points with psi2(x) = 0
    diagonal_term: float
    offdiag_term: float
    majorant_rhs: float
    domination_failures: int  # square psi2 != 0 with theta > 4 * majorant term


def sieve_decompose(
    pair: FormPair,
    B: int,
    P: int,
    weight: SmoothWeight = DEFAULT_WEIGHT,
    enforce_range: bool = True,
) -> SieveDecomposition:
    """Split the averaged-character majorant of the smoothed count.

    Computes (1/P^2) * sum_x W(x/B) |sum_{p in the prime set} chi_p(psi2(x))|^2
    over the zero set, split into the p1 = p2 and p1 != p2 parts.  Points with
    psi2(x) = 0 contribute zero to the majorant although theta(0) = 1; their
    weighted mass is returned separately so callers can add it back
    explicitly.

    enforce_range asserts max |psi2| < e^P (the crude sufficient condition
    for the majorant to dominate); with enforce_range=False the per-point
    domination theta(n) <= 4 * (1/P^2) |sum chi_p(n)|^2 is checked exactly
    instead and failures are counted.
    """
    reps = zero_representatives(pair.a, B)
    vals = _psi2_values(pair, reps)
    mult = multiplicities(reps).astype(np.float64)
    wv = weight(reps / float(B)) if B > 0 else weight(reps.astype(np.float64))
    mass = mult * wv
    primes = prime_set(pair, P)
    if enforce_range:
        vmax = float(np.abs(vals).max(initial=0.0))
        if P < 700 and vmax >= math.exp(P):
            raise PreconditionError(
                f"max |psi2| = {vmax} is not < e^P = {math.exp(P):.3g}; "
                "enlarge P or pass enforce_range=False"
            )
    chi_sum = np.zeros(len(reps), dtype=np.float64)
    chi_sq = np.zeros(len(reps), dtype=np.float64)
    for p in primes:
        cp = legendre_table(p)[vals % p].astype(np.float64)
        chi_sum += cp
        chi_sq += cp * cp
    sq = _square_mask(vals)
    mstar = float(mass[sq].sum())
    zero_mass = float(mass[vals == 0].sum())
    majorant = float((mass * chi_sum**2).sum()) / P**2
    diagonal = float((mass * chi_sq).sum()) / P**2
    failures = 0
    if not enforce_range:
        nz_sq = sq & (vals != 0)
        failures = int(np.sum(1.0 > 4.0 * chi_sum[nz_sq] ** 2 / P**2))
    return SieveDecomposition(
        B, P, tuple(primes), mstar, zero_mass, diagonal,
        majorant - diagonal, majorant, failures,
    )
