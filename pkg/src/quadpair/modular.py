"""Exact modular arithmetic: characters, Gauss sums, Ramanujan sums, CRT.

Complete exponential sums are accumulated in double-precision complex; the
moduli admitted by the brute-force evaluators are capped so the term counts
stay small enough that accumulated rounding is far below the 1e-6 relative
tolerances used by the identity checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ArithmeticDomainError,
    InvalidModulusError,
    PreconditionError,
    ScaleError,
)
from .forms import DiagonalForm, dual_form

RAMANUJAN_BRUTE_CAP = 10**5
GAUSS_SUM_CAP = 10**5
QUAD4_BRUTE_CAP = 10**7


def e_frac(x: int, m: int) -> complex:
    """exp(2*pi*i*x/m) with the argument reduced mod m first."""
    return cmath.exp(2j * cmath.pi * (x % m) / m)


def unit_roots(m: int) -> np.ndarray:
    """Table of exp(2*pi*i*t/m) for t = 0..m-1."""
    return np.exp(2j * np.pi * np.arange(m) / m)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond the sizes used here)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n, for n <= limit (spf[0]=spf[1]=0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division; fine at desk scale."""
    if n <= 0:
        raise ArithmeticDomainError("factorize expects a positive integer")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return sorted(out)


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


@dataclass(frozen=True)
class SquarefreeModulus:
    """A positive squarefree integer together with its sorted prime factors."""

    q: int
    prime_factors: tuple[int, ...]

    def __post_init__(self):
        prod = 1
        for p in self.prime_factors:
            prod *= p
        if prod != self.q or len(set(self.prime_factors)) != len(self.prime_factors):
            raise InvalidModulusError(f"{self.q} does not match factors {self.prime_factors}")

    @classmethod
    def from_int(cls, q: int) -> "SquarefreeModulus":
        if q < 1:
            raise InvalidModulusError("modulus must be positive")
        fac = factorize(q) if q > 1 else []
        if any(e > 1 for _, e in fac):
            raise InvalidModulusError(f"{q} is not squarefree")
        return cls(q, tuple(p for p, _ in fac))

    @property
    def is_odd(self) -> bool:
        return self.q % 2 == 1


def legendre(n: int, p: int) -> int:
    """Quadratic residue character mod an odd prime p, by Euler's criterion."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidModulusError(f"p = {p} is not an odd prime")
    n %= p
    if n == 0:
        return 0
    return 1 if pow(n, (p - 1) // 2, p) == 1 else -1


def legendre_table(p: int) -> np.ndarray:
    """chi_p(v) for v = 0..p-1 as an int8 array."""
    t = np.zeros(p, dtype=np.int8)
    for v in range(1, p):
        t[v] = -1
    for v in range(1, p):
        t[v * v % p] = 1
    return t


def jacobi(n: int, q) -> int:
    """Jacobi symbol (n/q) for odd squarefree q, as the product of Legendre symbols."""
    if isinstance(q, int):
        q = SquarefreeModulus.from_int(q)
    if not q.is_odd:
        raise InvalidModulusError(f"q = {q.q} must be odd")
    out = 1
    for p in q.prime_factors:
        out *= legendre(n, p)
        if out == 0:
            return 0
    return out


def mod_inverse(a: int, m: int) -> int:
    if m < 1:
        raise ArithmeticDomainError("modulus must be positive")
    try:
        return pow(a, -1, m)
    except ValueError as exc:
        raise ArithmeticDomainError(f"{a} has no inverse mod {m}") from exc


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """The residue mod m1*m2 congruent to r1 mod m1 and r2 mod m2."""
    if math.gcd(m1, m2) != 1:
        raise ArithmeticDomainError(f"moduli {m1}, {m2} are not coprime")
    inv = mod_inverse(m1 % m2, m2) if m2 > 1 else 0
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) = sum_{d | gcd(q,n)} d * mu(q/d); equals the primitive-residue sum."""
    if q < 1:
        raise ArithmeticDomainError("q must be >= 1")
    g = q if n == 0 else math.gcd(q, abs(n))
    total = 0
    d = 1
    while d * d <= g:
        if g % d == 0:
            total += d * moebius(q // d)
            e = g // d
            if e != d:
                total += e * moebius(q // e)
        d += 1
    return total


def ramanujan_bruteforce(q: int, n: int) -> complex:
    """Direct sum of e_q(a*n) over residues a coprime to q (oracle path)."""
    if q > RAMANUJAN_BRUTE_CAP:
        raise ScaleError(f"q = {q} exceeds brute cap {RAMANUJAN_BRUTE_CAP}")
    a = np.arange(q if q > 1 else 1)
    mask = np.gcd(a, q) == 1 if q > 1 else np.ones(1, dtype=bool)
    return complex(np.sum(np.exp(2j * np.pi * ((a[mask] * (n % q)) % q) / q)))


def gauss_sum(p: int) -> complex:
    """tau(p) = sum_m chi_p(m) e_p(m), computed by direct summation."""
    if p > GAUSS_SUM_CAP:
        raise ScaleError(f"p = {p} exceeds cap {GAUSS_SUM_CAP}")
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidModulusError(f"p = {p} is not an odd prime")
    chi = legendre_table(p).astype(np.float64)
    return complex(np.sum(chi * unit_roots(p)))


def eps_p(p: int) -> complex:
    """1 for p = 1 mod 4, i for p = 3 mod 4."""
    return 1.0 + 0.0j if p % 4 == 1 else 1.0j


def quad_gauss_sum_closed(m: int, gamma: int, p: int, r: int) -> complex:
    """Closed form of sum_{k mod p^r} e_{p^r}(m*gamma*k^2).

    p^{r/2} for even r; p^{r/2} * chi_p(m*gamma) * eps(p) for odd r.
    """
    _require_odd_prime_coprime(p, 2 * m * gamma)
    if r < 1:
        raise PreconditionError("r must be >= 1")
    val = p ** (r / 2.0)
    if r % 2 == 0:
        return complex(val)
    return val * legendre(m * gamma, p) * eps_p(p)


def quad_gauss_sum_brute(m: int, gamma: int, p: int, r: int) -> complex:
    _require_odd_prime_coprime(p, 2 * m * gamma)
    mod = p**r
    if mod > GAUSS_SUM_CAP:
        raise ScaleError(f"p^r = {mod} exceeds cap {GAUSS_SUM_CAP}")
    k = np.arange(mod, dtype=np.int64)
    return complex(np.sum(np.exp(2j * np.pi * ((m * gamma % mod) * k * k % mod) / mod)))


def exp_sum_quad4_closed(phi: DiagonalForm, m: int, w, p: int, r: int) -> complex:
    """Closed form of sum_{k mod p^r} e_{p^r}(m*phi(k) + k.w) in four variables.

    p^{2r} * e_{p^r}(-inv(4*m*gamma) * dual(w)), with an extra chi_p(gamma)
    for odd r; gamma the coefficient product of phi.
    """
    gamma = phi.product
    _require_odd_prime_coprime(p, 2 * m * gamma)
    if r < 1:
        raise PreconditionError("r must be >= 1")
    mod = p**r
    dual = dual_form(phi)
    phase = e_frac(-mod_inverse(4 * m * gamma, mod) * dual(w), mod)
    val = float(p) ** (2 * r) * phase
    if r % 2 == 1:
        val *= legendre(gamma, p)
    return val


def exp_sum_quad4_brute(phi: DiagonalForm, m: int, w, p: int, r: int) -> complex:
    """Direct 4-fold summation over k mod p^r (term count capped at 1e7)."""
    gamma = phi.product
    _require_odd_prime_coprime(p, 2 * m * gamma)
    mod = p**r
    if mod**4 > QUAD4_BRUTE_CAP:
        raise ScaleError(f"p^{{4r}} = {mod**4} exceeds cap {QUAD4_BRUTE_CAP}")
    k = np.arange(mod, dtype=np.int64)
    ksq = k * k % mod
    parts = [
        ((phi.coeffs[i] * m % mod) * ksq + int(w[i]) % mod * k) % mod for i in range(4)
    ]
    tot = (
        parts[0][:, None, None, None]
        + parts[1][None, :, None, None]
        + parts[2][None, None, :, None]
        + parts[3][None, None, None, :]
    ) % mod
    return complex(np.sum(unit_roots(mod)[tot]))


def _require_odd_prime_coprime(p: int, n: int):
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidModulusError(f"p = {p} is not an odd prime")
    if n % p == 0:
        raise PreconditionError(f"p = {p} divides {n}")


@lru_cache(maxsize=None)
def _spf_upto(limit: int) -> tuple[int, ...]:
    return tuple(int(v) for v in smallest_prime_factors(limit))


def ramanujan_row(n: int, qmax: int) -> np.ndarray:
    """c_q(n) for q = 1..qmax as an int64 array (shared factor sieve)."""
    spf = _spf_upto(max(qmax, 2))
    out = np.empty(qmax + 1, dtype=np.int64)
    out[0] = 0
    for q in range(1, qmax + 1):
        # multiplicative: c_{p^e}(n) from the p-adic valuation of n
        val = 1
        m = q
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if n == 0:
                vp = e  # treat as >= e
            else:
                vp = 0
                t = abs(n)
                while t % p == 0 and vp < e:
                    t //= p
                    vp += 1
            if vp >= e:
                val *= p ** (e - 1) * (p - 1)
            elif vp == e - 1:
                val *= -(p ** (e - 1))
            else:
                val = 0
                break
        out[q] = val
    return out
