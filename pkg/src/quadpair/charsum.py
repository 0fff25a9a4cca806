"""Complete character sums S(q,c; w) attached to a pair of diagonal forms.

The object evaluated throughout this module is

    S(q,c; w) = sum*_{a mod c}  sum_{k mod qc, psi1(k) = 0 mod q}
                chi_q(psi2(k)) * e_qc(a*psi1(k) + w.k)

where chi_q is the Jacobi symbol modulo the odd squarefree q (zero on
non-units, identically 1 for q = 1) and sum* runs over residues coprime to
c.  Three evaluation routes are provided and cross-checked:

* ``char_sum_brute``    -- the literal sum (hot kernel, term-count capped);
* ``char_sum_factored`` -- coprime factorization into prime blocks, each
  block evaluated by an exact finite rearrangement of its defining sum;
* closed forms for the q = 1 prime-power blocks.

S(q,c; w) is multiplicative over coprime splittings of (q, c); that identity
is itself one of the checked properties, and the factored route relies on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import ArithmeticDomainError, PreconditionError, ScaleError
from .forms import FormPair, Vec4, dual_form
from .modular import (
    factorize,
    legendre,
    legendre_table,
    ramanujan_sum,
    unit_roots,
)

BRUTE_TERM_CAP = 10**9
SP1_CAP = 10**8  # p^4 cap for the (q=p, c=1) direct evaluation
SPPR_CAP = 10**9  # (p^{r+1})^4 * p^r cap for the (q=p, c=p^r) literal sum


def admissible_primes(pair: FormPair, bound: int, include_minors: bool = True) -> list[int]:
    """Odd primes p <= bound coprime to 2*alpha (and to D when asked).

    The stricter variant (including the minor product D) is the hypothesis
    of the square-root cancellation bound for S(p,1); the weaker one is all
    the prime-power evaluations need.
    """
    from .modular import primes_up_to

    bad = excluded_primes(pair, include_minors)
    return [p for p in primes_up_to(bound) if p != 2 and p not in bad]


def excluded_primes(pair: FormPair, include_minors: bool = True) -> frozenset[int]:
    n = 2 * abs(pair.alpha)
    if include_minors:
        n *= abs(pair.D)
    return frozenset(p for p, _ in factorize(n))


@dataclass(frozen=True)
class CharSumParams:
    """Parameters (pair, q, c, w) of one character-sum evaluation.

    q must be odd and squarefree, which is all the Jacobi symbol chi_q
    needs.  Coprimality of q with 2*alpha (or with 2*alpha*D) is a
    hypothesis of the individual closed forms and bounds, and is asserted
    by those paths rather than here; the literal sum is defined without it.
    """

    pair: FormPair
    q: int
    c: int
    w: Vec4

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(v) for v in self.w))
        if self.q < 1 or self.c < 1:
            raise PreconditionError("q and c must be positive")
        if self.q > 1:
            if self.q % 2 == 0:
                raise PreconditionError(f"q = {self.q} must be odd")
            fac = factorize(self.q)
            if any(e > 1 for _, e in fac):
                raise PreconditionError(f"q = {self.q} must be squarefree")

    @property
    def modulus(self) -> int:
        return self.q * self.c

    @property
    def term_count(self) -> int:
        """Kernel iteration count: the k-loop after the a-sum is precollapsed."""
        return self.modulus**4


@dataclass(frozen=True)
class CharSumValue:
    value: complex
    params: CharSumParams
    method: str


def _pair_key(pair: FormPair) -> tuple:
    return (pair.a, pair.b)


@lru_cache(maxsize=None)
def _chi_table(qfactors: tuple[int, ...], q: int) -> np.ndarray:
    """Jacobi symbol table chi_q(v), v = 0..q-1, as float64."""
    chi = np.ones(q, dtype=np.float64)
    for p in qfactors:
        chi *= legendre_table(p)[np.arange(q) % p]
    return chi


def _q_factors(q: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(q)) if q > 1 else ()


def char_sum_brute(params: CharSumParams) -> CharSumValue:
    """Literal evaluation of S(q,c; w), capped at 1e9 kernel iterations.

    The a-sum is precollapsed into the table A[u] = sum*_{a mod c} e_qc(a*u),
    which is an exact regrouping of the double sum; the k-loop is literal.
    """
    if params.term_count > BRUTE_TERM_CAP:
        raise ScaleError(
            f"(qc)^4 = {params.term_count} exceeds brute cap {BRUTE_TERM_CAP}"
        )
    q, c, m = params.q, params.c, params.modulus
    pair, w = params.pair, params.w
    k = np.arange(m, dtype=np.int64)
    ksq = k * k % m
    s1 = np.stack([(ai % m) * ksq % m for ai in pair.a])
    s2 = np.stack([(bi % q) * (k * k % q) % q for bi in pair.b])
    wk = np.stack([(wi % m) * k % m for wi in w])
    roots = unit_roots(m)
    prim = np.array([a for a in range(c) if math.gcd(a, c) == 1] or [0])
    A = roots[np.outer(prim, np.arange(m)) % m].sum(axis=0).astype(np.complex128)
    chi = _chi_table(_q_factors(q), q) if q > 1 else np.ones(1)
    val = _kernels.char_sum_brute_sum(m, q, s1, s2, wk, A, chi, roots)
    return CharSumValue(val, params, "brute")


def char_sum_crt(
    pair: FormPair, q1: int, c1: int, q2: int, c2: int, w
) -> CharSumValue:
    """S(q1*q2, c1*c2; w) composed as S(q1,c1; w) * S(q2,c2; w).

    Requires gcd(q1*c1, q2*c2) = 1; each factor is evaluated by the fastest
    exact route available.
    """
    if math.gcd(q1 * c1, q2 * c2) != 1:
        raise ArithmeticDomainError(
            f"split moduli {q1 * c1} and {q2 * c2} are not coprime"
        )
    v1 = char_sum_factored(CharSumParams(pair, q1, c1, tuple(w)))
    v2 = char_sum_factored(CharSumParams(pair, q2, c2, tuple(w)))
    params = CharSumParams(pair, q1 * q2, c1 * c2, tuple(w))
    return CharSumValue(v1.value * v2.value, params, "crt-composed")


# ---------------------------------------------------------------------------
# prime-block evaluators (each an exact rearrangement of its defining sum)
# ---------------------------------------------------------------------------


class _ZeroSetMod:
    """Zero set of psi1 mod p with chi_p(psi2) attached to each point."""

    def __init__(self, pair_key: tuple, p: int):
        a, b = pair_key
        count = np.zeros(p, dtype=np.int64)
        root = np.zeros(p, dtype=np.int64)
        for k in range(p):
            v = k * k % p
            if count[v] == 0:
                root[v] = k
            count[v] += 1
        # k4^2 = -t * inv(a4) mod p for t = a1k1^2+a2k2^2+a3k3^2
        kk = np.arange(p, dtype=np.int64)
        sq = kk * kk % p
        t3 = (
            (a[0] % p) * sq[:, None, None]
            + (a[1] % p) * sq[None, :, None]
            + (a[2] % p) * sq[None, None, :]
        ) % p
        if math.gcd(a[3], p) != 1:
            raise PreconditionError(f"p = {p} divides a coefficient of psi1")
        inv_a4 = pow(int(-a[3]) % p, -1, p)
        target = t3 * inv_a4 % p
        nsol = count[target]
        r = root[target]
        i1, i2, i3 = np.nonzero(nsol >= 1)
        first = np.stack([i1, i2, i3, r[i1, i2, i3]], axis=1)
        j1, j2, j3 = np.nonzero(nsol == 2)
        second = np.stack([j1, j2, j3, (p - r[j1, j2, j3]) % p], axis=1)
        self.points = np.concatenate([first, second], axis=0).astype(np.int64)
        psi2_vals = (self.points**2 * np.array(b, dtype=np.int64)).sum(axis=1) % p
        self.chi = legendre_table(p)[psi2_vals].astype(np.float64)
        self.p = p


@lru_cache(maxsize=None)
def _zero_set_mod(pair_key: tuple, p: int) -> _ZeroSetMod:
    return _ZeroSetMod(pair_key, p)


@lru_cache(maxsize=None)
def _unit_block(pair_key: tuple, c: int) -> _UnitBlock:
    return _UnitBlock(pair_key, c)


@lru_cache(maxsize=None)
def _prime_power_block(pair_key: tuple, p: int, s: int) -> _PrimePowerBlock:
    return _PrimePowerBlock(pair_key, p, s)


def _sp1_values(pair: FormPair, p: int, W: np.ndarray) -> np.ndarray:
    """S(p,1; w) for each row of W: direct sum over the zero set of psi1 mod p."""
    zs = _zero_set_mod(_pair_key(pair), p)
    roots = unit_roots(p)
    out = np.empty(len(W), dtype=np.complex128)
    chunk = max(1, int(2e7) // max(len(zs.points), 1))
    for lo in range(0, len(W), chunk):
        dots = zs.points @ (W[lo : lo + chunk].T % p) % p
        out[lo : lo + chunk] = zs.chi @ roots[dots]
    return out


class _UnitBlock:
    """Tables for S(1, p^s; w): separable product of 1-D quadratic sums."""

    def __init__(self, pair_key: tuple, c: int):
        a, _ = pair_key
        kk = np.arange(c, dtype=np.int64)
        roots = unit_roots(c)
        prim = np.array([x for x in range(c) if math.gcd(x, c) == 1] or [0])
        # T[i][a_idx, t] = sum_k e_c(a*a_i*k^2 + t*k)
        self.T = []
        for ai in a:
            quad = np.outer(prim * (ai % c) % c, kk * kk % c) % c  # (phi, c)
            lin = np.outer(np.arange(c), kk) % c  # (t, c)
            # sum over k of roots[(quad[a] + lin[t]) % c] -> (phi, c)
            mat = np.zeros((len(prim), c), dtype=np.complex128)
            for idx in range(len(prim)):
                mat[idx] = roots[(quad[idx][None, :] + lin) % c].sum(axis=1)
            self.T.append(mat)
        self.c = c

    def values(self, W: np.ndarray) -> np.ndarray:
        res = self.T[0][:, W[:, 0] % self.c]
        for i in range(1, 4):
            res = res * self.T[i][:, W[:, i] % self.c]
        return res.sum(axis=0)


class _PrimePowerBlock:
    """Tables for S(p, p^s; w) via the split k = z + p*t, z mod p, t mod p^s.

    Substituting and factoring the additive character gives

      S = sum*_{a mod p^s} sum_{z: psi1(z)=0 mod p} chi_p(psi2(z))
          * e_{p^{s+1}}(a*psi1(z) + w.z)
          * prod_i U_{a,i}[(2*a*a_i*z_i + w_i) mod p^s],

      U_{a,i}[t] = sum_{x mod p^s} e_{p^s}(t*x + p*a*a_i*x^2).

    U_{a,i} vanishes off multiples of p, so z is pinned mod p by (a, w) and
    each (a, w) contributes at most one term.  Exactness of the rearrangement
    is covered by the test suite against the literal sum.
    """

    def __init__(self, pair_key: tuple, p: int, s: int):
        a, b = pair_key
        if math.gcd(2 * a[0] * a[1] * a[2] * a[3], p) != 1:
            raise PreconditionError(f"p = {p} divides 2*alpha")
        ps = p**s
        mod = p ** (s + 1)
        self.p, self.s, self.ps, self.mod = p, s, ps, mod
        self.a = a
        self.b = b
        self.chi = legendre_table(p).astype(np.float64)
        self.roots_mod = unit_roots(mod)
        self.prim = [x for x in range(1, ps) if x % p != 0] or [1]
        roots_ps = unit_roots(ps)
        x = np.arange(ps, dtype=np.int64)
        t = np.arange(ps, dtype=np.int64)
        self.U = {}
        self.inv2aa = {}
        for av in self.prim:
            for i, ai in enumerate(a):
                quad = (p * av % ps) * (ai % ps) % ps * (x * x % ps) % ps
                self.U[(av, i)] = roots_ps[(np.outer(t, x) % ps + quad) % ps].sum(axis=1)
                self.inv2aa[(av, i)] = pow(2 * av * ai % p, -1, p)

    def values(self, W: np.ndarray) -> np.ndarray:
        p, ps, mod = self.p, self.ps, self.mod
        a_co = np.array(self.a, dtype=np.int64)
        out = np.zeros(len(W), dtype=np.complex128)
        Wm = W.astype(np.int64)
        for av in self.prim:
            inv = np.array([self.inv2aa[(av, i)] for i in range(4)], dtype=np.int64)
            z = (-Wm * inv) % p  # (n, 4)
            psi1z = (z * z * a_co).sum(axis=1)
            mask = psi1z % p == 0
            if not mask.any():
                continue
            psi2z = (z * z * np.array(self.b, dtype=np.int64)).sum(axis=1) % p
            chi_v = self.chi[psi2z]
            sig = (2 * av * a_co * z + Wm) % ps
            uprod = np.ones(len(W), dtype=np.complex128)
            for i in range(4):
                uprod *= self.U[(av, i)][sig[:, i]]
            phase = self.roots_mod[(av * psi1z + (Wm * z).sum(axis=1)) % mod]
            out += np.where(mask, chi_v * phase * uprod, 0)
        return out


class _BruteBlock:
    """Fallback block evaluated by the literal sum (small moduli only)."""

    def __init__(self, pair: FormPair, q: int, c: int):
        self.pair, self.q, self.c = pair, q, c

    def values(self, W: np.ndarray) -> np.ndarray:
        return np.array(
            [
                char_sum_brute(CharSumParams(self.pair, self.q, self.c, tuple(w))).value
                for w in W
            ],
            dtype=np.complex128,
        )


class FactoredCharSum:
    """Cached per-(pair, q, c) evaluator for batches of frequency vectors.

    Splits (q, c) into prime blocks by multiplicativity; each block uses its
    fast exact rearrangement when the prime is coprime to 2*alpha (and, for
    the (p, 1) block, does not divide the solved coefficient), falling back
    to the literal sum otherwise.
    """

    def __init__(self, pair: FormPair, q: int, c: int):
        self.params_proto = CharSumParams(pair, q, c, (0, 0, 0, 0))
        key = _pair_key(pair)
        self.blocks = []
        for prime, _ in factorize(q * c) if q * c > 1 else []:
            qp = prime if q % prime == 0 else 1
            sp = 0
            cc = c
            while cc % prime == 0:
                cc //= prime
                sp += 1
            if qp == 1:
                self.blocks.append(_unit_block(key, prime**sp))
            elif sp == 0:
                try:
                    _zero_set_mod(key, prime)
                    self.blocks.append(("sp1", pair, prime))
                except PreconditionError:
                    self.blocks.append(_BruteBlock(pair, prime, 1))
            else:
                try:
                    self.blocks.append(_prime_power_block(key, prime, sp))
                except PreconditionError:
                    self.blocks.append(_BruteBlock(pair, prime, prime**sp))

    def values(self, W: np.ndarray) -> np.ndarray:
        W = np.asarray(W, dtype=np.int64).reshape(-1, 4)
        out = np.ones(len(W), dtype=np.complex128)
        for blk in self.blocks:
            if isinstance(blk, tuple):
                _, pair, prime = blk
                out = out * _sp1_values(pair, prime, W)
            else:
                out = out * blk.values(W)
        return out

    def _block_modulus(self, blk) -> int:
        if isinstance(blk, tuple):
            return blk[2]
        if isinstance(blk, _UnitBlock):
            return blk.c
        if isinstance(blk, _PrimePowerBlock):
            return blk.mod
        return blk.q * blk.c  # _BruteBlock

    def full_table(self, m: int) -> np.ndarray:
        """S on the whole residue grid (Z/m)^4 as an (m,m,m,m) array.

        Each block is periodic mod its own modulus, so its table is built on
        the small grid once and broadcast by residue indexing.
        """
        total = np.ones((m,) * 4, dtype=np.complex128)
        for blk in self.blocks:
            mb = self._block_modulus(blk)
            small = np.stack(
                np.meshgrid(*([np.arange(mb)] * 4), indexing="ij"), axis=-1
            ).reshape(-1, 4)
            if isinstance(blk, tuple):
                tb = _sp1_values(blk[1], blk[2], small)
            else:
                tb = blk.values(small)
            tb = tb.reshape((mb,) * 4)
            idx = np.arange(m) % mb
            total *= tb[np.ix_(idx, idx, idx, idx)]
        return total


def char_sum_factored(params: CharSumParams) -> CharSumValue:
    """S(q,c; w) through the coprime prime-block factorization."""
    ev = FactoredCharSum(params.pair, params.q, params.c)
    val = complex(ev.values(np.array([params.w]))[0])
    return CharSumValue(val, params, "crt-composed")


def char_sum_p1(pair: FormPair, p: int, w) -> CharSumValue:
    """S(p,1; w) by direct summation over the zero set of psi1 mod p."""
    if math.gcd(2 * pair.alpha, p) != 1:
        raise PreconditionError(f"p = {p} divides 2*alpha")
    if p**4 > SP1_CAP:
        raise ScaleError(f"p^4 = {p**4} exceeds cap {SP1_CAP}")
    params = CharSumParams(pair, p, 1, tuple(w))
    val = complex(_sp1_values(pair, p, np.array([params.w]))[0])
    return CharSumValue(val, params, "brute")


def weil_ratio(pair: FormPair, p: int, w) -> float:
    """|S(p,1; w)| / p^{3/2}; hypothesis: p coprime to 2*alpha*D."""
    if p in excluded_primes(pair, include_minors=True) or p == 2:
        raise PreconditionError(f"p = {p} divides 2*alpha*D")
    return abs(char_sum_p1(pair, p, w).value) / p**1.5


def char_sum_ppr(pair: FormPair, p: int, r: int, w) -> CharSumValue:
    """S(p, p^r; w) by the literal capped sum (k mod p^{r+1})."""
    params = CharSumParams(pair, p, p**r, tuple(w))
    if params.term_count > SPPR_CAP:
        raise ScaleError(f"(p^(r+1))^4 = {params.term_count} exceeds cap {SPPR_CAP}")
    return char_sum_brute(params)


def spr_ratio(pair: FormPair, p: int, r: int, w, value: complex | None = None) -> float:
    """|S(p,p^r; w)| / (p^{2r+3/2} * gcd(p^r, dual1(w)))."""
    if math.gcd(2 * pair.alpha, p) != 1:
        raise PreconditionError(f"p = {p} divides 2*alpha")
    if value is None:
        value = char_sum_ppr(pair, p, r, w).value
    g = math.gcd(p**r, abs(dual_form(pair.psi1)(w)))
    return abs(value) / (p ** (2 * r + 1.5) * g)


def char_sum_q1_closed(pair: FormPair, p: int, r: int, w) -> CharSumValue:
    """Closed form of S(1, p^r; w): chi_p(alpha)^r * c_{p^r}(dual1(w)) * p^{2r}."""
    if math.gcd(2 * pair.alpha, p) != 1:
        raise PreconditionError(f"p = {p} divides 2*alpha")
    params = CharSumParams(pair, 1, p**r, tuple(w))
    chi_alpha = legendre(pair.alpha, p)
    val = chi_alpha**r * ramanujan_sum(p**r, dual_form(pair.psi1)(params.w)) * p ** (2 * r)
    return CharSumValue(complex(val), params, "closed")


# ---------------------------------------------------------------------------
# partial-sum scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    X: int
    c: int
    term: complex
    cumulative: complex
    reference: float
    ratio: float


def partial_sum_scan(
    pair: FormPair, q: int, w, X: int, mode: str, q1: int = 1
) -> list[ScanRow]:
    """Cumulative character-sum scans against their reference growth curves.

    mode "q-divides-c":  sum of |S(q,c; w)| over c <= X with q | c, compared
    with q^{3/2} * X'^3.

    mode "coprime-part": signed sum of S(q1,c; w) over c <= X with
    gcd(c, q) = q1, compared with X'^{7/2}; requires dual1(w) = 0.
    """
    w = tuple(int(v) for v in w)
    if mode not in ("q-divides-c", "coprime-part"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if mode == "coprime-part" and dual_form(pair.psi1)(w) != 0:
        raise PreconditionError("coprime-part scan requires dual1(w) = 0")
    rows: list[ScanRow] = []
    if X < 1:
        return rows
    cum = 0.0 + 0.0j
    for c in range(1, X + 1):
        if mode == "q-divides-c":
            if c % q != 0:
                continue
            val = char_sum_factored(CharSumParams(pair, q, c, w)).value
            cum += abs(val)
            ref = q**1.5 * c**3
        else:
            if math.gcd(c, q) != q1:
                continue
            val = char_sum_factored(CharSumParams(pair, q1, c, w)).value
            cum += val
            ref = float(c) ** 3.5
        rows.append(ScanRow(c, c, complex(val), complex(cum), ref, abs(cum) / ref))
    return rows
