"""Character-sum evaluator tests.

The reference implementation below is a deliberately naive double loop over
residues; it anchors the table-driven kernel at small moduli, which in turn
anchors the factored evaluator at larger ones.
"""

import cmath
import math
from itertools import product

import numpy as np
import pytest

from quadpair.charsum import (
    CharSumParams,
    FactoredCharSum,
    admissible_primes,
    char_sum_brute,
    char_sum_crt,
    char_sum_factored,
    char_sum_p1,
    char_sum_ppr,
    char_sum_q1_closed,
    excluded_primes,
    partial_sum_scan,
    spr_ratio,
    weil_ratio,
)
from quadpair.errors import ArithmeticDomainError, PreconditionError, ScaleError
from quadpair.forms import FormPair
from quadpair.modular import jacobi, legendre


def naive_char_sum(pair, q, c, w):
    m = q * c
    total = 0j
    for a in range(c):
        if c > 1 and math.gcd(a, c) != 1:
            continue
        for k in product(range(m), repeat=4):
            psi1 = sum(ai * ki * ki for ai, ki in zip(pair.a, k))
            if psi1 % q:
                continue
            chi = jacobi(sum(bi * ki * ki for bi, ki in zip(pair.b, k)), q)
            if chi == 0:
                continue
            phase = a * psi1 + sum(wi * ki for wi, ki in zip(w, k))
            total += chi * cmath.exp(2j * cmath.pi * (phase % m) / m)
    return total


NAIVE_CASES = [
    (1, 1, (0, 0, 0, 0)),
    (1, 2, (0, 0, 0, 0)),
    (1, 3, (1, 0, 2, 1)),
    (3, 1, (0, 0, 0, 0)),
    (3, 1, (1, 2, 0, 1)),
    (7, 1, (1, 2, 0, 3)),
    (1, 6, (1, 2, 0, 3)),
    (7, 2, (3, 5, 1, 0)),
]


@pytest.mark.parametrize("q,c,w", NAIVE_CASES)
def test_brute_matches_naive(pair, q, c, w):
    got = char_sum_brute(CharSumParams(pair, q, c, w)).value
    want = naive_char_sum(pair, q, c, w)
    assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


@pytest.mark.parametrize("q,c,w", NAIVE_CASES)
def test_factored_matches_naive(pair, q, c, w):
    got = char_sum_factored(CharSumParams(pair, q, c, w)).value
    want = naive_char_sum(pair, q, c, w)
    assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


def test_trivial_examples(pair):
    assert char_sum_brute(CharSumParams(pair, 1, 1, (5, 6, 7, 8))).value == 1
    v = char_sum_brute(CharSumParams(pair, 1, 2, (0, 0, 0, 0))).value
    assert abs(v) < 1e-12  # the 16-term parity sum cancels for this pair


def test_factored_matches_brute_nonzero(pair):
    # a frequency with |S(7,7;w)| = 7^4 * 6 worth of structure
    w = (32, 28, 12, 15)
    vb = char_sum_brute(CharSumParams(pair, 7, 7, w)).value
    vf = char_sum_factored(CharSumParams(pair, 7, 7, w)).value
    assert abs(vb) > 1e4
    assert abs(vb - vf) <= 1e-8 * abs(vb)


def test_prime_power_block_small_pair():
    # alpha = 1 lets p = 3 exercise the z + p*t reduction against the kernel
    small = FormPair((1, 1, 1, 1), (1, 2, 3, 4))
    for (p, s, w) in [(3, 1, (1, 2, 0, 1)), (3, 2, (7, 8, 3, 25)), (3, 2, (20, 22, 9, 14))]:
        vb = char_sum_brute(CharSumParams(small, p, p**s, w)).value
        vf = char_sum_factored(CharSumParams(small, p, p**s, w)).value
        assert abs(vb - vf) <= 1e-7 * max(1.0, abs(vb))


def test_periodicity_and_conjugation(pair):
    ev = FactoredCharSum(pair, 7, 3)
    m = 21
    rng = np.random.default_rng(5)
    W = rng.integers(-40, 40, size=(20, 4))
    v1 = ev.values(W)
    v2 = ev.values(W + m * rng.integers(-3, 4, size=(20, 4)))
    assert np.max(np.abs(v1 - v2)) < 1e-9 * max(1.0, np.max(np.abs(v1)))
    v3 = ev.values(-W)
    assert np.max(np.abs(v3 - v1.conj())) < 1e-9 * max(1.0, np.max(np.abs(v1)))


def test_trivial_bound_invariant(pair):
    for q, c, w in NAIVE_CASES:
        val = char_sum_factored(CharSumParams(pair, q, c, w))
        assert abs(val.value) <= c * (q * c) ** 4


def test_crt_examples(pair):
    w = (1, 2, 0, 3)
    v = char_sum_crt(pair, 1, 2, 1, 3, w)
    whole = char_sum_brute(CharSumParams(pair, 1, 6, w))
    assert abs(v.value - whole.value) <= 1e-5 * max(1.0, abs(whole.value))
    assert char_sum_crt(pair, 1, 1, 1, 1, w).value == 1
    v35 = char_sum_crt(pair, 5, 5, 7, 7, w)
    assert v35.method == "crt-composed"
    assert v35.params.q == 35 and v35.params.c == 35
    with pytest.raises(ArithmeticDomainError):
        char_sum_crt(pair, 7, 1, 7, 1, w)


def test_q1_closed_examples(pair):
    # S(1,7;0) = chi_7(30) * c_7(0) * 49 = 1 * 6 * 49
    val = char_sum_q1_closed(pair, 7, 1, (0, 0, 0, 0))
    assert val.value == pytest.approx(294.0)
    assert legendre(30, 7) == 1
    # a frequency whose dual value is a unit mod 7 flips to the -p^2 branch
    w = (1, 0, 0, 0)  # dual1(w) = 30, divisible by... gcd(30,7)=1
    val2 = char_sum_q1_closed(pair, 7, 1, w)
    assert val2.value == pytest.approx(-49.0 * legendre(30, 7))
    # closed form rejects primes dividing 2*alpha
    with pytest.raises(PreconditionError):
        char_sum_q1_closed(pair, 5, 1, (0, 0, 0, 0))
    # brute cross-check at (p, r) = (5, 2) is replaced by an admissible prime
    vb = char_sum_brute(CharSumParams(pair, 1, 49, (1, 0, 0, 0))).value
    vc = char_sum_q1_closed(pair, 7, 2, (1, 0, 0, 0)).value
    assert abs(vb - vc) <= 1e-6 * max(1.0, abs(vc))


def test_sp1_guards(pair):
    with pytest.raises(PreconditionError):
        char_sum_p1(pair, 3, (0, 0, 0, 0))  # 3 | alpha
    with pytest.raises(PreconditionError):
        weil_ratio(pair, 7, (0, 0, 0, 0))  # 7 | D
    assert weil_ratio(pair, 11, (1, 2, 3, 4)) <= 10.0


def test_excluded_primes(pair):
    assert excluded_primes(pair, include_minors=False) == frozenset({2, 3, 5})
    assert excluded_primes(pair, include_minors=True) == frozenset({2, 3, 5, 7})
    assert admissible_primes(pair, 20, include_minors=True) == [11, 13, 17, 19]
    assert admissible_primes(pair, 20, include_minors=False) == [7, 11, 13, 17, 19]


def test_spr_ratio_and_cap(pair):
    r = spr_ratio(pair, 7, 1, (0, 0, 0, 0))
    assert 0 <= r <= 4.0
    # gcd factor: dual-divisible w against a generic w stays bounded
    r2 = spr_ratio(pair, 7, 1, (7, 0, 0, 0))
    assert r2 <= 4.0
    with pytest.raises(ScaleError):
        char_sum_ppr(pair, 7, 2, (0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        spr_ratio(pair, 5, 1, (0, 0, 0, 0))


def test_scan_modes(pair):
    assert partial_sum_scan(pair, 7, (0, 0, 0, 0), 0, "q-divides-c") == []
    rows = partial_sum_scan(pair, 7, (0, 0, 0, 0), 20, "q-divides-c")
    assert [r.c for r in rows] == [7, 14]
    with pytest.raises(PreconditionError):
        partial_sum_scan(pair, 7, (1, 0, 0, 0), 10, "coprime-part")
    rows2 = partial_sum_scan(pair, 7, (1, 2, 3, 0), 10, "coprime-part")
    assert [r.c for r in rows2] == [1, 2, 3, 4, 5, 6, 8, 9, 10]
    assert rows2[0].cumulative == pytest.approx(1.0)  # S(1,1) = 1
    with pytest.raises(PreconditionError):
        partial_sum_scan(pair, 7, (0, 0, 0, 0), 10, "bogus-mode")


def test_params_validation(pair):
    with pytest.raises(PreconditionError):
        CharSumParams(pair, 15, 0, (0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        CharSumParams(pair, 4, 1, (0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        CharSumParams(pair, 9, 1, (0, 0, 0, 0))
    with pytest.raises(ScaleError):
        char_sum_brute(CharSumParams(pair, 7, 35, (0, 0, 0, 0)))


def test_full_table_consistency(pair):
    ev = FactoredCharSum(pair, 7, 2)
    m = 14
    table = ev.full_table(m)
    grid = np.stack(np.meshgrid(*([np.arange(m)] * 4), indexing="ij"), axis=-1)
    direct = ev.values(grid.reshape(-1, 4)).reshape((m,) * 4)
    assert np.max(np.abs(table - direct)) < 1e-9
