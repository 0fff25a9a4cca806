import math

import numpy as np
import pytest

from quadpair.counting import (
    CountRecord,
    admissible_q,
    count_isotropic_w,
    count_M,
    count_M_star,
    count_N_proxy,
    enumerate_psi1_zeros,
    fit_exponent,
    multiplicities,
    prime_set,
    sieve_decompose,
    t_q,
    zero_representatives,
)
from quadpair.errors import ArithmeticDomainError, PreconditionError
from quadpair.forms import FormPair, dual_form
from quadpair.modular import legendre


def naive_zeros(pair, B):
    r = np.arange(-B, B + 1)
    X = np.meshgrid(r, r, r, r, indexing="ij")
    psi1 = sum(a * x * x for a, x in zip(pair.a, X))
    idx = np.nonzero(psi1 == 0)
    return set(zip(*(x[idx] for x in X)))


@pytest.mark.parametrize("B", [0, 1, 7, 30])
def test_enumeration_matches_naive(pair, B):
    got = set(enumerate_psi1_zeros(pair, B))
    assert got == naive_zeros(pair, B)


def test_enumeration_definite_form():
    definite = FormPair((1, 2, 3, 5), (1, 1, 1, 1))
    assert set(enumerate_psi1_zeros(definite, 10)) == {(0, 0, 0, 0)}


def test_zero_reps_B1(pair):
    reps = zero_representatives(pair.a, 1)
    assert sorted(map(tuple, reps)) == [(0, 0, 0, 0), (1, 1, 1, 0)]
    assert int(multiplicities(reps).sum()) == 9


def test_count_M_examples(pair):
    assert count_M(pair, 0) == 1
    assert count_M(pair, 1) == 1
    # monotone under box nesting
    vals = [count_M(pair, B) for B in (5, 10, 20, 40)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_count_M_star_dominated(pair):
    for B in (1, 20, 50):
        ms = count_M_star(pair, B)
        assert 0.0 < ms <= count_M(pair, B)
    assert count_M_star(pair, 0) == pytest.approx(1.0)


def test_count_M_star_two_pass_oracle(pair):
    # independent two-pass evaluation: enumerate everything, then filter
    from quadpair.forms import is_perfect_square
    from quadpair.oscint import DEFAULT_WEIGHT

    B = 50
    total = 0.0
    for x in enumerate_psi1_zeros(pair, B):
        v = sum(b * xi * xi for b, xi in zip(pair.b, x))
        if v >= 0 and is_perfect_square(v):
            total += float(DEFAULT_WEIGHT(np.array(x) / B))
    assert count_M_star(pair, B) == pytest.approx(total, rel=1e-12)


def naive_n_proxy(pair, B):
    count = 0
    for x in enumerate_psi1_zeros(pair, B):
        if x[0] <= 0:
            continue
        v = sum(b * xi * xi for b, xi in zip(pair.b, x))
        if v < 0:
            continue
        s = math.isqrt(v)
        if s * s != v or s > B:
            continue
        for x5 in {s, -s}:
            g = math.gcd(math.gcd(abs(x[1]), abs(x[2])),
                         math.gcd(abs(x[3]), math.gcd(x[0], abs(x5))))
            if g == 1:
                count += 1
    return count


def test_count_N_proxy(pair):
    assert count_N_proxy(pair, 0) == 0
    for B in (1, 5, 12):
        assert count_N_proxy(pair, B) == naive_n_proxy(pair, B)
        assert count_N_proxy(pair, B) <= 2 * count_M(pair, B)
    # a second pair to exercise nontrivial five-variable points
    other = FormPair((1, -2, 2, -1), (3, 1, 1, 2))
    for B in (2, 5):
        assert count_N_proxy(other, B) == naive_n_proxy(other, B)


def test_t_q_examples(pair):
    assert t_q(pair, 7, 0) == 0.0  # chi_7(psi2(0)) = chi_7(0) = 0
    assert t_q(pair, 1, 20) > 0.0  # trivial character counts smooth mass
    with pytest.raises(PreconditionError):
        t_q(pair, 15, 10)
    with pytest.raises(PreconditionError):
        t_q(pair, 9, 10)


def test_t_q_domination_and_reduction(pair):
    from quadpair.oscint import DEFAULT_WEIGHT

    B, q = 30, 77
    val = t_q(pair, q, B)
    mass = 0.0
    byhand = 0.0
    for x in enumerate_psi1_zeros(pair, B):
        wv = float(DEFAULT_WEIGHT(np.array(x) / B))
        mass += wv
        v = sum(b * xi * xi for b, xi in zip(pair.b, x))
        byhand += wv * legendre(v, 7) * legendre(v, 11)
    assert abs(val) <= mass + 1e-9
    assert val == pytest.approx(byhand, rel=1e-10)


def test_admissible_q(pair):
    assert admissible_q(pair, 1)
    assert admissible_q(pair, 7)
    assert admissible_q(pair, 77)
    assert admissible_q(pair, 91)
    assert not admissible_q(pair, 15)
    assert not admissible_q(pair, 49)
    assert not admissible_q(pair, 2)


def test_isotropic_count(pair):
    assert count_isotropic_w(pair, 0) == 0
    dual = dual_form(pair.psi1)
    for R in (3, 10):
        r = np.arange(-R, R + 1)
        X = np.meshgrid(r, r, r, r, indexing="ij")
        vals = sum(c * x * x for c, x in zip(dual.coeffs, X))
        naive = int((vals == 0).sum()) - 1
        assert count_isotropic_w(pair, R) == naive


def test_isotropic_growth(pair):
    c1 = count_isotropic_w(pair, 25)
    c2 = count_isotropic_w(pair, 50)
    c3 = count_isotropic_w(pair, 100)
    assert c2 / max(c1, 1) <= 6 * 2**2.2
    assert c3 / max(c2, 1) <= 6 * 2**2.2


def test_fit_exponent_synthetic():
    fit = fit_exponent([(B, B * B) for B in (10, 20, 40, 80)])
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.stderr == pytest.approx(0.0, abs=1e-10)
    fit2 = fit_exponent([(B, 3.7 * B ** (5 / 3)) for B in (10, 20, 40)])
    assert fit2.slope == pytest.approx(5 / 3, abs=1e-9)
    with pytest.raises(ArithmeticDomainError):
        fit_exponent([(10, 1.0), (20, 2.0)])
    with pytest.warns(UserWarning):
        with pytest.raises(ArithmeticDomainError):
            fit_exponent([(10, 1.0), (20, 0.0), (40, 2.0)])


def test_prime_set(pair):
    ps = prime_set(pair, 4)
    assert len(ps) == 4
    assert all(p > 4 * math.log(4) for p in ps)
    assert 7 not in ps  # divides the minor product
    ps50 = prime_set(pair, 50)
    assert len(ps50) == 50
    assert ps50[0] > 50 * math.log(50)
    with pytest.raises(PreconditionError):
        prime_set(pair, 0)


def test_sieve_decompose(pair):
    dec = sieve_decompose(pair, 50, 50)
    assert dec.mstar <= dec.majorant_rhs + dec.zero_mass + 1e-9
    assert dec.zero_mass == pytest.approx(1.0)  # only the origin has psi2 = 0
    assert dec.majorant_rhs == pytest.approx(dec.diagonal_term + dec.offdiag_term)
    assert dec.domination_failures == 0
    with pytest.raises(PreconditionError):
        sieve_decompose(pair, 50, 4)  # max psi2 exceeds e^P
    dec2 = sieve_decompose(pair, 50, 4, enforce_range=False)
    assert dec2.domination_failures == 0


def test_count_record_shape():
    rec = CountRecord(10, "M", 0, 1.0, 2.0, 0.5, 0.01)
    assert rec.ratio == 0.5
