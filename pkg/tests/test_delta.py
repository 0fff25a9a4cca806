import math

import mpmath
import numpy as np
import pytest

from quadpair.delta import (
    DeltaKernel,
    bump_w0,
    compute_cQ,
    delta_reconstruct,
    h_function,
)
from quadpair.errors import InputTooLargeError, PreconditionError


def test_bump_support_and_normalization():
    assert bump_w0(0.4) == 0.0
    assert bump_w0(1.0) == 0.0
    assert bump_w0(0.5) == 0.0
    assert bump_w0(0.75) > 0.0
    # independent high-precision quadrature oracle
    mpmath.mp.dps = 30
    k = float(bump_w0(0.75)) / float(mpmath.exp(-1 / ((mpmath.mpf(3) / 4 - mpmath.mpf(1) / 2) * (1 - mpmath.mpf(3) / 4))))
    val = mpmath.quad(lambda t: k * mpmath.exp(-1 / ((t - mpmath.mpf(1) / 2) * (1 - t))), [mpmath.mpf(1) / 2, 1])
    assert abs(float(val) - 1.0) < 1e-12


def test_bump_vector_matches_scalar():
    ts = np.linspace(0, 1.2, 50)
    vec = bump_w0(ts)
    for t, v in zip(ts, vec):
        assert v == pytest.approx(bump_w0(float(t)), abs=0.0)


def test_h_support_examples():
    assert h_function(2.0, 0.3) == 0.0
    v = h_function(0.9, 0.0)
    assert v == pytest.approx(bump_w0(0.9) / 0.9)
    with pytest.raises(PreconditionError):
        h_function(0.0, 1.0)


def test_h_support_grid():
    xs = np.linspace(0.05, 2.0, 100)
    ys = np.linspace(-2.0, 2.0, 100)
    for x in xs:
        vals = h_function(float(x), ys)
        dead = float(x) > np.maximum(1.0, 2.0 * np.abs(ys))
        assert not np.any(vals[dead] != 0.0)


def test_h_scaling_envelope_stable():
    def sup_xh(grid):
        xs = np.linspace(0.01, 2.0, grid)
        ys = np.linspace(-2.0, 2.0, grid)
        return max(float(np.abs(h_function(float(x), ys)).max() * x) for x in xs)

    coarse, fine = sup_xh(100), sup_xh(200)
    assert fine <= coarse * 1.10 + 1e-9


def test_cQ_values_and_guards():
    assert compute_cQ(10.0) == pytest.approx(1.03306644, abs=1e-6)
    assert abs(compute_cQ(10.0) - 1.0) < 0.2
    with pytest.raises(PreconditionError):
        compute_cQ(1.5)
    with pytest.raises(PreconditionError):
        compute_cQ(2.0)  # open interval (1, 2) holds no integer


def test_cQ_decay_trend():
    errs = [abs(compute_cQ(Q) - 1.0) for Q in (8, 16, 32, 64)]
    assert all(e2 <= e1 for e1, e2 in zip(errs, errs[1:]))


def test_reconstruction_examples():
    k10 = DeltaKernel.build(10)
    assert delta_reconstruct(k10, 0) == pytest.approx(1.0, abs=1e-9)
    assert delta_reconstruct(k10, 7) == pytest.approx(0.0, abs=1e-9)
    k8 = DeltaKernel.build(8)
    assert delta_reconstruct(k8, -50) == pytest.approx(0.0, abs=1e-9)


def test_reconstruction_exact_and_even():
    for Q in (5, 12):
        kernel = DeltaKernel.build(Q)
        for n in range(0, Q * Q + 1, 7):
            v_plus = delta_reconstruct(kernel, n)
            v_minus = delta_reconstruct(kernel, -n)
            assert v_plus == pytest.approx(v_minus, abs=1e-12)
            target = 1.0 if n == 0 else 0.0
            assert v_plus == pytest.approx(target, abs=1e-9)


def test_reconstruction_beyond_Q_squared():
    # the q-truncation adapts, so exactness survives |n| > Q^2
    kernel = DeltaKernel.build(5)
    for n in (26, 100, 313):
        assert delta_reconstruct(kernel, n) == pytest.approx(0.0, abs=1e-9)


def test_reconstruction_cap():
    kernel = DeltaKernel.build(5)
    with pytest.raises(InputTooLargeError):
        delta_reconstruct(kernel, 10**6 + 1)
