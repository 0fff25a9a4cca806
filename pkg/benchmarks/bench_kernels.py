#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Run after an editable install:

    python benchmarks/bench_kernels.py
"""

import math
import time

import numpy as np

from quadpair import _kernels
from quadpair._kernels import _fallback
from quadpair.forms import CANONICAL_PAIR
from quadpair.modular import unit_roots


def timed(fn, *args, repeat=3):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_enumeration():
    print("zero-set enumeration (octant representatives)")
    for B in (100, 200, 400):
        t_fb, r_fb = timed(_fallback.enumerate_octant, CANONICAL_PAIR.a, B)
        line = f"  B={B:4d}: fallback {t_fb*1e3:9.1f} ms ({len(r_fb)} reps)"
        if _kernels.BACKEND == "compiled":
            t_c, r_c = timed(_kernels._core.enumerate_octant, CANONICAL_PAIR.a, B)
            assert len(r_c) == len(r_fb)
            line += f" | compiled {t_c*1e3:9.1f} ms | speedup {t_fb/t_c:5.1f}x"
        print(line)


def _char_sum_args(q, c, w):
    pair = CANONICAL_PAIR
    m = q * c
    k = np.arange(m, dtype=np.int64)
    ksq = k * k % m
    s1 = np.stack([(ai % m) * ksq % m for ai in pair.a])
    s2 = np.stack([(bi % q) * (k * k % q) % q for bi in pair.b])
    wk = np.stack([(wi % m) * k % m for wi in w])
    roots = unit_roots(m)
    prim = np.array([a for a in range(c) if math.gcd(a, c) == 1] or [0])
    A = roots[np.outer(prim, np.arange(m)) % m].sum(axis=0).astype(np.complex128)
    from quadpair.charsum import _chi_table, _q_factors

    chi = _chi_table(_q_factors(q), q) if q > 1 else np.ones(1)
    return m, q, s1, s2, wk, A, chi, roots


def bench_char_sum():
    print("complete character sum, literal k-loop over (Z/qc)^4")
    for q, c, w in ((7, 7, (32, 28, 12, 15)), (7, 14, (3, 1, 4, 1)), (35, 5, (1, 2, 0, 3))):
        args = _char_sum_args(q, c, w)
        t_fb, v_fb = timed(_fallback.char_sum_brute_sum, *args, repeat=1)
        line = f"  q={q:2d} c={c:2d} (m^4 = {(q*c)**4:.1e}): fallback {t_fb*1e3:9.1f} ms"
        if _kernels.BACKEND == "compiled":
            t_c, v_c = timed(_kernels._core.char_sum_brute_sum, *args, repeat=1)
            assert abs(v_c - v_fb) <= 1e-8 * max(1.0, abs(v_c))
            line += f" | compiled {t_c*1e3:9.1f} ms | speedup {t_fb/t_c:5.1f}x"
        print(line)


if __name__ == "__main__":
    print(f"active backend: {_kernels.BACKEND}")
    bench_enumeration()
    bench_char_sum()
