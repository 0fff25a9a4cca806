# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: octant enumeration and the literal character-sum loop."""

from libc.math cimport sqrt

import numpy as np


def enumerate_octant(coeffs, int B):
    """Nonnegative zero representatives of a diagonal quaternary form."""
    cdef long long c1 = coeffs[0], c2 = coeffs[1], c3 = coeffs[2], c4 = coeffs[3]
    cdef Py_ssize_t cap, n, i
    cdef long long x1, x2, x3, t, s, r, t1, t12
    cdef long long[:, ::1] buf
    cdef long long[:, ::1] mv

    if c4 == 0:
        raise ValueError("last coefficient must be nonzero")
    if B < 0:
        return np.empty((0, 4), dtype=np.int64)

    cap = 4096
    arr = np.empty((cap, 4), dtype=np.int64)
    buf = arr
    n = 0
    for x1 in range(B + 1):
        t1 = -c1 * x1 * x1
        for x2 in range(B + 1):
            t12 = t1 - c2 * x2 * x2
            for x3 in range(B + 1):
                t = t12 - c3 * x3 * x3
                if t % c4 != 0:
                    continue
                s = t / c4
                if s < 0:
                    continue
                r = <long long> sqrt(<double> s)
                while (r + 1) * (r + 1) <= s:
                    r += 1
                while r * r > s:
                    r -= 1
                if r * r != s or r > B:
                    continue
                if n == cap:
                    cap *= 2
                    newarr = np.empty((cap, 4), dtype=np.int64)
                    newarr[:n] = arr[:n]
                    arr = newarr
                    buf = arr
                buf[n, 0] = x1
                buf[n, 1] = x2
                buf[n, 2] = x3
                buf[n, 3] = r
                n += 1
    return arr[:n].copy()


def char_sum_brute_sum(int m, int q,
                       long long[:, ::1] s1, long long[:, ::1] s2,
                       long long[:, ::1] wk,
                       double complex[::1] A, double[::1] chi,
                       double complex[::1] E):
    """Literal four-fold loop over k mod m with per-coordinate residue tables."""
    cdef Py_ssize_t k1, k2, k3, k4
    cdef long long u1, u12, u123, u
    cdef long long v1, v12, v123, v
    cdef long long t1, t12, t123, t
    cdef double complex acc = 0
    cdef double c
    for k1 in range(m):
        u1 = s1[0, k1]; v1 = s2[0, k1]; t1 = wk[0, k1]
        for k2 in range(m):
            u12 = u1 + s1[1, k2]; v12 = v1 + s2[1, k2]; t12 = t1 + wk[1, k2]
            for k3 in range(m):
                u123 = u12 + s1[2, k3]; v123 = v12 + s2[2, k3]; t123 = t12 + wk[2, k3]
                for k4 in range(m):
                    v = (v123 + s2[3, k4]) % q
                    c = chi[v]
                    if c == 0.0:
                        continue
                    u = (u123 + s1[3, k4]) % m
                    if u % q != 0:
                        continue
                    t = (t123 + wk[3, k4]) % m
                    acc = acc + c * A[u] * E[t]
    return complex(acc)
