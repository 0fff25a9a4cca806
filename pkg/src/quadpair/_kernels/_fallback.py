"""Pure numpy implementations of the hot kernels."""

from __future__ import annotations

import numpy as np


def enumerate_octant(coeffs, B: int) -> np.ndarray:
    """Nonnegative zero representatives of a diagonal quaternary form.

    Solves c4*x4^2 = -(c1*x1^2 + c2*x2^2 + c3*x3^2) over 0 <= x1,x2,x3 <= B
    and keeps integer solutions 0 <= x4 <= B.  Returns an (n, 4) int64 array.
    """
    c1, c2, c3, c4 = (int(c) for c in coeffs)
    if c4 == 0:
        raise ValueError("last coefficient must be nonzero")
    if B < 0:
        return np.empty((0, 4), dtype=np.int64)
    x = np.arange(B + 1, dtype=np.int64)
    sq = x * x
    g23 = c2 * sq[:, None] + c3 * sq[None, :]  # (x2, x3) grid
    out = []
    for x1 in range(B + 1):
        t = -(c1 * sq[x1] + g23)
        s, rem = np.divmod(t, c4)
        ok = (rem == 0) & (s >= 0)
        if not ok.any():
            continue
        sv = np.where(ok, s, 0)
        r = np.sqrt(sv.astype(np.float64)).astype(np.int64)
        # correct any float rounding of the integer sqrt
        r = np.where((r + 1) * (r + 1) <= sv, r + 1, r)
        r = np.where(r * r > sv, r - 1, r)
        ok &= (r * r == sv) & (r <= B)
        if not ok.any():
            continue
        i2, i3 = np.nonzero(ok)
        n = len(i2)
        rows = np.empty((n, 4), dtype=np.int64)
        rows[:, 0] = x1
        rows[:, 1] = i2
        rows[:, 2] = i3
        rows[:, 3] = r[i2, i3]
        out.append(rows)
    if not out:
        return np.empty((0, 4), dtype=np.int64)
    return np.concatenate(out, axis=0)


def char_sum_brute_sum(m, q, s1, s2, wk, A, chi, E) -> complex:
    """Residue-class aggregation of the four-fold character sum.

    Counts n[u, v, t] = #{k in (Z/m)^4 : psi1(k) = u (m), psi2(k) = v (q),
    w.k = t (m)} by cyclic FFT convolution of the per-coordinate indicator
    tensors, rounds the counts back to exact integers, then contracts with
    the weights A[u] (primitive a-sum), chi[v], E[t].
    """
    m = int(m)
    q = int(q)
    shape = (m, q, m)
    fprod = None
    for i in range(4):
        d = np.zeros(shape, dtype=np.float64)
        np.add.at(d, (s1[i] % m, s2[i] % q, wk[i] % m), 1.0)
        f = np.fft.rfftn(d)
        fprod = f if fprod is None else fprod * f
    counts = np.fft.irfftn(fprod, s=shape, axes=(0, 1, 2))
    counts = np.rint(counts)
    u = np.arange(m)
    sel = (u % q) == 0
    weighted = counts[sel] * A[sel][:, None, None]
    return complex(np.einsum("uvt,v,t->", weighted, chi.astype(np.complex128), E))
