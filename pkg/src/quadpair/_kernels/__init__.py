"""Hot-loop kernels: compiled extension when available, numpy fallback otherwise.

Both backends expose the same two functions:

``enumerate_octant(coeffs, B)``
    All nonnegative representatives (x1,x2,x3,x4) with x_i <= B and
    c1*x1^2 + c2*x2^2 + c3*x3^2 + c4*x4^2 = 0; every zero of the form in the
    full box [-B,B]^4 is a sign pattern of exactly one representative.

``char_sum_brute_sum(m, q, s1, s2, wk, A, chi, E)``
    sum over k in (Z/m)^4 of [psi1(k) = 0 mod q] * chi[psi2(k) mod q]
    * A[psi1(k) mod m] * E[w.k mod m], given per-coordinate residue tables
    s1[i][k] = a_i k^2 mod m, s2[i][k] = b_i k^2 mod q, wk[i][k] = w_i k mod m.
    The compiled backend runs the literal four-fold loop; the fallback
    aggregates exact residue-class counts by FFT convolution.
"""

import os

from . import _fallback

try:
    if os.environ.get("QUADPAIR_FORCE_FALLBACK"):
        raise ImportError("fallback forced by QUADPAIR_FORCE_FALLBACK")
    from . import _core

    BACKEND = "compiled"
    enumerate_octant = _core.enumerate_octant
    char_sum_brute_sum = _core.char_sum_brute_sum
except ImportError:  # extension not built (or fallback forced)
    _core = None
    BACKEND = "fallback"
    enumerate_octant = _fallback.enumerate_octant
    char_sum_brute_sum = _fallback.char_sum_brute_sum

__all__ = ["BACKEND", "enumerate_octant", "char_sum_brute_sum", "_fallback", "_core"]
