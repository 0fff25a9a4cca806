"""Diagonal quaternary quadratic forms and compatible pairs.

A diagonal form is psi(x) = g1*x1^2 + g2*x2^2 + g3*x3^2 + g4*x4^2 with
nonzero integer coefficients.  A pair (psi1, psi2) is *compatible* when all
six 2x2 minors of the coefficient matrix are nonzero and the product
alpha = a1*a2*a3*a4 of the first row is not a perfect square.  The dual form
of psi has coefficients gamma/g_i with gamma = g1*g2*g3*g4; its values at
integer vectors steer all prime-power exponential-sum evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputTooLargeError, InvalidFormError, PreconditionError

#: coefficients must satisfy |g_i| < 2**31 and evaluation points |x_i| <= 2**30
#: so every derived product stays inside signed 128-bit range.
COEFF_BOUND = 2**31
EVAL_BOUND = 2**30

Vec4 = tuple[int, int, int, int]

# index pairs (i < j) for the six 2x2 minors, in reporting order
MINOR_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _as_vec4(x) -> Vec4:
    t = tuple(int(v) for v in x)
    if len(t) != 4:
        raise InvalidFormError(f"expected 4 components, got {len(t)}")
    return t  # type: ignore[return-value]


@dataclass(frozen=True)
class DiagonalForm:
    """Integer diagonal quadratic form in four variables."""

    coeffs: Vec4

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_vec4(self.coeffs))
        for g in self.coeffs:
            if g == 0:
                raise InvalidFormError("diagonal coefficients must be nonzero")
            if abs(g) >= COEFF_BOUND:
                raise InvalidFormError(f"|coefficient| {abs(g)} exceeds 2^31")

    @property
    def product(self) -> int:
        g1, g2, g3, g4 = self.coeffs
        return g1 * g2 * g3 * g4

    def __call__(self, x) -> int:
        return eval_form(self, x)


def eval_form(form: DiagonalForm, x) -> int:
    """Evaluate the form at an integer 4-vector, exactly."""
    xv = _as_vec4(x)
    for xi in xv:
        if abs(xi) > EVAL_BOUND:
            raise InputTooLargeError(f"|x_i| = {abs(xi)} exceeds 2^30")
    return sum(g * xi * xi for g, xi in zip(form.coeffs, xv))


@dataclass(frozen=True)
class DualForm:
    """Diagonal form with coefficients gamma/g_i; gamma the coefficient product."""

    coeffs: Vec4
    gamma: int

    def __call__(self, x) -> int:
        xv = _as_vec4(x)
        return sum(g * xi * xi for g, xi in zip(self.coeffs, xv))


def dual_form(form: DiagonalForm) -> DualForm:
    """The dual diagonal form: coefficient i becomes gamma/g_i (exact division)."""
    gamma = form.product
    return DualForm(tuple(gamma // g for g in form.coeffs), gamma)


@dataclass(frozen=True)
class CompatibilityReport:
    minors: tuple[int, ...]
    alpha: int
    D: int
    is_compatible: bool
    reason: str


@dataclass(frozen=True)
class FormPair:
    """A pair of diagonal quaternary forms with derived invariants."""

    a: Vec4
    b: Vec4

    def __post_init__(self):
        object.__setattr__(self, "a", _as_vec4(self.a))
        object.__setattr__(self, "b", _as_vec4(self.b))
        DiagonalForm(self.a)  # validates bounds / nonzero
        DiagonalForm(self.b)

    @property
    def psi1(self) -> DiagonalForm:
        return DiagonalForm(self.a)

    @property
    def psi2(self) -> DiagonalForm:
        return DiagonalForm(self.b)

    @property
    def alpha(self) -> int:
        a1, a2, a3, a4 = self.a
        return a1 * a2 * a3 * a4

    @property
    def minors(self) -> tuple[int, ...]:
        return tuple(
            self.a[i] * self.b[j] - self.a[j] * self.b[i] for i, j in MINOR_PAIRS
        )

    @property
    def D(self) -> int:
        prod = 1
        for m in self.minors:
            prod *= m
        return prod

    @property
    def dual1(self) -> DualForm:
        return dual_form(self.psi1)


def check_compatibility(pair: FormPair) -> CompatibilityReport:
    """Compatibility test: six nonzero minors and alpha not a perfect square."""
    minors = pair.minors
    alpha = pair.alpha
    D = pair.D
    for idx, m in enumerate(minors):
        if m == 0:
            i, j = MINOR_PAIRS[idx]
            return CompatibilityReport(
                minors, alpha, D, False, f"minor ({i + 1},{j + 1}) is zero"
            )
    if is_perfect_square(alpha):
        return CompatibilityReport(
            minors, alpha, D, False, f"alpha = {alpha} is a perfect square"
        )
    return CompatibilityReport(minors, alpha, D, True, "compatible")


@dataclass(frozen=True)
class PencilCoeffs:
    """Coefficients of psi2 + ell*psi1 reduced modulo an odd prime."""

    c: Vec4
    ell: int
    p: int


def pencil(pair: FormPair, ell: int, p: int) -> PencilCoeffs:
    """Pencil form coefficients c_i = b_i + ell*a_i mod p, reduced to [0, p)."""
    if p < 3 or p % 2 == 0:
        raise PreconditionError(f"p = {p} must be an odd prime")
    c = tuple((bi + ell * ai) % p for ai, bi in zip(pair.a, pair.b))
    return PencilCoeffs(c, ell % p, p)


def is_perfect_square(n: int) -> bool:
    """True iff n is a square of an integer; 0 counts as a square."""
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


#: the pair used throughout the experiment defaults: compatible, psi1
#: indefinite, alpha = 30 squarefree.
CANONICAL_PAIR = FormPair((1, 2, -3, -5), (1, 1, 1, 1))
