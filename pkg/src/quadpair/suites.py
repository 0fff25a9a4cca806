"""Verification suites: closed-form identities and empirical bound checks.

Each suite computes its grid, emits report rows, and checks its assertions;
``harness.run_verify`` composes them and the acceptance tests call them with
the pinned grids and tolerances.
"""

from __future__ import annotations

import itertools
import math
import time

import numpy as np

from . import constants
from .charsum import (
    CharSumParams,
    FactoredCharSum,
    admissible_primes,
    char_sum_brute,
    char_sum_crt,
    char_sum_factored,
    char_sum_q1_closed,
    partial_sum_scan,
    spr_ratio,
    weil_ratio,
)
from .config import Report, record
from .counting import prime_set, sieve_decompose
from .delta import DeltaKernel, delta_reconstruct, h_function
from .forms import CANONICAL_PAIR, DiagonalForm, FormPair, dual_form
from .modular import (
    exp_sum_quad4_brute,
    exp_sum_quad4_closed,
    factorize,
    gauss_sum,
    legendre,
    quad_gauss_sum_brute,
    quad_gauss_sum_closed,
)
from .oscint import (
    IntegralParams,
    c_support_limit,
    i_qc,
    i_qc_batch,
    support_empty,
)


def suite_delta(Q_list=(5, 10, 20, 40), tolerance=1e-9, n_cap=None) -> Report:
    """Reconstruction of the zero indicator is exact for |n| <= Q^2."""
    rep = Report()
    for Q in Q_list:
        kernel = DeltaKernel.build(Q)
        nmax = int(Q * Q) if n_cap is None else min(int(Q * Q), n_cap)
        worst = 0.0
        t0 = time.time()
        for n in range(-nmax, nmax + 1):
            err = abs(delta_reconstruct(kernel, n) - (1.0 if n == 0 else 0.0))
            worst = max(worst, err)
        rep.records.append(record(
            "delta-check", B=nmax, q_or_P=int(Q), value_re=worst,
            bound=tolerance,
            ratio=worst / tolerance if tolerance else float("inf"),
            seconds=time.time() - t0,
        ))
        rep.check(f"delta Q={Q}", worst <= tolerance, f"max err {worst:.3e}")
        rep.summary[f"delta_max_err_Q{Q}"] = worst
    return rep


def suite_quad_gauss(tolerance=1e-6) -> Report:
    """1-D quadratic Gauss sums: closed form against direct summation."""
    rep = Report()
    worst = 0.0
    t0 = time.time()
    for p in (3, 5, 7, 11):
        tau = gauss_sum(p)
        rep.check(
            f"|tau({p})|^2 = p",
            abs(abs(tau) ** 2 - p) <= 1e-6 * p,
            f"{abs(tau)**2}",
        )
        for r in (1, 2, 3):
            if p**r > 1331:
                continue
            for m, gamma in itertools.product((1, 2), (1, 2, 3)):
                if (2 * m * gamma) % p == 0:
                    continue
                closed = quad_gauss_sum_closed(m, gamma, p, r)
                brute = quad_gauss_sum_brute(m, gamma, p, r)
                err = abs(closed - brute) / abs(brute)
                worst = max(worst, err)
    rep.records.append(record(
        "verify", value_re=worst, bound=tolerance,
        ratio=worst / tolerance if tolerance else float("inf"),
        seconds=time.time() - t0,
    ))
    rep.check("quadratic Gauss closed=brute", worst <= tolerance, f"{worst:.2e}")
    rep.summary["quad_gauss_max_rel_err"] = worst
    return rep


def suite_quad4(tolerance=1e-6, pair: FormPair = CANONICAL_PAIR) -> Report:
    """Four-variable complete sums: closed form against the full lattice sum."""
    rep = Report()
    worst = 0.0
    t0 = time.time()
    ones = DiagonalForm((1, 1, 1, 1))
    for p in (3, 5, 7):
        for r in (1, 2):
            for w in itertools.product((0, 1), repeat=4):
                closed = exp_sum_quad4_closed(ones, 1, w, p, r)
                brute = exp_sum_quad4_brute(ones, 1, w, p, r)
                worst = max(worst, abs(closed - brute) / abs(brute))
    # a case with the experiment pair's coefficient form (admissible p only)
    psi1 = pair.psi1
    for p in (7,):
        if (2 * psi1.product) % p != 0:
            closed = exp_sum_quad4_closed(psi1, 1, (1, 0, 0, 0), p, 1)
            brute = exp_sum_quad4_brute(psi1, 1, (1, 0, 0, 0), p, 1)
            worst = max(worst, abs(closed - brute) / abs(brute))
    rep.records.append(record(
        "verify", value_re=worst, bound=tolerance, ratio=worst / tolerance,
        seconds=time.time() - t0,
    ))
    rep.check("quartic sums closed=brute", worst <= tolerance, f"{worst:.2e}")
    rep.summary["quad4_max_rel_err"] = worst
    return rep


def suite_s1pr(pair: FormPair = CANONICAL_PAIR, primes=(7, 11, 13), rs=(1, 2),
               w_range=(0, 1, 2)) -> Report:
    """S(1, p^r; w) closed form is an exact integer match with summation."""
    rep = Report()
    worst = 0.0
    t0 = time.time()
    for p in primes:
        for r in rs:
            ev = FactoredCharSum(pair, 1, p**r)
            W = np.array(list(itertools.product(w_range, repeat=4)), dtype=np.int64)
            vals = ev.values(W)
            for w, val in zip(W, vals):
                closed = char_sum_q1_closed(pair, p, r, tuple(int(x) for x in w))
                err = abs(val - closed.value)
                worst = max(worst, err)
                rounded = complex(round(val.real), round(val.imag))
                rep.check(
                    f"S(1,{p}^{r};{tuple(int(x) for x in w)}) integer match",
                    rounded == closed.value,
                    f"sum {val} vs closed {closed.value}",
                )
    # literal-kernel spot checks of the factored summation route
    for (p, r, w) in ((7, 1, (1, 2, 0, 1)), (7, 2, (0, 1, 1, 2)), (11, 1, (2, 0, 1, 0))):
        lit = char_sum_brute(CharSumParams(pair, 1, p**r, w)).value
        fac = char_sum_factored(CharSumParams(pair, 1, p**r, w)).value
        rep.check(
            f"S(1,{p}^{r}) literal spot check", abs(lit - fac) <= 1e-6 * max(1, abs(lit)),
            f"{lit} vs {fac}",
        )
    rep.records.append(record("verify", value_re=worst, seconds=time.time() - t0))
    rep.summary["s1pr_max_abs_err"] = worst
    return rep


CRT_SPLITS = (
    (1, 1, 1, 1),
    (1, 2, 1, 3),
    (1, 4, 1, 3),
    (1, 8, 1, 9),
    (5, 1, 7, 1),
    (5, 1, 1, 7),
    (1, 5, 7, 1),
    (7, 1, 11, 1),
    (11, 1, 1, 2),
    (13, 1, 1, 3),
    (5, 5, 7, 1),
    (7, 7, 1, 3),
)


def suite_crt(pair: FormPair = CANONICAL_PAIR, w=(1, 2, 0, 3), tolerance=1e-5,
              splits=CRT_SPLITS) -> Report:
    """Multiplicativity: S(q1 q2, c1 c2) = S(q1,c1) * S(q2,c2), against the literal sum."""
    rep = Report()
    worst = 0.0
    t0 = time.time()
    for q1, c1, q2, c2 in splits:
        prod = char_sum_crt(pair, q1, c1, q2, c2, w)
        whole = char_sum_brute(CharSumParams(pair, q1 * q2, c1 * c2, w))
        scale = max(abs(whole.value), 1.0)
        err = abs(prod.value - whole.value) / scale
        worst = max(worst, err)
        rep.records.append(record(
            "charsum", q_or_P=q1 * q2, B=c1 * c2,
            w1=w[0], w2=w[1], w3=w[2], w4=w[3],
            value_re=whole.value.real, value_im=whole.value.imag,
            bound=tolerance, ratio=err / tolerance, seconds=time.time() - t0,
        ))
        rep.check(
            f"CRT split ({q1},{c1})x({q2},{c2})", err <= tolerance, f"rel err {err:.2e}"
        )
    rep.summary["crt_max_rel_err"] = worst
    return rep


def _weil_seeded_max(pair: FormPair, seed: int, draws: int, p_bound: int) -> float:
    rng = np.random.default_rng(seed)
    overall = 0.0
    for p in admissible_primes(pair, p_bound, include_minors=True):
        W = rng.integers(0, p, size=(draws, 4))
        overall = max(
            overall, max(weil_ratio(pair, p, tuple(int(v) for v in w)) for w in W)
        )
    return overall


def suite_weil(pair: FormPair = CANONICAL_PAIR, seed=20260810, draws=50,
               p_bound=60) -> Report:
    """Square-root cancellation for S(p,1; w).

    Two disjoint seeded samples are checked against the recorded bound C0
    (the constants-file slack policy); the seeded maxima and their spread
    are reported.  The degenerate frequencies are excluded from the bound
    and documented instead: at w = 0 the ratio grows like sqrt(p), so the
    square-root bound cannot be read as uniform over all of Z^4.
    """
    rep = Report()
    t0 = time.time()
    max_a = _weil_seeded_max(pair, seed, draws, p_bound)
    max_b = _weil_seeded_max(pair, seed + 1, draws, p_bound)
    rep.summary["weil_C0_seed_a"] = max_a
    rep.summary["weil_C0_seed_b"] = max_b
    rep.summary["weil_seed_spread"] = abs(max_a - max_b) / max(max_a, max_b)
    for s, val in ((seed, max_a), (seed + 1, max_b)):
        rep.records.append(record(
            "verify", q_or_P=s, value_re=val, bound=constants.C0_WEIL,
            ratio=val / constants.C0_WEIL, seconds=time.time() - t0,
        ))
        rep.check(
            f"weil ratio within recorded constant (seed {s})",
            val <= constants.C0_WEIL * constants.SLACK,
            f"measured {val:.3f} vs recorded {constants.C0_WEIL}",
        )
    # documented growth at the zero frequency (exact values)
    for p in admissible_primes(pair, 32, include_minors=True):
        r0 = weil_ratio(pair, p, (0, 0, 0, 0))
        rep.records.append(record(
            "verify", q_or_P=p, w1=0, w2=0, w3=0, w4=0, value_re=r0,
            bound=2.0 * math.sqrt(p), ratio=r0 / (2.0 * math.sqrt(p)),
            seconds=time.time() - t0,
        ))
    return rep


def suite_spr(pair: FormPair = CANONICAL_PAIR, seed=20260810, draws=40) -> Report:
    """Prime-power block bound |S(p,p^r)| <= C * p^(2r+3/2) * gcd(p^r, dual1(w))."""
    rep = Report()
    rng = np.random.default_rng(seed)
    t0 = time.time()
    overall = 0.0
    dual = dual_form(pair.psi1)
    for p, r in ((7, 1), (11, 1)):
        ev = FactoredCharSum(pair, p, p**r)
        W = rng.integers(0, p ** (r + 1), size=(draws, 4))
        vals = ev.values(W)
        for w, val in zip(W, vals):
            ratio = spr_ratio(pair, p, r, tuple(int(x) for x in w), value=val)
            overall = max(overall, ratio)
        # paired check: w with p | dual1(w) vs generic w
        w_div = next(
            tuple(int(x) for x in cand)
            for cand in itertools.product(range(p), repeat=4)
            if dual(cand) % p == 0 and any(cand)
        )
        val = ev.values(np.array([w_div]))[0]
        overall = max(overall, spr_ratio(pair, p, r, w_div, value=val))
    # factored-vs-literal spot check at the smallest grid point
    lit = char_sum_brute(CharSumParams(pair, 7, 7, (1, 0, 2, 5))).value
    fac = char_sum_factored(CharSumParams(pair, 7, 7, (1, 0, 2, 5))).value
    rep.check("S(p,p^r) factored spot check", abs(lit - fac) <= 1e-5 * max(1, abs(lit)))
    rep.records.append(record(
        "verify", value_re=overall, bound=constants.C1_SPR,
        ratio=overall / constants.C1_SPR, seconds=time.time() - t0,
    ))
    rep.summary["spr_C1"] = overall
    rep.check(
        "spr ratio within recorded constant",
        overall <= constants.C1_SPR * constants.SLACK,
        f"measured {overall:.3f} vs recorded {constants.C1_SPR}",
    )
    return rep


def suite_scan(pair: FormPair = CANONICAL_PAIR, q=7, X1=20, X2=30) -> Report:
    """Partial-sum scans: absolute values for q | c, cancellation at isotropic w.

    The zero-frequency scan is the stated grid (its sums vanish identically
    for this pair); a generic frequency is scanned alongside so the recorded
    constant reflects nonzero data.
    """
    rep = Report()
    t0 = time.time()
    rows1 = partial_sum_scan(pair, q, (0, 0, 0, 0), X1, "q-divides-c")
    rows1 += partial_sum_scan(pair, q, (32, 28, 12, 15), X1, "q-divides-c")
    max1 = max((r.ratio for r in rows1), default=0.0)
    for r in rows1:
        rep.records.append(record(
            "charsum", B=r.c, q_or_P=q, value_re=abs(r.cumulative),
            bound=r.reference, ratio=r.ratio, seconds=time.time() - t0,
        ))
    # dual-isotropic w for the signed scan
    dual = dual_form(pair.psi1)
    w_iso = next(
        w for w in itertools.product(range(-4, 5), repeat=4)
        if any(w) and dual(w) == 0
    )
    rows2 = partial_sum_scan(pair, q, w_iso, X2, "coprime-part", q1=1)
    max2 = max((r.ratio for r in rows2), default=0.0)
    for r in rows2:
        rep.records.append(record(
            "charsum", B=r.c, q_or_P=1,
            w1=w_iso[0], w2=w_iso[1], w3=w_iso[2], w4=w_iso[3],
            value_re=abs(r.cumulative), bound=r.reference, ratio=r.ratio,
            seconds=time.time() - t0,
        ))
    rep.summary["scan_mode1_C"] = max1
    rep.summary["scan_mode2_C"] = max2
    rep.check(
        "mode-1 scan bounded",
        max1 <= constants.C_SCAN_MODE1 * constants.SLACK,
        f"measured {max1:.3f} vs recorded {constants.C_SCAN_MODE1}",
    )
    rep.check(
        "mode-2 scan bounded",
        max2 <= constants.C_SCAN_MODE2 * constants.SLACK,
        f"measured {max2:.3f} vs recorded {constants.C_SCAN_MODE2}",
    )
    return rep


def suite_oscint(pair: FormPair = CANONICAL_PAIR, seed=20260810, draws=30,
                 B=8.0, cross_tol=2e-6) -> Report:
    """Cross-route agreement, conjugation/support symmetry, decay constants."""
    rep = Report()
    rng = np.random.default_rng(seed)
    t0 = time.time()
    worst_cross = 0.0
    worst_conj = 0.0
    boxes = {}
    for _ in range(draws):
        q = int(rng.choice((7, 11)))
        Q = B / math.sqrt(q)
        limit = c_support_limit(pair, Q)
        # palette spans the support range; small c dominate the runtime
        c = int(rng.choice([1, 2, 3, 4, 6, 9, 14, 22, min(34, limit), limit]))
        w = tuple(int(v) for v in rng.integers(-5, 6, size=4))
        if (q, c) not in boxes:
            boxes[(q, c)] = i_qc_batch(pair, q, c, B, 5)
        box = boxes[(q, c)]
        single = i_qc(IntegralParams(pair, q, c, B, w))
        rep.check(f"i_qc converged q={q} c={c} w={w}", single.converged)
        worst_cross = max(worst_cross, abs(single.value - box.at(w)))
        wneg = tuple(-v for v in w)
        worst_conj = max(
            worst_conj, abs(box.at(wneg) - box.at(w).conjugate())
        )
    rep.summary["oscint_cross_err"] = worst_cross
    rep.summary["oscint_conj_err"] = worst_conj
    rep.check("oscint cross-route", worst_cross <= cross_tol, f"{worst_cross:.2e}")
    rep.check("oscint conjugation", worst_conj <= 1e-6, f"{worst_conj:.2e}")
    # support: exactly zero past the kernel support limit
    for q in (7, 11):
        Q = B / math.sqrt(q)
        c_dead = c_support_limit(pair, Q) + 1
        params = IntegralParams(pair, q, c_dead, B, (0, 0, 0, 0))
        rep.check(f"i_qc support zero q={q}", support_empty(params)
                  and i_qc(params).value == 0)
    # zero-frequency boundedness over a (q, c) grid
    max_i0 = 0.0
    for q in (7, 11):
        Q = B / math.sqrt(q)
        limit = c_support_limit(pair, Q)
        for c in (1, 2, 3, 5, 8, 13, 21, 34):
            if c > limit:
                break
            box0 = i_qc_batch(pair, q, c, B, 0)
            max_i0 = max(max_i0, abs(box0.at((0, 0, 0, 0))))
    rep.summary["oscint_C_I"] = max_i0
    rep.check(
        "zero-frequency integrals bounded",
        max_i0 <= constants.C_I * constants.SLACK,
        f"measured {max_i0:.3f} vs recorded {constants.C_I}",
    )
    rep.records.append(record(
        "verify", value_re=worst_cross, bound=cross_tol, seconds=time.time() - t0,
    ))
    return rep


def suite_decay(pair: FormPair = CANONICAL_PAIR, q=7, B=8.0,
                c_list=(1, 2, 3, 7, 14),
                w_list=((1, 0, 0, 0), (2, 1, 0, 1), (0, 0, 3, 2), (4, 4, 4, 4))) -> Report:
    """Size and t-difference envelopes of the integrals (recorded constant)."""
    from .oscint import decay_table

    rep = Report()
    t0 = time.time()
    rows = decay_table(pair, q, B, c_list=c_list, w_list=w_list)
    worst = 0.0
    for r in rows:
        worst = max(worst, r.ratio_size, r.ratio_deriv)
        rep.records.append(record(
            "decay-report", B=r.c, q_or_P=q,
            w1=r.w[0], w2=r.w[1], w3=r.w[2], w4=r.w[3],
            value_re=r.abs_I, bound=r.ref_size, ratio=r.ratio_size,
            seconds=time.time() - t0,
        ))
    rep.summary["decay_C2"] = worst
    rep.check(
        "decay ratios within recorded constant",
        worst <= constants.C2_DECAY * constants.SLACK,
        f"measured {worst:.3f} vs recorded {constants.C2_DECAY}",
    )
    # t-difference symmetry under w -> -w
    p1 = i_qc(IntegralParams(pair, q, 2, B, (1, 2, 0, 1)))
    p2 = i_qc(IntegralParams(pair, q, 3, B, (1, 2, 0, 1)))
    m1 = i_qc(IntegralParams(pair, q, 2, B, (-1, -2, 0, -1)))
    m2 = i_qc(IntegralParams(pair, q, 3, B, (-1, -2, 0, -1)))
    rep.check(
        "t-difference conjugation symmetry",
        abs(abs(p2.value - p1.value) - abs(m2.value - m1.value)) <= 1e-6,
    )
    return rep


def suite_h_kernel(grid=100) -> Report:
    """Support and 1/x envelope of the kernel h on a sweep grid."""
    rep = Report()
    xs = np.linspace(0.01, 2.0, grid)
    ys = np.linspace(-2.0, 2.0, grid)
    worst = 0.0
    support_bad = 0
    for x in xs:
        vals = h_function(float(x), ys)
        worst = max(worst, float(np.max(np.abs(vals)) * x))
        dead = np.abs(ys) < x / 2.0
        if x > 1.0:
            support_bad += int(np.any(vals[dead] != 0.0))
    rep.summary["h_C"] = worst
    rep.check("h support", support_bad == 0)
    rep.check(
        "x*|h| bounded",
        worst <= constants.C_H * constants.SLACK,
        f"measured {worst:.3f} vs recorded {constants.C_H}",
    )
    return rep


def suite_majorant(pair: FormPair = CANONICAL_PAIR, P=50, m_max=1000,
                   B_list=(50, 100)) -> Report:
    """Square-sieve majorant: pointwise domination and the decomposition."""
    rep = Report()
    t0 = time.time()
    primes = prime_set(pair, P)
    worst_margin = math.inf
    for m in range(1, m_max + 1):
        n = m * m
        total = sum(legendre(n, p) for p in primes)
        lhs = (total / P) ** 2
        omega = len(factorize(m)) if m > 1 else 0
        rhs = (1 - omega / P) ** 2
        worst_margin = min(worst_margin, lhs - rhs)
        if lhs < rhs:
            rep.check(f"majorant at n={n}", False, f"{lhs} < {rhs}")
    rep.summary["majorant_min_margin"] = worst_margin
    rep.check("majorant pointwise", worst_margin >= 0, f"{worst_margin}")
    for B in B_list:
        dec = sieve_decompose(pair, B, P)
        ok = dec.mstar <= dec.majorant_rhs + dec.zero_mass + 1e-9
        rep.records.append(record(
            "sieve-assembly", B=B, q_or_P=P, value_re=dec.mstar,
            bound=dec.majorant_rhs + dec.zero_mass,
            ratio=dec.mstar / max(dec.majorant_rhs + dec.zero_mass, 1e-12),
            seconds=time.time() - t0,
        ))
        rep.check(f"sieve decomposition bound B={B}", ok,
                  f"mstar {dec.mstar} vs majorant+zero {dec.majorant_rhs + dec.zero_mass}")
    return rep
