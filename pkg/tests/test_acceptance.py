"""Acceptance suite: every exit criterion at its stated tolerance and budget.

Each test prints one line ``ACCEPTANCE <id> <name>: PASS/FAIL`` (visible with
pytest -s or in captured output on failure) and then asserts.
"""

import math
import time

import numpy as np

from quadpair import constants, suites
from quadpair.config import ExperimentConfig
from quadpair.counting import count_M
from quadpair.forms import CANONICAL_PAIR
from quadpair.harness import run_lemma41_check, run_sieve_assembly, run_tq_bound

PAIR = CANONICAL_PAIR


def _verdict(cid: str, name: str, ok: bool, detail: str, t0: float, budget: float):
    elapsed = time.time() - t0
    line = f"ACCEPTANCE {cid} {name}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.1f}s/" \
           f"{budget:.0f}s)"
    print(line)
    assert ok, line
    assert elapsed <= budget, f"{cid} exceeded runtime budget: {elapsed:.1f}s > {budget}s"


def test_c01_delta_exactness():
    t0 = time.time()
    rep = suites.suite_delta(Q_list=(5, 10, 20, 40), tolerance=1e-9)
    worst = max(v for k, v in rep.summary.items() if k.startswith("delta_max_err"))
    _verdict("C1", "delta-exactness", rep.passed, f"max err {worst:.2e} <= 1e-9", t0, 30)


def test_c02_gauss_closed_forms():
    t0 = time.time()
    rep1 = suites.suite_quad_gauss(tolerance=1e-6)
    rep2 = suites.suite_quad4(tolerance=1e-6, pair=PAIR)
    ok = rep1.passed and rep2.passed
    detail = (f"1-D max rel {rep1.summary['quad_gauss_max_rel_err']:.2e}, "
              f"4-D max rel {rep2.summary['quad4_max_rel_err']:.2e}")
    _verdict("C2", "gauss-sum-closed-forms", ok, detail, t0, 120)


def test_c03_s1pr_identity():
    t0 = time.time()
    rep = suites.suite_s1pr(PAIR, primes=(7, 11, 13), rs=(1, 2), w_range=(0, 1, 2))
    _verdict("C3", "unit-q-prime-power-identity", rep.passed,
             f"max abs err {rep.summary['s1pr_max_abs_err']:.2e}, integer matches", t0, 300)


def test_c04_crt_multiplicativity():
    t0 = time.time()
    rep = suites.suite_crt(PAIR, tolerance=1e-5)
    qs = {q1 * q2 for q1, _, q2, _ in suites.CRT_SPLITS}
    ok = rep.passed and len(suites.CRT_SPLITS) >= 10 and 1 in qs and 35 in qs
    _verdict("C4", "crt-multiplicativity", ok,
             f"{len(suites.CRT_SPLITS)} splits, max rel err "
             f"{rep.summary['crt_max_rel_err']:.2e} <= 1e-5", t0, 300)


def test_c05_weil_bound():
    t0 = time.time()
    rep = suites.suite_weil(PAIR, seed=20260810, draws=50, p_bound=60)
    a, b = rep.summary["weil_C0_seed_a"], rep.summary["weil_C0_seed_b"]
    cap = constants.C0_WEIL * constants.SLACK
    ok = rep.passed and a <= cap and b <= cap
    _verdict("C5", "weil-ratio-bound", ok,
             f"seeded maxima {a:.3f}, {b:.3f} <= recorded {constants.C0_WEIL} x 1.1",
             t0, 300)


def test_c06_square_sieve_majorant():
    t0 = time.time()
    rep = suites.suite_majorant(PAIR, P=50, m_max=1000, B_list=(50, 100))
    _verdict("C6", "square-sieve-majorant", rep.passed,
             f"min margin {rep.summary['majorant_min_margin']:.3e} >= 0, "
             "decomposition dominated", t0, 120)


def test_c07_two_route_twisted_count():
    t0 = time.time()
    cfg = ExperimentConfig(pair=PAIR, experiment="lemma41-check",
                           B_grid=[8, 10, 8], q_list=[7, 7, 11])
    rep = run_lemma41_check(cfg)
    pairs = [(8, 7), (10, 7), (8, 11)]
    rels = []
    for B, q in pairs:
        lhs = rep.summary[f"lemma41_B{B}_q{q}_lhs"]
        rhs = rep.summary[f"lemma41_B{B}_q{q}_rhs"]
        rels.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
    _verdict("C7", "two-route-twisted-count", rep.passed,
             "rel errs " + ", ".join(f"{r:.2e}" for r in rels) + " <= 2% + tail", t0, 1200)


def test_c08_twisted_count_bound():
    t0 = time.time()
    cfg = ExperimentConfig(pair=PAIR, experiment="tq-bound",
                           B_grid=[50, 100, 200], q_list=[7, 77, 91])
    rep = run_tq_bound(cfg)
    _verdict("C8", "twisted-count-reference-bound", rep.passed,
             f"max ratio {rep.summary['tq_max_ratio']:.3f} <= 10", t0, 600)


def test_c09_assembly_and_oracle():
    t0 = time.time()
    cfg = ExperimentConfig(pair=PAIR, experiment="sieve-assembly",
                           B_grid=[64, 125, 216, 343])
    rep = run_sieve_assembly(cfg)
    slope_ok = rep.summary["mstar_exponent"] <= 1.8
    # exact oracle equivalence of the sharp count at B <= 30
    oracle_ok = True
    for B in (10, 30):
        r = np.arange(-B, B + 1)
        X = np.meshgrid(r, r, r, r, indexing="ij")
        psi1 = sum(a * x * x for a, x in zip(PAIR.a, X))
        psi2 = sum(b * x * x for b, x in zip(PAIR.b, X))
        zs = psi2[psi1 == 0]
        naive = sum(1 for v in zs if v >= 0 and math.isqrt(int(v)) ** 2 == int(v))
        oracle_ok = oracle_ok and naive == count_M(PAIR, B)
    ok = rep.passed and slope_ok and oracle_ok
    _verdict("C9", "assembly-exponent-and-oracle", ok,
             f"exponent {rep.summary['mstar_exponent']:.3f} <= 1.8, sharp-count "
             f"oracle exact", t0, 900)


def test_c10_partial_sum_scans():
    t0 = time.time()
    rep = suites.suite_scan(PAIR, q=7, X1=20, X2=30)
    _verdict("C10", "partial-sum-scans", rep.passed,
             f"mode-1 C {rep.summary['scan_mode1_C']:.3f}, "
             f"mode-2 C {rep.summary['scan_mode2_C']:.3f} within records", t0, 600)
