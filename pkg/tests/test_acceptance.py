"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` or as part of the full
suite; the summary lines are printed even when output capture is on.
"""

from fractions import Fraction
from itertools import product
import json
import math
import random
import subprocess
import sys
import time
import warnings

import numpy as np
import pytest

from oracles import exp_inverse, schoolbook_mul
from uhfsec.bounds import awgn_imax_bound, lhl_bound_kl, lhl_bound_tv, pinsker_tv_bound
from uhfsec.channels import augment_with_encoder, bsc, capacity, noiseless
from uhfsec.cli import main
from uhfsec.codes import LinearCode
from uhfsec.gf2 import field
from uhfsec.leakage import exact_extraction_leakage
from uhfsec.measures import max_information
from uhfsec.rng import make_rng
from uhfsec.ska import SkaConfig, ska_exact_security_eval, ska_simulate
from uhfsec.uhf import make_family, verify_balanced, verify_uhf_property
from uhfsec.wiretap import (
    RateConditionWarning,
    WiretapConfig,
    multi_block_leakage,
    recycling_rate,
    seed_recycling_run,
    single_block_leakage,
    wiretap_exact_leakage,
)

HAM = LinearCode.hamming74()


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail, elapsed=None):
        took = f" ({elapsed:.1f}s)" if elapsed is not None else ""
        with capsys.disabled():
            print(f"\n[acceptance {number:>2}] {'PASS' if ok else 'FAIL'}  {title}: {detail}{took}")
        return ok
    return emit


def wiretap(code, k, W, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RateConditionWarning)
        return WiretapConfig(code, k, W=W, **kw)


# 1 -------------------------------------------------------------------------

def _axiom_failures(l):
    F = field(l)
    elems = range(1 << l)
    bad = 0
    for a, b in product(elems, repeat=2):
        ab = F.mul(a, b)
        bad += ab != F.mul(b, a)
        bad += ab != schoolbook_mul(a, b, l)
    for a, b, c in product(elems, repeat=3):
        bad += F.mul(F.mul(a, b), c) != F.mul(a, F.mul(b, c))
        bad += F.mul(a, b ^ c) != F.mul(a, b) ^ F.mul(a, c)
    for a in elems:
        bad += F.mul(a, 1) != a or F.mul(a, 0) != 0
        if a:
            inv = F.inv(a)
            bad += F.mul(a, inv) != 1 or inv != exp_inverse(a, l)
    return bad


def _random_failures(l, count, rng):
    F = field(l)
    bad = 0
    for _ in range(count):
        a, b, c = (rng.getrandbits(l) for _ in range(3))
        ab = F.mul(a, b)
        bad += ab != schoolbook_mul(a, b, l)
        bad += F.mul(ab, c) != F.mul(a, F.mul(b, c))
        bad += F.mul(a, b ^ c) != ab ^ F.mul(a, c)
        if a:
            bad += F.inv(a) != exp_inverse(a, l)
    return bad


def test_01_field_correctness(verdict):
    t0 = time.perf_counter()
    failures = {l: _axiom_failures(l) for l in (2, 4)}
    rng = random.Random(20240101)
    failures.update({l: _random_failures(l, 10_000, rng) for l in (10, 12, 60)})
    elapsed = time.perf_counter() - t0
    ok = sum(failures.values()) == 0 and elapsed < 30
    verdict(1, "field axioms and oracles", ok, f"failures per l {failures}", elapsed)
    assert sum(failures.values()) == 0
    assert elapsed < 30


# 2 -------------------------------------------------------------------------

def test_02_two_universality(verdict):
    t0 = time.perf_counter()
    cases = [("field", 4, k) for k in (1, 2, 3, 4)] + [("toeplitz", 3, 2), ("modified-toeplitz", 3, 1)]
    fracs = {}
    for kind, l, k in cases:
        fracs[(kind, l, k)] = verify_uhf_property(make_family(kind, l, k))
    elapsed = time.perf_counter() - t0
    ok = all(f <= Fraction(1, 1 << k) for (_, _, k), f in fracs.items()) and elapsed < 10
    detail = ", ".join(f"{kind}(l={l},k={k})={f}" for (kind, l, k), f in fracs.items())
    verdict(2, "collision probability <= 2^-k", ok, detail, elapsed)
    assert ok


# 3 -------------------------------------------------------------------------

def test_03_balancedness(verdict):
    field_reports = {k: verify_balanced(make_family("field", 4, k)) for k in (1, 2, 3, 4)}
    mt = verify_balanced(make_family("modified-toeplitz", 3, 1))
    field_ok = all(r.balanced and r.b == 4 - k for k, r in field_reports.items())
    mt_ok = not mt.balanced and mt.witness is not None
    if mt_ok:
        # confirm the witness independently: x is sent to m by every seed
        fam = make_family("modified-toeplitz", 3, 1)
        w = mt.witness
        hits = sum(fam.eval(s, w["x"]) == w["m"] for s in fam.seeds())
        mt_ok = hits == w["seed_count"] and hits != w["expected"]
    ok = field_ok and mt_ok
    verdict(3, "balanced field family, unbalanced modified Toeplitz", ok,
            f"field b={[r.b for r in field_reports.values()]}, witness={mt.witness}")
    assert ok


# 4 -------------------------------------------------------------------------

def test_04_leftover_hash(verdict):
    t0 = time.perf_counter()
    count = 0
    worst = {"tv": -math.inf, "kl": -math.inf, "pinsker": -math.inf}
    for k in (1, 2, 3):
        fam = make_family("field", 4, k)
        for nz in (1, 4):
            for i in range(100):
                P = make_rng(4, k, nz, i).dirichlet(np.ones(16 * nz)).reshape(16, nz)
                r = exact_extraction_leakage(fam, P)
                assert r["tv_bound"] == lhl_bound_tv(k, r["hmin"], 0.0)
                assert r["kl_bound"] == lhl_bound_kl(k, r["hmin_given_pz"])
                worst["tv"] = max(worst["tv"], r["tv"] - r["tv_bound"])
                worst["kl"] = max(worst["kl"], r["kl"] - r["kl_bound"])
                worst["pinsker"] = max(worst["pinsker"], r["tv"] - pinsker_tv_bound(r["kl"]))
                count += 1
    elapsed = time.perf_counter() - t0
    ok = all(v <= 1e-12 for v in worst.values()) and elapsed < 120
    detail = f"{count} instances, worst (value - bound) " + ", ".join(f"{k}={v:.3g}" for k, v in worst.items())
    verdict(4, "exact TV / KL within leftover hash bounds", ok, detail, elapsed)
    assert ok


# 5 -------------------------------------------------------------------------

def test_05_channel_leftover_hash(verdict):
    t0 = time.perf_counter()
    codes = [HAM, LinearCode.bitwise_repetition(4, 3)]
    failures, zero_leak, worst_ratio = [], [], 0.0
    for code in codes:
        for p in (0.2, 0.3, 0.5):
            for k in (1, 2):
                for messages in ("all", "nonzero"):
                    cfg = wiretap(code, k, bsc(p), l=4, messages=messages)
                    for r in wiretap_exact_leakage(cfg, [0.0, 0.01]):
                        worst_ratio = max(worst_ratio, r.exact / r.bound)
                        if not r.passed:
                            failures.append((code.name, p, k, messages, r.eps))
                        if p == 0.5:
                            zero_leak.append(r.exact)
    elapsed = time.perf_counter() - t0
    zero_ok = max(abs(v) for v in zero_leak) <= 1e-9
    ok = not failures and zero_ok and elapsed < 300
    verdict(5, "exact I(M;Z,S) within channel bound", ok,
            f"{2 * 3 * 2 * 2 * 2} checks, failures={failures}, max leak/bound={worst_ratio:.3g}, "
            f"max |leak| at BSC(0.5)={max(abs(v) for v in zero_leak):.2e}", elapsed)
    assert ok


# 6 -------------------------------------------------------------------------

def test_06_ska_end_to_end(verdict):
    t0 = time.perf_counter()
    cfg = SkaConfig(HAM, 0.05, delta=0.25)
    sim = ska_simulate(cfg, 10_000, 6)
    analytic = 0.95 ** 7 + 7 * 0.05 * 0.95 ** 6
    assert sim["analytic_reconciliation"] == pytest.approx(analytic)
    close = abs(sim["reconciliation_rate"] - analytic) <= 3 * sim["sigma"]
    rep = ska_exact_security_eval(cfg)
    elapsed = time.perf_counter() - t0
    ok = close and rep.passed and rep.exact <= 0.25 and elapsed < 120
    verdict(6, "SKA agreement and exact security", ok,
            f"agreement {sim['reconciliation_rate']:.4f} vs {analytic:.4f} (3 sigma={3 * sim['sigma']:.4f}), "
            f"k={cfg.k}, h={cfg.source_entropy():.3f}, TV={rep.exact:.3g} <= 0.25", elapsed)
    assert ok


# 7 -------------------------------------------------------------------------

def test_07_wiretap_scheme(verdict):
    t0 = time.perf_counter()
    leaks, passes = [], []
    for k in (4, 3, 2, 1):
        r = wiretap_exact_leakage(wiretap(HAM, k, bsc(0.3), l=4))[0]
        leaks.append(r.exact)
        passes.append(r.passed)
    # with k = 1 the nonzero law has a single message, so also run the uniform law
    leaks_all = []
    for k in (4, 3, 2, 1):
        r = wiretap_exact_leakage(wiretap(HAM, k, bsc(0.3), l=4, messages="all"))[0]
        leaks_all.append(r.exact)
        passes.append(r.passed)
    monotone = all(b <= a + 1e-12 for seq in (leaks, leaks_all) for a, b in zip(seq, seq[1:]))
    flat = single_block_leakage(wiretap(HAM, 2, bsc(0.5), l=4))
    clear = single_block_leakage(wiretap(HAM, 4, noiseless(2), l=4))
    degenerate = abs(flat) <= 1e-9 and abs(clear - math.log2(15)) <= 1e-9
    elapsed = time.perf_counter() - t0
    ok = monotone and all(passes) and degenerate and elapsed < 300
    verdict(7, "wiretap leakage monotone, bounded, degenerate cases", ok,
            f"leak k=4..1 nonzero {[round(v, 6) for v in leaks]} all {[round(v, 6) for v in leaks_all]}, "
            f"BSC(0.5)={flat:.2e}, "
            f"noiseless={clear:.12f} vs log2(15)={math.log2(15):.12f}", elapsed)
    assert ok


# 8 -------------------------------------------------------------------------

def test_08_seed_recycling(verdict):
    t0 = time.perf_counter()
    code = LinearCode.bitwise_repetition(2, 3)
    cfg = wiretap(code, 1, bsc(0.2), l=2, messages="all")
    single = single_block_leakage(cfg)
    multi = multi_block_leakage(cfg, 2)
    chain = multi["with_seed"] <= 2 * single * (1 + 1e-9) + 1e-15
    run = seed_recycling_run(cfg, 2, make_rng(8))
    c = run["c"]
    rate_ok = run["rate"] == Fraction(2 * 1, (2 + c) * code.n) == recycling_rate(2, 1, c, code.n)
    elapsed = time.perf_counter() - t0
    ok = chain and rate_ok and elapsed < 60
    verdict(8, "seed recycling chain rule and rate", ok,
            f"I(M1M2;Z1Z2,S)={multi['with_seed']:.12f} <= 2x{single:.12f}, rate={run['rate']} (c={c})",
            elapsed)
    assert ok


# 9 -------------------------------------------------------------------------

def test_09_max_information_bounds(verdict):
    exact = {p: abs(max_information(bsc(p)) - math.log2(2 * (1 - p))) for p in (0.1, 0.2, 0.3)}
    exact_ok = max(exact.values()) <= 1e-15
    aug = augment_with_encoder(bsc(0.3), 7, HAM)
    imax = max_information(aug)
    n_cap = 7 * capacity(bsc(0.3))
    snr = 1.0
    res = awgn_imax_bound(100, 0.1, snr, 1.0)
    terms_ok = (
        math.isclose(res["terms"]["capacity"], 50 * math.log2(1 + 0.1 + snr), rel_tol=1e-12)
        and math.isclose(res["terms"]["spread"], 100 * 0.1 * math.log2(math.e) / 2, rel_tol=1e-12)
        and math.isclose(res["terms"]["volume"], 0.5 * math.log2(100 * math.pi), rel_tol=1e-12)
        and math.isclose(res["value"], sum(res["terms"].values()), rel_tol=1e-12)
    )
    deltas = np.linspace(0.01, 0.49, 25)
    snrs = np.linspace(0.0, 10.0, 25)
    by_delta = [awgn_imax_bound(100, d, snr, 1.0)["value"] for d in deltas]
    by_snr = [awgn_imax_bound(100, 0.1, s, 1.0)["value"] for s in snrs]
    mono = bool(np.all(np.diff(by_delta) > 0) and np.all(np.diff(by_snr) > 0))
    ok = exact_ok and terms_ok and mono
    verdict(9, "max-information closed form, augmented channel, AWGN bound", ok,
            f"BSC errors {max(exact.values()):.1e}; Hamming(7,4)+BSC(0.3) I_max={imax:.6f} "
            f"vs 7 C_W={n_cap:.6f} (slack {imax - n_cap:.6f}, reported only); "
            f"AWGN n=100 value={res['value']:.6f}, monotone={mono}")
    assert ok


# 10 ------------------------------------------------------------------------

COMMANDS = [
    ["uhf", "verify", "--kind", "field", "--l", "4", "--k", "2"],
    ["measure", "extraction", "--instances", "10"],
    ["measure", "channel", "--k", "1", "--channel", "bsc:0.2", "--eps", "0,0.01"],
    ["ska", "simulate", "--eps-src", "0.05", "--trials", "2000"],
    ["ska", "eval", "--eps-src", "0.05"],
    ["wiretap", "simulate", "--k", "2", "--T", "bsc:0.05", "--W", "bsc:0.3", "--trials", "2000"],
    ["wiretap", "eval", "--k", "1", "--W", "bsc:0.3", "--eps", "0,0.01"],
    ["wiretap", "recycle", "--code", "bitrep:2x3", "--k", "1", "--W", "bsc:0.2", "--messages", "all"],
    ["channel", "maxinfo", "--channel", "bsc:0.3", "--code", "hamming74"],
    ["bounds", "awgn", "--n", "100", "--delta", "0.1", "--power", "1", "--sigma2", "1"],
]


def test_10_reproducibility(verdict, tmp_path, capsys):
    mismatched = []
    for i, argv in enumerate(COMMANDS):
        outs = []
        for rep in range(2):
            path = tmp_path / f"{i}_{rep}.json"
            main(argv + ["--seed", "12345", "--out", str(path)])
            outs.append(path.read_bytes())
        json.loads(outs[0])
        if outs[0] != outs[1]:
            mismatched.append(" ".join(argv[:2]))
    capsys.readouterr()
    # across fresh interpreters as well
    argv = [sys.executable, "-m", "uhfsec", *COMMANDS[3], "--seed", "12345"]
    procs = [subprocess.run(argv, capture_output=True) for _ in range(2)]
    if procs[0].stdout != procs[1].stdout or not procs[0].stdout:
        mismatched.append("ska simulate (subprocess)")
    ok = not mismatched
    verdict(10, "byte-identical reports for a fixed master seed", ok,
            f"{len(COMMANDS)} commands in-process + 1 across processes, mismatches={mismatched}")
    assert ok
