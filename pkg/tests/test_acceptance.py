"""Acceptance criteria 1-12, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with the measured
quantities, then asserts at the stated tolerance.
"""

import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from glorentz import cli, grid
from glorentz import phi as phimod
from glorentz.besov import BesovParams
from glorentz.config import parse_config
from glorentz.norms import (
    LorentzParams,
    block_norm_check,
    dirichlet_norm_check,
    lebesgue_norm,
    lorentz_norm_aniso,
    lorentz_norm_iso,
)
from glorentz.rearrange import decreasing, distribution_function, iterated_rearrangement
from glorentz.verify.approx import best_approx_refine
from glorentz.verify.corpus import random_corpus
from glorentz.verify.hardy import hardy1_check, hardy6_check, oracle_constant
from glorentz.verify.registry import run_check
from glorentz.verify.theorems import residual, theorem5_check

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def say(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")

    return emit


def _cfg(text, **over):
    cfg = parse_config(text)
    for k, v in over.items():
        setattr(cfg, k, v)
    return cfg


def _conf(name, **over):
    return _cfg((CONFIGS / name).read_text(), **over)


# ---------------------------------------------------------------------------


def test_criterion_01_lq_collapse(say):
    t0 = time.perf_counter()
    worst = 0.0
    for dims in ((256,), (64, 64)):
        m = len(dims)
        for cid, f in random_corpus(dims, 50, 2024, 5):
            for q in (2.0, 3.0):
                lq = lebesgue_norm(f, q)
                if m == 1:
                    val = lorentz_norm_iso(f, phimod.power(1 / q), q)
                else:
                    val = lorentz_norm_aniso(f, LorentzParams.power([1 / q] * m, [q] * m))
                worst = max(worst, abs(val - lq) / lq)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 10
    say(1, ok, f"max rel err {worst:.2e}, {elapsed:.2f} s")
    assert ok


def test_criterion_02_rearrangement(say):
    # equimeasurability on the corpus: same sorted values, same distribution
    worst = 0
    for dims in ((256,), (64, 64)):
        for _, f in random_corpus(dims, 50, 7, 5):
            a = np.abs(f.samples).ravel()
            r = decreasing(a)
            worst += int(not np.array_equal(np.sort(a)[::-1], r))
            it = iterated_rearrangement(f).values.ravel()
            worst += int(not np.array_equal(np.sort(it), np.sort(a)))
            for lam in np.quantile(a, [0.1, 0.5, 0.9]):
                worst += int(distribution_function(a, lam) != distribution_function(r, lam))
    # indicators map to χ_[0,t]
    bad_ind = 0
    for t in (0.125, 0.25, 0.5, 0.875):
        f = grid.rect_indicator((64,), [t])
        perm = np.random.default_rng(1).permutation(64)
        r = decreasing(np.abs(f.samples[perm]))
        bad_ind += int(not np.array_equal(r, (np.arange(64) < t * 64).astype(float)))
        g = grid.rect_indicator((16, 32), [t, 0.5])
        it = iterated_rearrangement(g).values
        expect = np.outer(np.arange(16) < t * 16, np.arange(32) < 16).astype(float)
        bad_ind += int(not np.array_equal(it, expect))
    # non-increasing along every axis: all 256 binary 2×2×2 arrays and
    # 3000 seeded 4×4×4 arrays with heavy ties
    arrays = [np.array(bits, float).reshape(2, 2, 2) for bits in itertools.product((0, 1), repeat=8)]
    rng = np.random.default_rng(0)
    arrays += [rng.integers(0, 3, (4, 4, 4)).astype(float) for _ in range(3000)]
    arrays += [rng.standard_normal((4, 4, 4)) for _ in range(1000)]
    bad_mono = 0
    for a in arrays:
        v = iterated_rearrangement(a).values
        for ax in range(3):
            bad_mono += int(np.any(np.diff(v, axis=ax) > 0))
    ok = worst == 0 and bad_ind == 0 and bad_mono == 0
    say(2, ok, f"equimeasurability failures {worst}, indicator failures {bad_ind}, "
               f"monotonicity failures {bad_mono} over {len(arrays)} arrays")
    assert ok


def test_criterion_03_indices(say):
    worst = 0.0
    for q in (1.1, 2.0, 4.0, 10.0):
        ind = phimod.dilation_indices(phimod.power(1 / q))
        target = 2 ** (1 / q)
        worst = max(worst, abs(ind.alpha - target), abs(ind.beta - target))
    ok = worst < 1e-12
    say(3, ok, f"max |index - 2^(1/q)| = {worst:.2e}")
    assert ok


def _geom_oracle(n):
    # Σ_{i≤n} 2^i Σ_{k=i}^{n} 4^{-k}  and  Σ_{i≤n} 2^{-i}
    lhs = sum(2.0**i * (4.0**-i - 4.0 ** -(n + 1)) * 4 / 3 for i in range(n + 1))
    return lhs, 2 - 2.0**-n


def test_criterion_04_hardy(say):
    t0 = time.perf_counter()
    r1 = run_check("hardy1", _conf("hardy.conf"))
    r6 = run_check("hardy6", _conf("hardy.conf"))
    err = 0.0
    for row in r1.rows:
        lhs, rhs = _geom_oracle(int(row.scale))
        err = max(err, abs(row.lhs - lhs) / lhs, abs(row.rhs - rhs) / rhs)
    for row in r6.rows:
        lhs, rhs = _geom_oracle(int(row.scale))
        err = max(err, abs(row.lhs - lhs**2) / lhs**2, abs(row.rhs - rhs**2) / rhs**2)
    rng = np.random.default_rng(200)
    violations = 0
    k = np.arange(31)
    for i in range(200):
        variant = "ab"[i % 2]
        growth, theta = rng.uniform(1.1, 4.0), rng.uniform(0.3, 4.0)
        jitter = rng.uniform(0.5, 1.0, 31)
        a = growth**k * jitter if variant == "a" else growth ** (-k) * jitter
        if i % 4 < 2:
            rep = hardy1_check(a, rng.random(31), theta, variant, 30)
            bound = rep.notes["oracle_constant"]
        else:
            a2 = growth**k[:9] if variant == "a" else growth ** (-k[:9])
            thetas = sorted(rng.uniform(1.0, 3.0, 2))
            rep = hardy6_check([a[:9], a2], rng.random((9, 9)), thetas, variant, 8)
            bound = rep.notes["oracle_constant"]
        violations += int(rep.max_ratio > bound * (1 + 1e-12))
    elapsed = time.perf_counter() - t0
    ok = err < 1e-9 and violations == 0 and elapsed < 5
    say(4, ok, f"oracle rel err {err:.2e}, {violations}/200 above the oracle constant, {elapsed:.2f} s")
    assert ok


def test_criterion_05_lemmas(say):
    cfg = _conf("lemmas.conf")
    spreads = {}
    for check in ("lemma2", "lemma4", "lemma5"):
        rep = run_check(check, cfg)
        assert rep.ok, rep.precondition_flags
        for case in rep.case_ids():
            vals = [r.ratio for r in rep.rows if r.case_id == case and 1 <= r.scale <= 30]
            spreads[f"{check}/{case}"] = max(vals) / min(vals)
    bad = _cfg("m = 1\npsi = pow:1\nphi = pow:0.55\ntheta = 2\nn = 1..30\n")
    rep4 = run_check("lemma4", bad)
    rep2 = run_check("lemma2", bad)
    ratios = [r.ratio for r in rep4.rows if r.scale >= 1]
    diverging = ratios[-1] > 1e6 and all(b > a for a, b in zip(ratios, ratios[1:]))
    flagged = not rep4.ok and not rep2.ok
    ok = max(spreads.values()) < 20 and flagged and diverging
    say(5, ok, f"max spread {max(spreads.values()):.3f}; psi=t flagged {flagged}, "
               f"lemma4 ratio n=1 {ratios[0]:.3g} -> n=30 {ratios[-1]:.3g}")
    assert ok


def test_criterion_06_block_norms(say):
    params = LorentzParams.power([0.7], [2])
    a = block_norm_check(params, 8, n=1024)
    b = block_norm_check(params, 8, n=2048)
    bracket = a.max_ratio / a.min_ratio
    move = max(abs(y / x - 1) for x, y in zip(a.ratios(), b.ratios()))
    ok = a.ok and bracket < 10 and move < 0.02
    say(6, ok, f"c2/c1 = {bracket:.4f}, refinement change {move:.2e}")
    assert ok


def test_criterion_07_dirichlet(say):
    phi = phimod.parse_phi(_conf("relation5.conf").phi[0])
    orders = list(range(2, 1025))
    a = dirichlet_norm_check(phi, 2, 0, N=4096, orders=orders)
    b = dirichlet_norm_check(phi, 2, 0, N=8192, orders=orders)
    r = np.array(a.ratios())
    # trendwise: octave maxima never increase
    octaves = [r[(np.array(orders) >= 2**j) & (np.array(orders) < 2 ** (j + 1))].max() for j in range(1, 10)]
    trend = all(y <= x * (1 + 1e-12) for x, y in zip(octaves, octaves[1:])) and r[-1] <= r[0]
    move = max(abs(y / x - 1) for x, y in zip(a.ratios(), b.ratios()))
    ok = np.isfinite(r.max()) and trend and move < 0.02
    say(7, ok, f"max ratio {r.max():.4f}, octave maxima {octaves[0]:.4f} -> {octaves[-1]:.4f}, "
               f"refinement change {move:.2e}")
    assert ok


def _theorem2_growth(phi, psi, m, dims):
    cfg = _cfg(
        f"check = theorem2\nm = {m}\ndims = {', '.join([str(dims)] * m)}\n"
        f"phi = {', '.join([phi] * m)}\neta = {', '.join(['2'] * m)}\n"
        f"psi = {', '.join([psi] * m)}\ntau = {', '.join(['2'] * m)}\n"
        "depth = 4..6\ncorpus = random\ncount = 50\nseed = 7\n"
    )
    rep = run_check("theorem2", cfg, threads=4)
    return rep.max_ratio_by_scale(), rep.max_growth


def _criterion_08(say, phi, psi, label):
    t0 = time.perf_counter()
    parts, growths = [], []
    for m, dims in ((1, 256), (2, 128)):
        maxima, growth = _theorem2_growth(phi, psi, m, dims)
        growths.append(growth)
        parts.append(f"m={m} max ratio " + "/".join(f"{v:.4f}" for v in maxima.values()) + f" growth {growth:.4f}")
    elapsed = time.perf_counter() - t0
    ok = max(growths) < 1.1 and elapsed < 120
    say(8, ok, f"[{label}] " + "; ".join(parts) + f"; {elapsed:.1f} s")
    return ok


def test_criterion_08_embedding_stated_pair(say):
    # φ=t^0.55, ψ=t^0.7 as stated; this pair breaks the index chain
    assert _criterion_08(say, "pow:0.55", "pow:0.7", "phi=t^0.55 psi=t^0.7")


def test_criterion_08_embedding_ordered_pair(say):
    assert _criterion_08(say, "pow:0.7", "pow:0.55", "phi=t^0.7 psi=t^0.55")


def _criterion_09(say, phi, psi, label):
    cfg = _conf("theorem5.conf", phi=[phi], psi=[psi])
    rep = run_check("theorem5", cfg, threads=4)
    maxima = rep.max_ratio_by_scale()
    besov = BesovParams(LorentzParams.parse([phi], [2]), [0.5], [2])
    target = LorentzParams.parse([psi], [2])
    inside = [(f"in{n}", grid.random_bandlimited((256,), n, n - 1)) for n in range(2, 8)]
    zero = theorem5_check(besov, target, [1], list(range(7, 8)), inside)
    lhs_zero = all(r.lhs == 0.0 for r in zero.rows)
    ok = rep.max_growth < 1.1 and lhs_zero and np.isfinite(rep.max_ratio)
    say(9, ok, f"[{label}] max ratio by n " + "/".join(f"{v:.4f}" for v in maxima.values())
               + f", growth {rep.max_growth:.4f}, inside-cross LHS exactly 0: {lhs_zero}")
    return ok


def test_criterion_09_order_stated_pair(say):
    assert _criterion_09(say, "pow:0.55", "pow:0.7", "phi=t^0.55 psi=t^0.7")


def test_criterion_09_order_ordered_pair(say):
    assert _criterion_09(say, "pow:0.7", "pow:0.55", "phi=t^0.7 psi=t^0.55")


def test_criterion_10_lower_bound(say):
    mins, lac = [], []
    for N in (512, 1024):
        rep = run_check("theorem4", _conf("theorem4.conf", dims=[N]))
        mins.append(rep.min_ratio)
        lac.append(rep.ratios("lacunary")[0])
    move = abs(lac[1] / lac[0] - 1)
    ok = min(mins) > 1e-3 and move < 0.02 and abs(mins[1] / mins[0] - 1) < 0.02
    say(10, ok, f"min ratio {mins[0]:.4f} (N=512) {mins[1]:.4f} (N=1024), lacunary change {move:.2e}")
    assert ok


def test_criterion_11_best_approx(say):
    l2 = LorentzParams.power([0.5], [2])
    gap = 0.0
    for _, f in random_corpus((128,), 5, 31, 6):
        for n in (2, 3, 4, 5):
            cross = grid.hyperbolic_cross([1], n)
            _, err = best_approx_refine(f, cross, l2, 4)
            gap = max(gap, abs(err - lorentz_norm_aniso(residual(f, cross), l2)))
    rep = run_check("approx", _conf("approx.conf"))
    never_worse = all(r.lhs <= r.rhs for r in rep.rows)
    strict = sum(r.lhs < r.rhs for r in rep.rows)
    ok = gap < 1e-8 and never_worse and strict >= 1
    say(11, ok, f"L2 gap {gap:.2e}; tau=3 refined <= partial on all {len(rep.rows)} cases: {never_worse}, "
                f"strict on {strict}")
    assert ok


def test_criterion_12_determinism(say, tmp_path):
    mismatched = []
    confs = sorted(CONFIGS.glob("*.conf"))
    for conf in confs:
        outs = []
        for i, threads in enumerate(("1", "4")):
            out = tmp_path / conf.stem / str(i)
            code = cli.main(["verify", "--config", str(conf), "--threads", threads, "--out", str(out)])
            assert code == 0, conf.name
            outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        if outs[0] != outs[1] or not outs[0]:
            mismatched.append(conf.name)
    ok = not mismatched
    say(12, ok, f"{len(confs)} configs rerun, byte mismatches: {mismatched or 'none'}")
    assert ok
