"""Check ids and how each one is run from an ExperimentConfig."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .. import phi as phimod
from ..besov import BesovParams, block_norms
from ..config import ExperimentConfig
from ..errors import DomainError
from ..grid import analyze, hyperbolic_cross, load_function, max_block, random_bandlimited
from ..norms import LorentzParams, block_norm_check, dirichlet_norm_check, lorentz_norm_aniso
from ..report import VerificationReport, merge
from . import corpus as corpora
from .approx import best_approx_refine
from .hardy import hardy1_check, hardy6_check
from .theorems import (
    lemma7_check,
    outer_product,
    residual,
    route_check,
    theorem1_check,
    theorem2_check,
    theorem3_check,
    theorem4_check,
    theorem5_check,
)


def _need(cfg: ExperimentConfig, *keys: str) -> None:
    missing = [k for k in keys if not getattr(cfg, k)]
    if missing:
        raise DomainError(f"missing config keys: {', '.join(missing)}")


def _space(cfg) -> LorentzParams:
    _need(cfg, "phi", "eta")
    return LorentzParams.parse(cfg.phi, cfg.eta)


def _target(cfg) -> LorentzParams:
    _need(cfg, "psi", "tau")
    return LorentzParams.parse(cfg.psi, cfg.tau)


def _besov(cfg) -> BesovParams:
    _need(cfg, "r", "theta")
    return BesovParams(_space(cfg), cfg.r, cfg.theta)


def _dims(cfg, depth: int | None = None) -> tuple[int, ...]:
    if cfg.dims:
        return tuple(cfg.dims)
    if depth is None:
        raise DomainError("missing config key: dims")
    return corpora.grid_for_depth(depth, cfg.m)


def _depth(cfg) -> int:
    """Configured block depth; otherwise every block the grid holds."""
    if cfg.depths:
        return max(cfg.depths)
    if cfg.dims:
        return min(max_block(n) for n in cfg.dims)
    return 5


def _corpus(cfg, besov: BesovParams | None = None, depth: int | None = None):
    depth = depth or _depth(cfg)
    dims = _dims(cfg, depth)
    if cfg.functions:
        return [(f"f{i:02d}", load_function(src, dims)) for i, src in enumerate(cfg.functions)]
    if cfg.corpus == "ball":
        if besov is None:
            besov = _besov(cfg)
        return corpora.class_ball_corpus(besov, dims, cfg.count, cfg.seed, depth)
    if cfg.corpus == "blocks":
        return corpora.single_block_corpus(dims, [(s,) * cfg.m for s in range(1, depth + 1)])
    return corpora.random_corpus(dims, cfg.count, cfg.seed, depth)


def _map(fn: Callable, items, threads: int) -> list:
    """Ordered map; with threads > 1 the cases run concurrently."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _sequence(spec: str, n: int, rng: np.random.Generator) -> np.ndarray:
    kind, _, arg = spec.partition(":")
    k = np.arange(n + 1, dtype=float)
    if kind == "geom":
        return float(arg) ** k
    if kind == "const":
        return np.full(n + 1, float(arg))
    if kind == "step":
        return (k <= int(arg)).astype(float)
    if kind == "random":
        return rng.uniform(0.1, 1.0, n + 1)
    raise DomainError(f"unknown sequence spec {spec!r}")


# ---------------------------------------------------------------------------


def run_relation5(cfg, threads):
    _need(cfg, "phi", "eta", "scales")
    orders = [2 ** int(n) for n in cfg.scales]
    return dirichlet_norm_check(phimod.parse_phi(cfg.phi[0]), cfg.eta[0], 0, orders=orders)


def run_relation9(cfg, threads):
    _need(cfg, "psi")
    return phimod.relation9_check(phimod.parse_phi(cfg.psi[0]), int(max(cfg.scales or [30])))


def run_relation18(cfg, threads):
    _need(cfg, "scales")
    target = _target(cfg)
    blocks = [(int(s),) * cfg.m for s in cfg.scales]
    n = cfg.dims[0] if cfg.dims else None
    return block_norm_check(target, 0, n=n, blocks=blocks)


def run_lemma2(cfg, threads):
    _need(cfg, "psi")
    return phimod.lemma2_check(phimod.parse_phi(cfg.psi[0]), cfg.q, int(max(cfg.scales or [30])))


def run_lemma4(cfg, threads):
    _need(cfg, "psi", "phi", "theta")
    return phimod.lemma4_check(
        phimod.parse_phi(cfg.psi[0]), phimod.parse_phi(cfg.phi[0]), cfg.theta[0], int(max(cfg.scales or [30]))
    )


def run_lemma5(cfg, threads):
    _need(cfg, "psi", "theta")
    scales = cfg.scales or [1, 30]
    return phimod.lemma5_check(phimod.parse_phi(cfg.psi[0]), cfg.theta[0], int(min(scales)), int(max(scales)))


def run_hardy1(cfg, threads):
    N = int(max(cfg.scales or [30]))
    rng = np.random.default_rng(cfg.seed)
    a = _sequence(cfg.a, N, rng)
    b = _sequence(cfg.b, N, rng)
    return hardy1_check(a, b, cfg.theta[0] if cfg.theta else 1.0, cfg.variant, N)


def run_hardy6(cfg, threads):
    N = int(max(cfg.scales or [12]))
    rng = np.random.default_rng(cfg.seed)
    a_axes = [_sequence(cfg.a, N, rng) for _ in range(cfg.m)]
    if cfg.b == "random":
        b = rng.uniform(0.1, 1.0, (N + 1,) * cfg.m)
    else:
        b = outer_product([_sequence(cfg.b, N, rng)] * cfg.m)
    thetas = cfg.theta or [1.0] * cfg.m
    return hardy6_check(a_axes, b, thetas, cfg.variant, N)


def run_lemma7(cfg, threads):
    space = _space(cfg)
    depth = _depth(cfg)
    dims = _dims(cfg, depth)
    seeds = np.random.SeedSequence(cfg.seed).generate_state(cfg.count)
    subsets = [e for k in range(cfg.m + 1) for e in itertools.combinations(range(cfg.m), k)]

    def case(i):
        rng = np.random.default_rng(int(seeds[i]))
        T = analyze(random_bandlimited(dims, int(seeds[i]), depth))
        sets = []
        for n in dims:
            mask = rng.random(n) < rng.uniform(0.05, 1.0)
            mask[rng.integers(n)] = True
            sets.append(mask)
        return lemma7_check(T, sets, subsets[i % len(subsets)], space, case_id=f"case{i:03d}")

    return merge("lemma7", _map(case, range(cfg.count), threads))


def run_theorem1(cfg, threads):
    _need(cfg, "scales")
    space = _space(cfg)
    items = _corpus(cfg)

    def case(item):
        cid, f = item
        norms = block_norms(f, space)
        rep = VerificationReport("theorem1")
        for n in cfg.scales:
            theorem1_check(f, (int(n),) * cfg.m, space, cid, norms=norms, report=rep)
        return rep

    return merge("theorem1", _map(case, items, threads))


def run_theorem2(cfg, threads):
    target, space = _target(cfg), _space(cfg)
    depths = [None] if cfg.functions else (cfg.depths or [4, 5, 6])
    parts = []
    for depth in depths:
        items = _corpus(cfg, depth=depth)
        scale = 0 if depth is None else depth
        parts += _map(lambda it: theorem2_check(it[1], target, space, it[0], scale), items, threads)
    return merge("theorem2", parts)


def run_theorem3(cfg, threads):
    besov, target = _besov(cfg), _target(cfg)
    items = _corpus(cfg, besov)
    return merge("theorem3", _map(lambda it: theorem3_check(it[1], besov, target, it[0]), items, threads))


def _run_route(check_id):
    def run(cfg, threads):
        besov, target = _besov(cfg), _target(cfg)
        items = _corpus(cfg, besov)
        rep = merge(check_id, _map(lambda it: route_check(it[1], besov, target, it[0]), items, threads))
        regime = rep.notes.get("regime")
        expected = "holder" if check_id == "relation14" else "jensen"
        if regime != expected:
            rep.flag(f"parameters are in the {regime} regime, not {expected}")
        return rep

    return run


def run_theorem4(cfg, threads):
    _need(cfg, "lambdas")
    target = _target(cfg)
    parts = []
    for depth in cfg.depths or [6]:
        dims = _dims(cfg, depth)
        series = [("lacunary", corpora.lacunary_series(dims, depth))]
        if cfg.count > 1:
            rand = corpora.random_series(dims, depth, cfg.count - 1, cfg.seed)
            series += [(f"series{i:03d}", s) for i, s in enumerate(rand, start=1)]
        parts += _map(lambda it: theorem4_check(it[1], cfg.lambdas, target, it[0]), series, threads)
    return merge("theorem4", parts)


def run_theorem5(cfg, threads):
    _need(cfg, "gamma", "scales")
    besov, target = _besov(cfg), _target(cfg)
    items = _corpus(cfg, besov)

    def case(item):
        return theorem5_check(besov, target, cfg.gamma, cfg.scales, [item])

    return merge("theorem5", _map(case, items, threads))


def run_approx(cfg, threads):
    _need(cfg, "gamma", "scales")
    target = _target(cfg)
    items = _corpus(cfg)

    def case(item):
        cid, f = item
        rep = VerificationReport("approx")
        for n in cfg.scales:
            cross = hyperbolic_cross(cfg.gamma, n, cfg.m)
            _, err = best_approx_refine(f, cross, target, cfg.iters)
            rep.add(cid, n, err, lorentz_norm_aniso(residual(f, cross), target))
        return rep

    return merge("approx", _map(case, items, threads))


CHECKS: dict[str, Callable[[ExperimentConfig, int], VerificationReport]] = {
    "hardy1": run_hardy1,
    "hardy6": run_hardy6,
    "lemma2": run_lemma2,
    "lemma4": run_lemma4,
    "lemma5": run_lemma5,
    "lemma7": run_lemma7,
    "relation5": run_relation5,
    "relation9": run_relation9,
    "relation14": _run_route("relation14"),
    "relation15": _run_route("relation15"),
    "relation18": run_relation18,
    "theorem1": run_theorem1,
    "theorem2": run_theorem2,
    "theorem3": run_theorem3,
    "theorem4": run_theorem4,
    "theorem5": run_theorem5,
    "approx": run_approx,
}


def run_check(check_id: str, cfg: ExperimentConfig, threads: int = 1) -> VerificationReport:
    try:
        runner = CHECKS[check_id]
    except KeyError:
        raise DomainError(f"unknown check {check_id!r}; known: {', '.join(sorted(CHECKS))}") from None
    return runner(cfg, max(1, int(threads)))
