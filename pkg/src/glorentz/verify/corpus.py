"""Seeded test corpora: random band-limited functions, class-ball functions,
single blocks and lacunary block series."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from ..besov import BesovParams, normalize_to_ball
from ..grid import (
    GridFunction,
    SpectralFunction,
    block_mask,
    max_block,
    random_bandlimited,
    synthesize,
)
from ..norms import lorentz_norm_aniso
from .theorems import BlockSeries


def grid_for_depth(depth: int, m: int, pad: int = 1) -> tuple[int, ...]:
    """Smallest power-of-two grid whose blocks reach ``depth`` (times 2^pad)."""
    return (2 ** (depth + 1 + pad),) * m


def random_corpus(
    dims: Sequence[int], count: int, seed: int, depth: int
) -> list[tuple[str, GridFunction]]:
    """Real zero-mean functions with Gaussian coefficients on blocks s_j ≤ depth."""
    seeds = np.random.SeedSequence(seed).generate_state(count)
    return [
        (f"rand{i:03d}", random_bandlimited(dims, int(sd), depth))
        for i, sd in enumerate(seeds)
    ]


def random_phase_block(dims: Sequence[int], s: Sequence[int], rng: np.random.Generator) -> GridFunction:
    """Real function with unit-modulus random-phase coefficients on ρ(s̄)."""
    mask = block_mask(dims, s)
    phases = np.exp(2j * np.pi * rng.random(tuple(dims)))
    return synthesize(SpectralFunction(np.where(mask, phases, 0))).real_part()


def class_ball_corpus(
    besov: BesovParams, dims: Sequence[int], count: int, seed: int, depth: int | None = None
) -> list[tuple[str, GridFunction]]:
    """Σ_s̄ c_s̄ ∏2^{-s_j r_j} g_s̄/‖g_s̄‖*_{X(φ̄)} with random-phase blocks g_s̄,
    c_s̄ uniform in [1/2, 1], rescaled onto the unit sphere of the class norm."""
    dims = tuple(dims)
    if depth is None:
        depth = min(max_block(n) for n in dims)
    rng = np.random.default_rng(seed)
    blocks = list(itertools.product(range(1, depth + 1), repeat=len(dims)))
    out = []
    for i in range(count):
        acc = np.zeros(dims)
        for s in blocks:
            g = random_phase_block(dims, s, rng)
            w = rng.uniform(0.5, 1.0) * float(np.prod([2.0 ** (-sj * r) for sj, r in zip(s, besov.r)]))
            acc += w * g.samples / lorentz_norm_aniso(g, besov.space)
        out.append((f"ball{i:03d}", normalize_to_ball(GridFunction(acc), besov)))
    return out


def single_block_corpus(dims: Sequence[int], blocks: Sequence[Sequence[int]]) -> list[tuple[str, GridFunction]]:
    from ..grid import block_function

    return [("blk" + "_".join(map(str, s)), block_function(dims, s)) for s in blocks]


def lacunary_series(dims: Sequence[int], depth: int, decay: float = 2.0) -> BlockSeries:
    """b_s̄ = ∏ decay^{-s_j} on the diagonal s̄ = (s, ..., s), s = 1..depth."""
    m = len(dims)
    return BlockSeries(tuple(dims), {(s,) * m: decay ** (-s * m) for s in range(1, depth + 1)})


def random_series(dims: Sequence[int], depth: int, count: int, seed: int) -> list[BlockSeries]:
    """Block series with b_s̄ = u_s̄ 2^{-|s̄|}, u uniform in [0, 1], on every s̄ ≤ depth."""
    rng = np.random.default_rng(seed)
    m = len(dims)
    out = []
    for _ in range(count):
        coef = {
            s: rng.uniform(0.0, 1.0) * 2.0 ** (-sum(s))
            for s in itertools.product(range(1, depth + 1), repeat=m)
        }
        out.append(BlockSeries(tuple(dims), coef))
    return out
