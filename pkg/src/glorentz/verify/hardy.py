"""Discrete Hardy-type inequalities, one- and multi-dimensional.

variant ``a``:  Σ a_n (Σ_{k≥n} b_k)^θ ≲ Σ a_n b_n^θ   when Σ_{k≤n} a_k ≤ C a_n
variant ``b``:  Σ a_n (Σ_{k≤n} b_k)^θ ≲ Σ a_n b_n^θ   when Σ_{k≥n} a_k ≤ C a_n

Both sides are summed directly on the truncation [0, N'] for every N' ≤ N.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..report import VerificationReport

PREMISE_CAP = 1e6


def premise_constant(a: Sequence[float], variant: str) -> float:
    """max_n Σ_{k≤n} a_k / a_n (variant a) or max_n Σ_{k=n}^N a_k / a_n (variant b)."""
    a = np.asarray(a, dtype=float)
    if variant == "a":
        sums = np.cumsum(a)
    elif variant == "b":
        sums = np.cumsum(a[::-1])[::-1]
    else:
        raise ValueError(f"variant must be 'a' or 'b', got {variant!r}")
    return float(np.max(sums / a))


def oracle_constant(c: float, theta: float) -> float:
    """A constant K with LHS ≤ K·RHS given premise constant c.

    θ ≤ 1 follows from swapping the order of summation after (Σb)^θ ≤ Σ b^θ;
    θ ≥ 1 is Leindler's inequality, K = (θc)^θ.
    """
    return c if theta <= 1 else (theta * c) ** theta


def _check_positive(a: np.ndarray, name: str) -> None:
    if np.any(a <= 0) or not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must be positive and finite")


def _partial(b: np.ndarray, variant: str, axis: int) -> np.ndarray:
    if variant == "a":
        return np.flip(np.cumsum(np.flip(b, axis), axis=axis), axis)
    return np.cumsum(b, axis=axis)


def hardy1_check(
    a: Sequence[float], b: Sequence[float], theta: float, variant: str = "a", N: int = 30
) -> VerificationReport:
    a = np.asarray(a, dtype=float)[: N + 1]
    b = np.asarray(b, dtype=float)[: N + 1]
    if a.size < N + 1 or b.size < N + 1:
        raise ValueError(f"need at least {N + 1} terms")
    _check_positive(a, "a")
    if np.any(b < 0):
        raise ValueError("b must be non-negative")
    rep = VerificationReport(f"hardy1{variant}")
    c = premise_constant(a, variant)
    rep.notes.update(premise_constant=c, oracle_constant=oracle_constant(c, theta))
    if c > PREMISE_CAP:
        rep.flag(f"premise constant {c:.3g} exceeds {PREMISE_CAP:g}")
    for n in range(N + 1):
        aa, bb = a[: n + 1], b[: n + 1]
        lhs = float(np.sum(aa * _partial(bb, variant, 0) ** theta))
        rhs = float(np.sum(aa * bb**theta))
        rep.add("seq", n, lhs, rhs)
    return rep


def nested_sum(values: np.ndarray, weights: Sequence[np.ndarray], thetas: Sequence[float]) -> float:
    """{Σ_{n_m} a_{n_m} [ ... [Σ_{n_1} a_{n_1} v^{θ_1}]^{θ_2/θ_1} ... ]}^{1/θ_m}."""
    acc = np.asarray(values, dtype=float)
    for w, th in zip(weights, thetas):
        acc = np.tensordot(np.asarray(w, dtype=float), acc**th, axes=([0], [0])) ** (1.0 / th)
    return float(acc)


def hardy6_check(
    a_axes: Sequence[Sequence[float]],
    b: np.ndarray,
    thetas: Sequence[float],
    variant: str = "a",
    N: int = 12,
) -> VerificationReport:
    """Nested (Lemma-6 style) Hardy inequality on the cubes [0, N']^m."""
    b = np.asarray(b, dtype=float)
    m = b.ndim
    if len(a_axes) != m or len(thetas) != m:
        raise ValueError("need one weight sequence and one exponent per axis")
    if any(th < 1 for th in thetas):
        raise ValueError("thetas must be at least 1")
    a_axes = [np.asarray(a, dtype=float)[: N + 1] for a in a_axes]
    for a in a_axes:
        _check_positive(a, "a")
    if np.any(b < 0):
        raise ValueError("b must be non-negative")
    rep = VerificationReport(f"hardy6{variant}")
    consts = [premise_constant(a, variant) for a in a_axes]
    rep.notes.update(
        premise_constants=consts,
        oracle_constant=math.prod(oracle_constant(c, th) ** (1 / th) for c, th in zip(consts, thetas)),
    )
    for j, c in enumerate(consts, start=1):
        if c > PREMISE_CAP:
            rep.flag(f"axis {j}: premise constant {c:.3g} exceeds {PREMISE_CAP:g}")
    for n in range(N + 1):
        bb = b[(slice(0, n + 1),) * m]
        part = bb
        for axis in range(m):
            part = _partial(part, variant, axis)
        ws = [a[: n + 1] for a in a_axes]
        rep.add("array", n, nested_sum(part, ws, thetas), nested_sum(bb, ws, thetas))
    return rep
