"""Numerical checks of the set-average bound, the embedding theorems, the
lower bound for block series and the hyperbolic-cross approximation bound.

Each check returns a VerificationReport whose ratio column is the measured
implicit constant.  Nothing here asserts a constant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import phi as phimod
from ..besov import (
    BesovParams,
    block_array,
    block_norms,
    class_norm,
    condition13_eval,
    mixed_norm,
    summability_exponent,
)
from ..errors import DomainError, ResolutionError
from ..grid import (
    GridFunction,
    HyperbolicCross,
    SpectralFunction,
    analyze,
    block_mask,
    frequencies,
    is_zero_mean,
    max_block,
    synthesize,
)
from ..norms import LorentzParams, lorentz_norm_aniso
from ..phi import mu_sequence
from ..rearrange import maximal_average
from ..report import VerificationReport

# Coefficients below this fraction of the largest one are FFT round-off.
NOISE_FLOOR = 1e-13


def _space_flags(rep: VerificationReport, space: LorentzParams, label: str) -> None:
    for j, (phi, eta) in enumerate(zip(space.psis, space.taus), start=1):
        for msg in phimod.index_chain_flags(phi, label=f"{label} axis {j}"):
            rep.flag(msg)


def _chain_flags(rep: VerificationReport, target: LorentzParams, space: LorentzParams) -> None:
    if target.m != space.m:
        raise DomainError("target and space dimensions differ")
    for j, (psi, phi) in enumerate(zip(target.psis, space.psis), start=1):
        for msg in phimod.index_chain_flags(psi, phi, label=f"axis {j}"):
            rep.flag(msg)
    for j, tau in enumerate(target.taus, start=1):
        if tau < 1:
            rep.flag(f"axis {j}: tau={tau} < 1")


def _zero_mean_flag(rep: VerificationReport, f: GridFunction, case_id: str) -> None:
    if not is_zero_mean(analyze(f), tol=1e-10):
        rep.flag(f"{case_id}: input is not zero-mean")


def outer_product(vectors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(())
    for v in vectors:
        out = np.multiply.outer(out, v)
    return out


# ---------------------------------------------------------------------------
# set averages of trigonometric polynomials


def _degree(T: SpectralFunction) -> tuple[int, ...]:
    cut = NOISE_FLOOR * max(float(np.max(np.abs(T.coefficients))), 1e-300)
    nz = np.abs(T.coefficients) > cut
    out = []
    for j, n in enumerate(T.dims):
        other = tuple(a for a in range(T.m) if a != j)
        used = np.any(nz, axis=other) if other else nz
        k = np.abs(frequencies(n))[used]
        out.append(max(int(k.max()) if k.size else 0, 1))
    return tuple(out)


def lemma7_check(
    T: SpectralFunction,
    sets: Sequence[np.ndarray],
    e: Sequence[int],
    space: LorentzParams,
    case_id: str = "T",
    report: VerificationReport | None = None,
) -> VerificationReport:
    """∫_E |T| against ∏_{e} |E_j|/φ_j(1/n_j) · ∏_{ē} φ̃_j(|E_j|) · ‖T‖*.

    ``sets`` are boolean masks over the grid cells of each axis; ``e`` holds
    0-based axis numbers.  Measures are normalized (the cube has measure 1).
    """
    rep = report or VerificationReport("lemma7")
    if T.m != space.m or len(sets) != T.m:
        raise DomainError("dimension mismatch")
    masks = [np.asarray(s, dtype=bool) for s in sets]
    if any(mk.shape != (n,) for mk, n in zip(masks, T.dims)):
        raise DomainError("each set mask must cover one axis of the grid")
    if any(not mk.any() for mk in masks):
        return rep
    _space_flags(rep, space, "phi")
    e = set(int(j) for j in e)
    n = _degree(T)
    f = synthesize(T)
    weight = outer_product([mk.astype(float) for mk in masks])
    lhs = float(np.sum(f.abs() * weight)) / f.size
    rhs = lorentz_norm_aniso(f, space)
    for j, (phi, mk) in enumerate(zip(space.psis, masks)):
        size = mk.mean()
        if j in e:
            rhs *= size / phi(1.0 / n[j])
        else:
            rhs *= phimod.tilde(phi)(size)
    rep.add(case_id, max(n), lhs, rhs)
    return rep


# ---------------------------------------------------------------------------
# maximal set average against block norms


def theorem1_check(
    f: GridFunction,
    n: Sequence[int],
    space: LorentzParams,
    case_id: str = "f",
    norms: dict | None = None,
    report: VerificationReport | None = None,
) -> VerificationReport:
    """f̄(t̄) at t_j = 2^{-n_j} against the tail-block and G_e(n̄) sums.

    Every s̄ ∈ N^m lies in exactly one G_e(n̄), e = {j: s_j ≤ n_j}; its
    weight is ∏_{j∉e} 1/φ_j(t_j) · ∏_{j∈e} 1/φ_j(2^{-s_j}).  The first
    (e = ∅) sum is counted once more, as displayed.
    """
    rep = report or VerificationReport("theorem1")
    n = tuple(int(x) for x in n)
    if len(n) != f.m or f.m != space.m:
        raise DomainError("dimension mismatch")
    for nj, N in zip(n, f.dims):
        if nj < 1:
            raise DomainError("n_j must be at least 1")
        if nj >= int(math.log2(N)):
            raise ResolutionError(f"t = 2^-{nj} is below the grid resolution 1/{N}")
    _space_flags(rep, space, "phi")
    _zero_mean_flag(rep, f, case_id)
    t = [2.0**-nj for nj in n]
    lhs = maximal_average(f, t)
    if norms is None:
        norms = block_norms(f, space)
    inv_t = [1.0 / phi(tj) for phi, tj in zip(space.psis, t)]
    tail = 0.0
    grouped = 0.0
    for s, v in norms.items():
        if any(sj == 0 for sj in s):
            continue
        w = 1.0
        for sj, nj, phi, it in zip(s, n, space.psis, inv_t):
            w *= 1.0 / phi(2.0**-sj) if sj <= nj else it
        grouped += w * v
        if all(sj > nj for sj, nj in zip(s, n)):
            tail += v
    rhs = math.prod(inv_t) * tail + grouped
    rep.add(case_id, max(n), lhs, rhs)
    return rep


# ---------------------------------------------------------------------------
# embeddings


def _mu_weight_array(target: LorentzParams, space: LorentzParams, shape: Sequence[int]) -> np.ndarray:
    return outer_product([mu_sequence(psi, phi, L - 1) for psi, phi, L in zip(target.psis, space.psis, shape)])


def embedding_sum(f: GridFunction, target: LorentzParams, space: LorentzParams, norms: dict | None = None) -> float:
    """Mixed ℓ_τ̄ norm of ∏ μ_j(s_j)‖δ_s̄(f)‖*_{X(φ̄)}."""
    if norms is None:
        norms = block_norms(f, space)
    arr = block_array(norms, f.dims)
    return mixed_norm(arr * _mu_weight_array(target, space, arr.shape), target.taus)


def theorem2_check(
    f: GridFunction,
    target: LorentzParams,
    space: LorentzParams,
    case_id: str = "f",
    scale: float = 0,
    norms: dict | None = None,
    report: VerificationReport | None = None,
) -> VerificationReport:
    rep = report or VerificationReport("theorem2")
    _chain_flags(rep, target, space)
    _zero_mean_flag(rep, f, case_id)
    lhs = lorentz_norm_aniso(f, target)
    rhs = embedding_sum(f, target, space, norms)
    rep.add(case_id, scale, lhs, rhs)
    return rep


def _regime(target: LorentzParams, besov: BesovParams) -> str:
    kinds = {"holder" if tau < th else "jensen" for tau, th in zip(target.taus, besov.theta)}
    return kinds.pop() if len(kinds) == 1 else "mixed"


def route_values(
    f: GridFunction, besov: BesovParams, target: LorentzParams, norms: dict | None = None
) -> dict[str, float]:
    """Intermediate quantities of the Hölder (τ<θ) or Jensen (θ≤τ) route.

    sigma = ‖x·y‖_{ℓ_τ̄} with x = ∏ μ_j(s_j) 2^{-s_j r_j}, y = ∏ 2^{s_j r_j}‖δ_s̄‖;
    bound = ‖x‖_{ℓ_ε̄}·‖y‖_{ℓ_θ̄} with ε_j = τ_jθ_j/(θ_j-τ_j), or ∞ when θ_j ≤ τ_j.
    sigma ≤ bound holds exactly, axis by axis.
    """
    space = besov.space
    if norms is None:
        norms = block_norms(f, space)
    arr = block_array(norms, f.dims)
    shape = arr.shape
    ramp = [2.0 ** (np.arange(L) * r) for L, r in zip(shape, besov.r)]
    x = _mu_weight_array(target, space, shape) / outer_product(ramp)
    y = arr * outer_product(ramp)
    eps = [summability_exponent(tau, th) for tau, th in zip(target.taus, besov.theta)]
    x_norm = mixed_norm(x, eps)
    y_norm = mixed_norm(y, besov.theta)
    return {
        "sigma": mixed_norm(x * y, target.taus),
        "weight_norm": x_norm,
        "seminorm": y_norm,
        "bound": x_norm * y_norm,
    }


def theorem3_check(
    f: GridFunction,
    besov: BesovParams,
    target: LorentzParams,
    case_id: str = "f",
    scale: float = 0,
    report: VerificationReport | None = None,
) -> VerificationReport:
    """‖f‖*_{ψ̄,τ̄} / class_norm(f), with the route values kept in the notes."""
    rep = report or VerificationReport("theorem3")
    space = besov.space
    _chain_flags(rep, target, space)
    _zero_mean_flag(rep, f, case_id)
    for j, (psi, phi, r, tau, th) in enumerate(
        zip(target.psis, space.psis, besov.r, target.taus, besov.theta), start=1
    ):
        if not condition13_eval(psi, phi, r, tau, th).finite:
            rep.flag(f"axis {j}: weight sequence not summable")
    norms = block_norms(f, space)
    lhs = lorentz_norm_aniso(f, target)
    rhs = class_norm(f, besov, norms)
    rep.add(case_id, scale, lhs, rhs)
    route = route_values(f, besov, target, norms)
    route["regime"] = _regime(target, besov)
    rep.notes.setdefault("route", {})[case_id] = route
    return rep


def route_check(
    f: GridFunction,
    besov: BesovParams,
    target: LorentzParams,
    case_id: str = "f",
    scale: float = 0,
    report: VerificationReport | None = None,
) -> VerificationReport:
    """sigma against its Hölder/Jensen bound; the ratio never exceeds 1."""
    regime = _regime(target, besov)
    rep = report or VerificationReport({"holder": "relation14", "jensen": "relation15"}.get(regime, "route"))
    route = route_values(f, besov, target)
    rep.notes["regime"] = regime
    rep.add(case_id, scale, route["sigma"], route["bound"])
    return rep


# ---------------------------------------------------------------------------
# lower bound for block series


@dataclass(frozen=True)
class BlockSeries:
    """Σ b_s̄ Σ_{k∈ρ(s̄)} e^{i⟨k,x⟩} over a finite set of s̄ ≥ 1."""

    dims: tuple[int, ...]
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        coef = {tuple(int(x) for x in np.atleast_1d(s)): float(b) for s, b in self.coefficients.items()}
        for s in coef:
            if len(s) != len(self.dims) or any(x < 1 for x in s):
                raise DomainError(f"block index {s} must have {len(self.dims)} entries ≥ 1")
            if any(x > max_block(n) for x, n in zip(s, self.dims)):
                raise ResolutionError(f"block {s} exceeds Nyquist for grid {self.dims}")
        object.__setattr__(self, "coefficients", coef)

    @property
    def m(self) -> int:
        return len(self.dims)

    def depth(self) -> int:
        return max((max(s) for s in self.coefficients), default=0)

    def spectrum(self) -> SpectralFunction:
        arr = np.zeros(self.dims, dtype=complex)
        for s, b in self.coefficients.items():
            arr[block_mask(self.dims, s)] = b
        return SpectralFunction(arr)

    def realization(self) -> GridFunction:
        return synthesize(self.spectrum()).real_part()

    def block(self, s: Sequence[int]) -> GridFunction:
        s = tuple(s)
        arr = np.zeros(self.dims, dtype=complex)
        arr[block_mask(self.dims, s)] = self.coefficients.get(s, 0.0)
        return synthesize(SpectralFunction(arr)).real_part()

    def refined(self, factor: int = 2) -> "BlockSeries":
        return BlockSeries(tuple(n * factor for n in self.dims), dict(self.coefficients))


def theorem4_check(
    series: BlockSeries,
    lambdas: Sequence[float],
    target: LorentzParams,
    case_id: str = "series",
    scale: float | None = None,
    report: VerificationReport | None = None,
) -> VerificationReport:
    """‖f‖*_{ψ̄,τ̄} against ‖{∏ 2^{s_j/λ_j} ψ_j(2^{-s_j}) ‖δ_s̄‖*_{λ̄,τ̄}}‖_{ℓ_τ̄}."""
    rep = report or VerificationReport("theorem4")
    if len(lambdas) != series.m or target.m != series.m:
        raise DomainError("dimension mismatch")
    for j, (lam, psi, tau) in enumerate(zip(lambdas, target.psis, target.taus), start=1):
        ind = phimod.dilation_indices(psi)
        if not (1 < 2 ** (1 / lam) < ind.alpha and ind.beta < 2):
            rep.flag(f"axis {j}: need 1 < 2^(1/lambda) < alpha_psi <= beta_psi < 2")
        if not 1 < tau < math.inf:
            rep.flag(f"axis {j}: need 1 < tau < inf")
    inner = LorentzParams(tuple(phimod.power(1.0 / lam) for lam in lambdas), target.taus)
    f = series.realization()
    lhs = lorentz_norm_aniso(f, target)
    shape = tuple(int(math.log2(n)) for n in series.dims)
    terms = np.zeros(shape)
    for s, b in series.coefficients.items():
        if b == 0:
            continue
        w = math.prod(2.0 ** (sj / lam) * psi(2.0**-sj) for sj, lam, psi in zip(s, lambdas, target.psis))
        terms[s] = w * lorentz_norm_aniso(series.block(s), inner)
    rhs = mixed_norm(terms, target.taus)
    rep.add(case_id, series.depth() if scale is None else scale, lhs, rhs)
    return rep


# ---------------------------------------------------------------------------
# hyperbolic-cross approximation


def residual(f: GridFunction, cross: HyperbolicCross) -> GridFunction:
    """f − S_n^γ(f), with round-off coefficients below the noise floor dropped."""
    F = analyze(f).coefficients
    cut = NOISE_FLOOR * max(float(np.max(np.abs(F))), 1e-300)
    keep = ~cross.mask(f.dims) & (np.abs(F) > cut)
    out = synthesize(SpectralFunction(np.where(keep, F, 0)))
    return out.real_part() if f.is_real else out


def _axis_weights(psi, phi, r, S) -> np.ndarray:
    return mu_sequence(psi, phi, S) * 2.0 ** (-np.arange(S + 1) * r)


def _geometric_tail(x: np.ndarray, eps: float) -> float:
    """Estimate of ‖x_{S+1..∞}‖_{ℓ_ε} continuing the last ratio geometrically."""
    q = x[-1] / x[-2]
    if q >= 1:
        return math.inf
    if math.isinf(eps):
        return float(x[-1] * q)
    return float(x[-1] * q / (1 - q**eps) ** (1 / eps))


def approximation_bound(
    besov: BesovParams, target: LorentzParams, gamma: Sequence[float], n: float, S: int | None = None
) -> tuple[float, float, int]:
    """RHS of the approximation bound over Y(γ̄, n) = {s̄: ⟨s̄,γ̄⟩ ≥ n}.

    Returns (value on the box s_j ≤ S, tail bound for s̄ outside the box, S).
    Per axis the exponent is ε_j (ℓ_ε for τ_j < θ_j, sup for θ_j ≤ τ_j).
    """
    m = besov.m
    if S is None:
        S = {1: 96, 2: 48}.get(m, 24)
    space = besov.space
    xs = [_axis_weights(psi, phi, r, S) for psi, phi, r in zip(target.psis, space.psis, besov.r)]
    eps = [summability_exponent(tau, th) for tau, th in zip(target.taus, besov.theta)]
    x = outer_product(xs)
    grids = np.meshgrid(*[np.arange(S + 1)] * m, indexing="ij")
    inner = sum(g * gj for g, gj in zip(grids, gamma))
    value = mixed_norm(np.where(inner >= n - 1e-12, x, 0.0), eps)
    heads = [mixed_norm(xj, [e]) for xj, e in zip(xs, eps)]
    tails = [_geometric_tail(xj, e) for xj, e in zip(xs, eps)]
    tail = math.prod(h + t for h, t in zip(heads, tails)) - math.prod(heads)
    return value, tail, S


def theorem5_check(
    besov: BesovParams,
    target: LorentzParams,
    gamma: Sequence[float],
    n_range: Sequence[float],
    corpus: Sequence[tuple[str, GridFunction]],
    normalize: bool = True,
    report: VerificationReport | None = None,
) -> VerificationReport:
    """‖f − S_n^γ f‖*_{ψ̄,τ̄} against the weight norm over Y(γ̄, n), per f and n."""
    from ..grid import hyperbolic_cross

    rep = report or VerificationReport("theorem5")
    space = besov.space
    m = besov.m
    if len(gamma) != m or target.m != m:
        raise DomainError("dimension mismatch")
    _chain_flags(rep, target, space)
    for j, (psi, phi, r, tau, th) in enumerate(
        zip(target.psis, space.psis, besov.r, target.taus, besov.theta), start=1
    ):
        if not condition13_eval(psi, phi, r, tau, th).finite:
            rep.flag(f"axis {j}: weight sequence not summable")
    regime = _regime(target, besov)
    if regime == "mixed":
        rep.flag("mixed regime: per-axis exponents combine l_eps and sup")
    rep.notes["regime"] = regime
    bounds = {n: approximation_bound(besov, target, gamma, n) for n in n_range}
    rep.notes["rhs_truncation"] = {n: b[2] for n, b in bounds.items()}
    rep.notes["rhs_tail_bound"] = {n: b[1] for n, b in bounds.items()}
    scales = []
    for case_id, f in corpus:
        _zero_mean_flag(rep, f, case_id)
        if normalize:
            c = class_norm(f, besov)
            if c > 0:
                f = f / c
        for n in n_range:
            cross = hyperbolic_cross(gamma, n, m)
            lhs = lorentz_norm_aniso(residual(f, cross), target)
            rep.add(case_id, n, lhs, bounds[n][0])
        scales.append(tuple(max_block(N) for N in f.dims))
    rep.notes["nyquist_blocks"] = sorted(set(scales))
    return rep


def cross_blocks_beyond(gamma: Sequence[float], n: float, dims: Sequence[int]) -> list[tuple[int, ...]]:
    """Blocks of the grid lying in Y(γ̄, n)."""
    ranges = [range(1, max_block(N) + 1) for N in dims]
    return [s for s in itertools.product(*ranges) if sum(a * g for a, g in zip(s, gamma)) >= n]
