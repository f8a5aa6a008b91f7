"""Generalized (isotropic and anisotropic) Lorentz norms, Lebesgue and classical
Lorentz norms, plus the block-norm and Dirichlet-kernel equivalence checks.

All norms act on the exact step rearrangement of the grid samples.  The only
quadrature is the cell weight ∫_cell ψ^τ(t) dt/t, which is closed-form for
pure powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import phi as phimod
from .errors import DomainError
from .grid import GridFunction, block_function
from .phi import PhiFunction
from .rearrange import decreasing, iterated_rearrangement
from .report import VerificationReport


@dataclass(frozen=True)
class LorentzParams:
    """Per-axis Φ-functions and exponents (ψ̄, τ̄)."""

    psis: tuple[PhiFunction, ...]
    taus: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "psis", tuple(self.psis))
        object.__setattr__(self, "taus", tuple(float(t) for t in self.taus))
        if len(self.psis) != len(self.taus) or not self.psis:
            raise DomainError("need one exponent per Φ-function")

    @property
    def m(self) -> int:
        return len(self.psis)

    @classmethod
    def power(cls, exponents: Sequence[float], taus: Sequence[float]) -> "LorentzParams":
        return cls(tuple(phimod.power(a) for a in exponents), tuple(taus))

    @classmethod
    def parse(cls, specs: Sequence[str], taus: Sequence[float]) -> "LorentzParams":
        return cls(tuple(phimod.parse_phi(s) for s in specs), tuple(taus))

    def flags(self) -> list[str]:
        out = []
        for j, (psi, tau) in enumerate(zip(self.psis, self.taus), start=1):
            out += [f"axis {j}: {msg}" for msg in phimod.check_invariants(psi)]
            if tau < 1:
                out.append(f"axis {j}: tau={tau} < 1 (not a norm)")
        return out


def _samples(f) -> np.ndarray:
    return f.samples if isinstance(f, GridFunction) else np.asarray(f)


@lru_cache(maxsize=256)
def cell_weights(psi: PhiFunction, tau: float, n: int) -> np.ndarray:
    """∫ ψ^τ(t) dt/t over each cell [i/n, (i+1)/n]."""
    t = np.arange(n + 1, dtype=float) / n
    a = psi.power_exponent
    if a is not None:
        e = a * tau
        if e == 0:
            w = np.empty(n)
            w[0] = math.inf
            w[1:] = np.log(t[2:] / t[1:-1])
        else:
            w = (t[1:] ** e - t[:-1] ** e) / e
            if e < 0:
                w[0] = math.inf
    else:
        w = np.empty(n)
        w[0] = phimod.weight_integral(psi, tau, 0.0, t[1])
        if n > 1:
            k = phimod.LOG_NODES
            lo, hi = np.log(t[1:-1]), np.log(t[2:])
            du = (hi - lo) / k
            mids = lo[:, None] + du[:, None] * (np.arange(k) + 0.5)
            w[1:] = np.sum(psi(np.exp(mids)) ** tau, axis=1) * du
    w.setflags(write=False)
    return w


def _weighted_power_sum(v: np.ndarray, w: np.ndarray, tau: float) -> np.ndarray:
    """Σ_i v_i^τ w_i along axis 0; zero values kill infinite weights."""
    moved = np.moveaxis(v**tau, 0, -1)
    with np.errstate(invalid="ignore"):
        prod = np.where(moved > 0, moved * w, 0.0)
    return prod.sum(axis=-1)


def lorentz_norm_iso(f, psi: PhiFunction, tau: float) -> float:
    """(∫_0^1 f*(t)^τ ψ(t)^τ dt/t)^{1/τ} with f* the joint rearrangement of |f|."""
    if tau <= 0:
        raise DomainError("tau must be positive")
    v = decreasing(np.abs(_samples(f)))
    w = cell_weights(psi, float(tau), v.size)
    total = float(_weighted_power_sum(v, w, tau))
    return total ** (1.0 / tau)


def lorentz_norm_aniso(f, params: LorentzParams) -> float:
    """Iterated norm: innermost t_1 with exponent τ_1, outermost t_m."""
    x = _samples(f)
    if x.ndim != params.m:
        raise DomainError(f"function has m={x.ndim}, parameters have m={params.m}")
    acc = iterated_rearrangement(np.abs(x)).values
    prev = None
    for psi, tau in zip(params.psis, params.taus):
        if prev is not None:
            acc = acc ** (1.0 / prev)
        w = cell_weights(psi, tau, acc.shape[0])
        acc = _weighted_power_sum(acc, w, tau)
        prev = tau
    return float(acc) ** (1.0 / prev)


def lebesgue_norm(f, q: float) -> float:
    if q < 1:
        raise DomainError("q must be at least 1")
    return float(np.mean(np.abs(_samples(f)) ** q)) ** (1.0 / q)


def classical_lorentz_norm(f, q: float, tau: float) -> float:
    """((τ/q) ∫_0^1 (∫_0^t f*)^τ t^{τ(1/q-1)-1} dt)^{1/τ}.

    ∫_0^t f* is piecewise linear in t.  Integer τ is integrated exactly by a
    binomial expansion per cell; other τ by 24-point Gauss-Legendre per cell
    (the first cell is always exact).
    """
    if not (q > 1 and tau > 0):
        raise DomainError("need q > 1 and tau > 0")
    v = decreasing(np.abs(_samples(f)))
    n = v.size
    if v[0] == 0:
        return 0.0
    beta = tau * (1.0 / q - 1.0) - 1.0
    edges = np.arange(n + 1, dtype=float) / n
    # first cell: F(t) = v_0 t
    total = v[0] ** tau * edges[1] ** (tau / q) / (tau / q)
    heads = np.concatenate([[0.0], np.cumsum(v) / n])
    t0, t1 = edges[1:-1], edges[2:]
    c = heads[1:-1] - v[1:] * t0  # F(t) = c + v t on cell i
    slope = v[1:]
    if float(tau).is_integer():
        p = int(tau)
        for k in range(p + 1):
            e = k + beta + 1
            coef = math.comb(p, k) * c ** (p - k) * slope**k
            seg = np.log(t1 / t0) if e == 0 else (t1**e - t0**e) / e
            total += float(np.sum(coef * seg))
    else:
        xg, wg = np.polynomial.legendre.leggauss(24)
        half = 0.5 * (t1 - t0)
        mid = 0.5 * (t1 + t0)
        nodes = mid[:, None] + half[:, None] * xg
        vals = (c[:, None] + slope[:, None] * nodes) ** tau * nodes**beta
        total += float(np.sum(vals @ wg * half))
    return (tau / q * total) ** (1.0 / tau)


# ---------------------------------------------------------------------------
# equivalence checks


def block_norm_check(
    params: LorentzParams,
    s_max: int,
    n: int | None = None,
    s_min: int = 1,
    blocks: Sequence[Sequence[int]] | None = None,
) -> VerificationReport:
    """Norm of the unit block Σ_{k∈ρ(s̄)} e^{i⟨k,x⟩} against ∏ 2^{s_j} ψ_j(2^{-s_j}).

    Without explicit ``blocks`` the diagonal s̄ = (s, ..., s), s = s_min..s_max
    is used on a grid of n = 4·2^{s_max} points per axis.
    """
    rep = VerificationReport("relation18")
    for j, (psi, tau) in enumerate(zip(params.psis, params.taus), start=1):
        for msg in phimod.index_chain_flags(psi, label=f"axis {j}"):
            rep.flag(msg)
        if not 1 < tau < math.inf:
            rep.flag(f"axis {j}: need 1 < tau < inf")
    if blocks is None:
        blocks = [(s,) * params.m for s in range(s_min, s_max + 1)]
    if n is None:
        n = 4 * 2 ** max(max(b) for b in blocks)
    dims = (n,) * params.m
    for s in blocks:
        s = tuple(int(x) for x in s)
        lhs = lorentz_norm_aniso(block_function(dims, s), params)
        rhs = math.prod(2.0**sj * psi(2.0**-sj) for sj, psi in zip(s, params.psis))
        rep.add(",".join(map(str, s)), max(s), lhs, rhs)
    rep.notes["grid"] = n
    return rep


def dirichlet_norm_check(
    phi: PhiFunction,
    eta: float,
    n_max: int,
    N: int | None = None,
    orders: Sequence[int] | None = None,
) -> VerificationReport:
    """‖D_n‖*_{φ̃,η} against n·φ̃(1/n) for n = 2, 4, ..., 2^{n_max}."""
    from .grid import dirichlet_kernel

    rep = VerificationReport("relation5")
    ind = phimod.dilation_indices(phi)
    if not (1 < ind.alpha and ind.beta <= 2 + 1e-12):
        rep.flag(f"need 1 < alpha_phi <= beta_phi <= 2 ({phi.spec})")
    dual = phimod.tilde(phi)
    if orders is None:
        orders = [2**j for j in range(1, n_max + 1)]
    if N is None:
        N = 4 * 2 ** max(1, math.ceil(math.log2(max(orders))))
    for n in orders:
        lhs = lorentz_norm_iso(dirichlet_kernel(n, N), dual, eta)
        rep.add("dirichlet", n, lhs, n * dual(1.0 / n))
    rep.notes["grid"] = N
    return rep
