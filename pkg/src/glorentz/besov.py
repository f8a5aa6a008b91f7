"""Nikol'skii–Besov seminorm over a generalized Lorentz space X(φ̄) = L*_{φ̄,η̄}."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .grid import GridFunction, analyze, block_decomposition, is_zero_mean
from .norms import LorentzParams, lorentz_norm_aniso
from .phi import PhiFunction, mu_sequence


@dataclass(frozen=True)
class BesovParams:
    space: LorentzParams
    r: tuple[float, ...]
    theta: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(float(x) for x in self.r))
        object.__setattr__(self, "theta", tuple(float(x) for x in self.theta))
        m = self.space.m
        if len(self.r) != m or len(self.theta) != m:
            raise DomainError(f"r and theta need {m} entries")
        if any(x <= 0 for x in self.r):
            raise DomainError("smoothness r_j must be positive")
        if any(x < 1 for x in self.theta):
            raise DomainError("theta_j must be at least 1")

    @property
    def m(self) -> int:
        return self.space.m


@dataclass(frozen=True)
class WeightSeq:
    values: np.ndarray

    def __getitem__(self, s: int) -> float:
        return float(self.values[s])

    def __len__(self) -> int:
        return len(self.values)


def mixed_norm(values: np.ndarray, exponents: Sequence[float]) -> float:
    """Mixed ℓ_θ̄ norm with axis 1 innermost; θ = inf is a sup."""
    acc = np.abs(np.asarray(values, dtype=float))
    if acc.ndim != len(exponents):
        raise DomainError("one exponent per axis is required")
    for p in exponents:
        if math.isinf(p):
            acc = acc.max(axis=0)
        else:
            acc = np.sum(acc**p, axis=0) ** (1.0 / p)
    return float(acc)


def block_norms(f: GridFunction, space: LorentzParams) -> dict[tuple[int, ...], float]:
    """‖δ_s̄(f)‖*_{X(φ̄)} for every non-empty block of f."""
    return {s: lorentz_norm_aniso(b, space) for s, b in block_decomposition(analyze(f)).items()}


def block_array(norms: dict[tuple[int, ...], float], dims: Sequence[int]) -> np.ndarray:
    """Dense array indexed by s̄ from a {s̄: value} map."""
    shape = tuple(int(math.log2(n)) for n in dims)
    out = np.zeros(shape)
    for s, v in norms.items():
        out[s] = v
    return out


def _weights_r(shape: Sequence[int], r: Sequence[float]) -> np.ndarray:
    w = np.ones(tuple(shape))
    for j, (n, rj) in enumerate(zip(shape, r)):
        sh = [1] * len(shape)
        sh[j] = n
        w = w * (2.0 ** (np.arange(n) * rj)).reshape(sh)
    return w


def _require_zero_mean(f: GridFunction) -> None:
    if not is_zero_mean(analyze(f), tol=1e-10):
        raise PreconditionError("Besov seminorm needs a zero-mean input (apply zero_mean_project)")


def besov_seminorm(f: GridFunction, params: BesovParams, norms: dict | None = None) -> float:
    """‖{∏ 2^{s_j r_j} ‖δ_s̄(f)‖*_{X(φ̄)}}‖_{ℓ_θ̄}; blocks beyond Nyquist are absent."""
    if f.m != params.m:
        raise DomainError("dimension mismatch")
    _require_zero_mean(f)
    if norms is None:
        norms = block_norms(f, params.space)
    arr = block_array(norms, f.dims)
    return mixed_norm(arr * _weights_r(arr.shape, params.r), params.theta)


def class_norm(f: GridFunction, params: BesovParams, norms: dict | None = None) -> float:
    return lorentz_norm_aniso(f, params.space) + besov_seminorm(f, params, norms)


def normalize_to_ball(f: GridFunction, params: BesovParams) -> GridFunction:
    c = class_norm(f, params)
    if c == 0:
        raise DomainError("cannot normalize the zero function")
    return f / c


def mu_weights(psi: PhiFunction, phi: PhiFunction, S: int) -> WeightSeq:
    """μ(s) = ψ(2^{-s})/φ(2^{-s}), s = 0..S."""
    return WeightSeq(mu_sequence(psi, phi, S))


class Condition13(NamedTuple):
    value: float
    finite: bool


def summability_exponent(tau: float, theta: float) -> float:
    """ε = τβ' with β = θ/τ when θ > τ, else ∞."""
    if theta <= tau:
        return math.inf
    if math.isinf(theta):
        return tau
    return tau * theta / (theta - tau)


def condition13_eval(
    psi: PhiFunction, phi: PhiFunction, r: float, tau: float, theta: float, S: int = 64
) -> Condition13:
    """(Σ_{s≤S} (μ(s) 2^{-s r})^ε)^{1/ε}, or the sup when ε = ∞.

    ``finite`` comes from the tail: the ratio of the last two terms must be
    below 1 (strictly, for finite ε; non-increasing for the sup).
    """
    eps = summability_exponent(tau, theta)
    x = mu_sequence(psi, phi, S) * 2.0 ** (-np.arange(S + 1) * r)
    q = x[-1] / x[-2]
    if math.isinf(eps):
        return Condition13(float(x.max()), bool(q <= 1 + 1e-12))
    return Condition13(float(np.sum(x**eps) ** (1 / eps)), bool(q < 1 - 1e-9))
