"""Non-increasing rearrangements on the unit cube and the iterated maximal average.

Grid samples are treated as step functions with cells of width 1/N_j on each
axis, so every rearrangement here is exact: sorting the sample values is the
rearrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ResolutionError
from .grid import GridFunction


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise-constant function on [0, 1]^m with uniform cells.

    ``values[i_1, ..., i_m]`` is the value on the cell ∏[i_j/N_j, (i_j+1)/N_j).
    """

    values: np.ndarray

    @property
    def dims(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def breakpoints(self) -> tuple[np.ndarray, ...]:
        return tuple(np.arange(n + 1) / n for n in self.dims)

    def __call__(self, *t: float) -> float:
        """Left-continuous evaluation, matching f*(t) = inf{λ: μ(f > λ) < t}."""
        idx = tuple(max(math.ceil(tj * n) - 1, 0) for tj, n in zip(t, self.dims))
        return float(self.values[idx])


def _abs_values(f) -> np.ndarray:
    if isinstance(f, GridFunction):
        return f.abs()
    return np.abs(np.asarray(f))


def rearrange_1d(samples: Sequence[float]) -> StepFunction:
    v = np.asarray(samples, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise DomainError("samples must be finite")
    if np.any(v < 0):
        raise DomainError("rearrangement needs non-negative samples; take |f| first")
    return StepFunction(np.sort(v)[::-1].copy())


def decreasing(values: np.ndarray) -> np.ndarray:
    """Joint rearrangement of all values into a 1-D non-increasing array."""
    return np.sort(np.asarray(values).ravel())[::-1]


def iterated_rearrangement(f) -> StepFunction:
    """Sort |f| descending along axis 1 fibers, then axis 2, ..., axis m."""
    v = _abs_values(f).astype(float)
    if v.ndim > 3:
        raise DomainError("at most three variables are supported")
    for axis in range(v.ndim):
        v = -np.sort(-v, axis=axis)
    return StepFunction(v)


def distribution_function(samples, lam: float) -> float:
    """μ{x: |f(x)| > λ} on the normalized cube."""
    if lam < 0:
        raise DomainError("λ must be non-negative")
    v = _abs_values(samples)
    return float(np.count_nonzero(v > lam)) / v.size


def _prefix_mean(v: np.ndarray, k: int, axis: int) -> np.ndarray:
    top = -np.sort(-v, axis=axis)
    head = np.take(top, np.arange(k), axis=axis).astype(np.longdouble)
    return np.sum(head, axis=axis) / k


def maximal_average(f, t: Sequence[float]) -> float:
    """Iterated sup of set averages, sup over |E_j| ≥ t_j taken axis 1 first.

    For a fiber the sup of averages over sets of measure ≥ t is the average of
    its largest t·N samples, so each stage is a sorted prefix mean.
    """
    v = _abs_values(f).astype(float)
    t = list(np.atleast_1d(t))
    if len(t) != v.ndim:
        raise DomainError(f"need {v.ndim} scale parameters, got {len(t)}")
    counts = []
    for tj, n in zip(t, v.shape):
        k = tj * n
        if not (0 < tj <= 1) or abs(k - round(k)) > 1e-9 or round(k) < 1:
            raise ResolutionError(f"t={tj} is not a positive multiple of the cell width 1/{n}")
        counts.append(int(round(k)))
    acc = v.astype(np.longdouble)
    for k in counts:
        acc = _prefix_mean(acc, k, axis=0)
    return float(acc)
