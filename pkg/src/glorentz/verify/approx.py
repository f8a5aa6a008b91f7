"""Best approximation by polynomials with spectrum in a hyperbolic cross.

The search starts from the partial sum S_n^γ(f) and runs cyclic coordinate
descent over the real and imaginary parts of the coefficients on the cross.
A step is accepted only when it strictly lowers the error, so the error
history never increases and the result is never worse than the partial sum.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ..grid import GridFunction, HyperbolicCross, SpectralFunction, analyze, synthesize
from ..norms import LorentzParams, lorentz_norm_aniso
from .theorems import residual


def _coordinates(mask: np.ndarray, real: bool) -> list[tuple[tuple[int, ...], tuple[int, ...] | None]]:
    """Index pairs (k, -k) on the cross; for real f each pair is listed once."""
    dims = mask.shape
    out, seen = [], set()
    for k in map(tuple, np.argwhere(mask)):
        neg = tuple((-kj) % n for kj, n in zip(k, dims))
        if real:
            if neg in seen:
                continue
            seen.add(k)
            out.append((k, neg if neg != k else None))
        else:
            out.append((k, None))
    return out


def _basis(dims, k, neg, part: str, real: bool) -> np.ndarray:
    """Samples of the direction moved by one coordinate."""
    arr = np.zeros(dims, dtype=complex)
    unit = 1.0 if part == "re" else 1j
    arr[k] = unit
    if real and neg is not None:
        arr[neg] = np.conj(unit)
    g = synthesize(SpectralFunction(arr)).samples
    return g.real if real else g


def best_approx_refine(
    f: GridFunction,
    cross: HyperbolicCross,
    target: LorentzParams,
    iters: int = 10,
    history: list | None = None,
) -> tuple[GridFunction, float]:
    """Return (t*, ‖f − t*‖*_{ψ̄,τ̄}) with t* spectrally inside the cross."""
    if any(tau < 1 for tau in target.taus):
        raise DomainError("refinement needs tau_j >= 1")
    if cross.m != f.m:
        raise DomainError("dimension mismatch")
    real = f.is_real
    r = residual(f, cross).samples.copy()
    err = lorentz_norm_aniso(r, target)
    if history is not None:
        history.append(err)
    mask = cross.mask(f.dims)
    coords = _coordinates(mask, real)
    if err > 0 and coords:
        moves = []
        for k, neg in coords:
            moves.append((k, neg, "re"))
            if not real or neg is not None:
                moves.append((k, neg, "im"))
        step = np.full(len(moves), err)
        basis = {}
        for _ in range(iters):
            for i, (k, neg, p) in enumerate(moves):
                if step[i] < 1e-14 * err:
                    continue
                g = basis.get(i)
                if g is None:
                    g = basis[i] = _basis(f.dims, k, neg, p, real)
                for sign in (1.0, -1.0):
                    trial = r - sign * step[i] * g
                    e = lorentz_norm_aniso(trial, target)
                    if e < err:
                        r, err = trial, e
                        break
                else:
                    step[i] *= 0.5
            if history is not None:
                history.append(err)
    approx = f.samples - r
    return GridFunction(approx.real if real else approx), err
