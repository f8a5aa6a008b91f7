"""Φ-functions: evaluation, dilation indices, the tilde transform, concave
envelopes and the sequence/integral lemmas that only involve Φ-functions.

A Φ-function is concave, non-decreasing and continuous on [0, 1] with
φ(0) = 0.  Two parametric families are shipped::

    pow:a        t**a
    powlog:a:b   t**a * (1 + ln(1/t))**b

plus piecewise-linear tables (``envelope`` / ``custom-table``) and the
tilde transform t/φ(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateFunctionError, DomainError
from .report import VerificationReport

FAMILIES = ("power", "power-log", "envelope", "custom-table", "tilde")
PROBE_DEPTH = 48
# Lower cut-off for integrals starting at 0 when no closed form exists.
TAIL_DEPTH = 60
LOG_NODES = 8


@dataclass(frozen=True)
class PhiFunction:
    family: str
    params: tuple[float, ...] = ()
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = None
    base: "PhiFunction | None" = None
    meta: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown Φ-function family {self.family!r}")

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = self._raw(np.where(t_arr > 0, t_arr, 1.0))
        out = np.where(t_arr > 0, out, 0.0)
        return float(out) if out.ndim == 0 else out

    def _raw(self, t: np.ndarray) -> np.ndarray:
        if self.family == "power":
            (a,) = self.params
            return t**a
        if self.family == "power-log":
            a, b = self.params
            return t**a * (1.0 - np.log(t)) ** b
        if self.family == "tilde":
            return t / self.base._raw(t)
        xs, ys = self.table
        return np.interp(t, xs, ys)

    @property
    def power_exponent(self) -> float | None:
        """Exponent a when φ(t) = t**a exactly, else None."""
        return self.params[0] if self.family == "power" else None

    @property
    def spec(self) -> str:
        if self.family == "power":
            return f"pow:{self.params[0]:g}"
        if self.family == "power-log":
            return f"powlog:{self.params[0]:g}:{self.params[1]:g}"
        if self.family == "tilde":
            return f"tilde({self.base.spec})"
        return self.family


def power(a: float) -> PhiFunction:
    if a < 0:
        raise DomainError("power exponent must be non-negative")
    meta = {"non_phi": True, "reason": "discontinuous at 0"} if a == 0 else {}
    return PhiFunction("power", (float(a),), meta=meta)


def power_log(a: float, b: float) -> PhiFunction:
    return PhiFunction("power-log", (float(a), float(b)))


def table(ts: Sequence[float], values: Sequence[float], family: str = "custom-table") -> PhiFunction:
    """Piecewise-linear Φ-function through (ts, values), anchored at (0, 0)."""
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(values, dtype=float)
    order = np.argsort(ts)
    xs, ys = ts[order], vs[order]
    if xs[0] > 0:
        xs, ys = np.concatenate([[0.0], xs]), np.concatenate([[0.0], ys])
    return PhiFunction(family, table=(tuple(xs), tuple(ys)))


def parse_phi(text: str) -> PhiFunction:
    """Parse ``pow:<a>`` or ``powlog:<a>:<b>``."""
    parts = text.strip().split(":")
    try:
        if parts[0] == "pow" and len(parts) == 2:
            a = float(parts[1])
            if not 0 < a <= 1:
                raise DomainError(f"pow exponent must lie in (0, 1], got {a}")
            return power(a)
        if parts[0] == "powlog" and len(parts) == 3:
            a, b = float(parts[1]), float(parts[2])
            if not 0 < a <= 1:
                raise DomainError(f"powlog exponent must lie in (0, 1], got {a}")
            return power_log(a, b)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed Φ-function spec {text!r}") from exc
    raise DomainError(f"malformed Φ-function spec {text!r}")


def evaluate(phi: PhiFunction, t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t={t} outside [0, 1]")
    return float(phi(t))


def probes(depth: int = PROBE_DEPTH) -> np.ndarray:
    """Dyadic probe grid 2**-j, j = 0..depth (descending)."""
    return 2.0 ** -np.arange(depth + 1, dtype=float)


# ---------------------------------------------------------------------------
# dilation indices and invariants


@dataclass(frozen=True)
class DilationIndices:
    alpha: float
    beta: float
    probe_depth: int


def dilation_indices(phi: PhiFunction, probe_depth: int = PROBE_DEPTH) -> DilationIndices:
    """Estimate liminf/limsup of φ(2t)/φ(t) from the deepest quartile of probes."""
    if probe_depth < 8:
        raise ValueError("probe_depth must be at least 8")
    vals = np.atleast_1d(phi(probes(probe_depth)))
    if np.any(vals[1:] <= 0):
        raise DegenerateFunctionError(f"{phi.spec} vanishes at a positive probe")
    ratios = vals[:-1] / vals[1:]  # index j-1 holds φ(2^{-j+1})/φ(2^{-j})
    tail = ratios[-max(1, probe_depth // 4):]
    return DilationIndices(float(tail.min()), float(tail.max()), probe_depth)


def check_invariants(phi: PhiFunction, depth: int = PROBE_DEPTH, tol: float = 1e-12) -> list[str]:
    """Flags for every Φ-function invariant that fails on the probe grid."""
    flags = []
    if phi(0.0) != 0.0:
        flags.append("phi(0) != 0")
    t = probes(depth)[::-1]
    v = phi(t)
    scale = max(float(np.max(np.abs(v))), 1.0)
    if np.any(np.diff(v) < -tol * scale):
        flags.append("not non-decreasing on probes")
    mid = phi(0.5 * (t[:-1] + t[1:]))
    if np.any(mid < 0.5 * (v[:-1] + v[1:]) - tol * scale):
        flags.append("not concave on probes")
    try:
        ind = dilation_indices(phi, depth)
    except DegenerateFunctionError:
        flags.append("degenerate")
    else:
        if not (1.0 - 1e-12 <= ind.alpha <= ind.beta <= 2.0 + 1e-12):
            flags.append(f"indices outside [1, 2]: alpha={ind.alpha:.6g}, beta={ind.beta:.6g}")
    if phi.meta.get("non_phi"):
        flags.append("non-Φ: " + phi.meta.get("reason", ""))
    return flags


def index_chain_flags(psi: PhiFunction, phi: PhiFunction | None = None, label: str = "") -> list[str]:
    """Flags for a violated 1 < α_ψ ≤ β_ψ < α_φ ≤ β_φ < 2 (φ optional)."""
    ip = dilation_indices(psi)
    flags = []
    tag = f"{label}: " if label else ""
    if not (1.0 < ip.alpha and ip.beta < 2.0):
        flags.append(f"{tag}need 1 < alpha_psi <= beta_psi < 2 ({psi.spec})")
    if phi is not None:
        iphi = dilation_indices(phi)
        if not (1.0 < iphi.alpha and iphi.beta < 2.0):
            flags.append(f"{tag}need 1 < alpha_phi <= beta_phi < 2 ({phi.spec})")
        if not ip.beta < iphi.alpha:
            flags.append(f"{tag}need beta_psi < alpha_phi ({psi.spec} vs {phi.spec})")
    return flags


# ---------------------------------------------------------------------------
# transforms


def tilde(phi: PhiFunction) -> PhiFunction:
    """t ↦ t/φ(t), 0 at 0.  Powers stay powers; tilde∘tilde unwraps."""
    a = phi.power_exponent
    if a is not None:
        return power(1.0 - a)
    if phi.family == "tilde":
        return phi.base
    return PhiFunction("tilde", base=phi)


def _upper_hull(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hull: list[tuple[float, float]] = []
    for p in zip(x, y):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly above the chord
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    hx, hy = zip(*hull)
    return np.array(hx), np.array(hy)


def concave_envelope(ts: Sequence[float], values: Sequence[float]) -> PhiFunction:
    """Least concave majorant of (t_j, g_j) ∪ {(0, 0)} as a Φ-function.

    ``meta`` carries ``K`` = max envelope(t_j)/g_j and ``ok``.  When the hull
    decreases somewhere no Φ-function is equivalent to g; then ``ok`` is False
    and the returned function is the hull flattened at its maximum, which is
    still a Φ-function but with an unbounded K as the grid deepens.
    """
    t = np.asarray(ts, dtype=float)
    g = np.asarray(values, dtype=float)
    if t.shape != g.shape or t.size == 0:
        raise DomainError("need matching, non-empty t and g tables")
    if np.any(g <= 0) or not np.all(np.isfinite(g)):
        raise DomainError("envelope input must be positive and finite")
    if np.any(t <= 0) or np.any(t > 1) or np.any(np.diff(t) >= 0):
        raise DomainError("grid must be strictly descending inside (0, 1]")
    x = np.concatenate([[0.0], t[::-1]])
    y = np.concatenate([[0.0], g[::-1]])
    hx, hy = _upper_hull(x, y)
    monotone = bool(np.all(np.diff(hy) >= 0))
    if not monotone:
        hy = np.maximum.accumulate(hy)
    env = np.interp(t, hx, hy)
    K = float(np.max(env / g))
    out = PhiFunction("envelope", table=(tuple(hx), tuple(hy)))
    out.meta.update(K=K, ok=monotone, monotone=monotone)
    return out


def ensure_phi(phi: PhiFunction, depth: int = PROBE_DEPTH) -> PhiFunction:
    """Return phi, or its concave envelope on the probe grid when it is not a Φ-function."""
    if not check_invariants(phi, depth):
        return phi
    t = probes(depth)
    env = concave_envelope(t, phi(t))
    env.meta["source"] = phi.spec
    return env


# ---------------------------------------------------------------------------
# ∫ φ(t)^p dt/t


def _log_midpoint(phi: PhiFunction, p: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    n_oct = max(1, math.ceil(math.log2(hi / lo)))
    n = LOG_NODES * n_oct
    edges = np.linspace(math.log(lo), math.log(hi), n + 1)
    du = edges[1] - edges[0]
    mids = np.exp(0.5 * (edges[:-1] + edges[1:]))
    return float(np.sum(phi(mids) ** p) * du)


def weight_integral(phi: PhiFunction, p: float, lo: float, hi: float) -> float:
    """∫_lo^hi φ(t)^p dt/t.

    Closed form for pure powers; otherwise midpoint rule on 8 log-uniform
    subintervals per octave.  A zero lower limit is cut at 2**-60 and the rest
    bounded by a geometric continuation of the last two octaves.
    """
    if hi <= lo:
        return 0.0
    a = phi.power_exponent
    if a is not None:
        e = a * p
        if e == 0:
            return math.inf if lo == 0 else math.log(hi / lo)
        if lo == 0:
            return math.inf if e < 0 else hi**e / e
        return (hi**e - lo**e) / e
    if lo > 0:
        return _log_midpoint(phi, p, lo, hi)
    cut = min(hi, 2.0**-TAIL_DEPTH)
    body = _log_midpoint(phi, p, cut, hi)
    last = _log_midpoint(phi, p, cut, 2 * cut)
    prev = _log_midpoint(phi, p, 2 * cut, 4 * cut)
    q = last / prev if prev > 0 else 1.0
    if q >= 1:
        return math.inf
    return body + last * q / (1 - q)


# ---------------------------------------------------------------------------
# lemma checks


def relation9_check(psi: PhiFunction, depth: int = 30) -> VerificationReport:
    """Octave integral ∫_{2^{-n-1}}^{2^{-n}} ψ dt/t against ψ(2^{-n})."""
    rep = VerificationReport("relation9")
    for f in index_chain_flags(psi):
        rep.flag(f)
    for n in range(depth + 1):
        rep.add("octave", n, weight_integral(psi, 1.0, 2.0 ** (-n - 1), 2.0**-n), psi(2.0**-n))
    return rep


def lemma2_check(psi: PhiFunction, q: float, depth: int = 30) -> VerificationReport:
    """Head and tail weighted integrals at x = 2^{-n}, n = 1..depth.

    case ``head``: ∫_0^x ψ^q dt/t  vs  ψ^q(x)
    case ``tail``: ∫_x^1 ψ^{-q} dt/t  vs  ψ^{-q}(x)
    """
    rep = VerificationReport("lemma2")
    for f in index_chain_flags(psi):
        rep.flag(f)
    for n in range(1, depth + 1):
        x = 2.0**-n
        px = psi(x) ** q
        rep.add("head", n, weight_integral(psi, q, 0.0, x), px)
        rep.add("tail", n, weight_integral(psi, -q, x, 1.0), 1.0 / px)
    return rep


def mu_sequence(psi: PhiFunction, phi: PhiFunction, S: int) -> np.ndarray:
    t = 2.0 ** -np.arange(S + 1, dtype=float)
    den = phi(t)
    if np.any(den <= 0):
        raise DegenerateFunctionError(f"{phi.spec} vanishes on the dyadic grid")
    return psi(t) / den


def lemma4_check(psi: PhiFunction, phi: PhiFunction, theta: float, n_max: int = 30) -> VerificationReport:
    """Σ_{s≤n} (ψ/φ)^θ(2^{-s}) against its last term, n = 0..n_max."""
    rep = VerificationReport("lemma4")
    for f in index_chain_flags(psi, phi):
        rep.flag(f)
    terms = mu_sequence(psi, phi, n_max) ** theta
    heads = np.cumsum(terms)
    for n in range(n_max + 1):
        rep.add("sum", n, heads[n], terms[n])
    return rep


def lemma5_check(
    psi: PhiFunction, theta: float, n_min: int = 1, n_max: int = 30, s_max: int = 64
) -> VerificationReport:
    """Σ_{s=n}^{s_max} ψ^θ(2^{-s}) against ψ^θ(2^{-n}).

    The omitted tail beyond s_max is bounded geometrically from the last
    term ratio; the bound is stored in ``notes["truncation_bound"]``.
    """
    rep = VerificationReport("lemma5")
    for f in index_chain_flags(psi):
        rep.flag(f)
    s = np.arange(s_max + 2, dtype=float)
    terms = psi(2.0**-s) ** theta
    tails = np.cumsum(terms[: s_max + 1][::-1])[::-1]
    q = terms[-1] / terms[-2] if terms[-2] > 0 else 1.0
    rep.notes["truncation_bound"] = math.inf if q >= 1 else float(terms[-2] * q / (1 - q))
    for n in range(n_min, n_max + 1):
        rep.add("tail", n, tails[n], terms[n])
    return rep
