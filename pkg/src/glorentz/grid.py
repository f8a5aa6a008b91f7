"""Sampled 2π-periodic functions on dyadic grids and their Fourier analysis.

Samples live in an array of shape (N_1, ..., N_m) indexed [i_1, ..., i_m] at
x_j = 2π i_j / N_j.  Spectra use the same shape in numpy FFT layout, so the
coefficient of k̄ sits at index (k_1 mod N_1, ..., k_m mod N_m).

Dyadic blocks follow the usual convention ρ(0) = {0} on an axis with s_j = 0
(the literal range 1/2 ≤ |k| < 1 is empty).  Nyquist frequencies |k_j| = N_j/2
belong to no block.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ResolutionError

MAX_DIM = 3


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(n) for n in dims)
    if not 1 <= len(dims) <= MAX_DIM:
        raise DomainError(f"dimension m must be 1..{MAX_DIM}, got {len(dims)}")
    for n in dims:
        if n < 4 or n & (n - 1):
            raise DomainError(f"grid size {n} is not a power of two >= 4")
    return dims


@dataclass(frozen=True, eq=False)
class GridFunction:
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples)
        _check_dims(arr.shape)
        arr = arr.astype(complex if np.iscomplexobj(arr) else float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.samples.shape

    @property
    def m(self) -> int:
        return self.samples.ndim

    @property
    def size(self) -> int:
        return self.samples.size

    @property
    def is_real(self) -> bool:
        if not np.iscomplexobj(self.samples):
            return True
        scale = max(float(np.max(np.abs(self.samples))), 1.0)
        return float(np.max(np.abs(self.samples.imag))) < 1e-10 * scale

    def real_part(self) -> "GridFunction":
        return GridFunction(self.samples.real)

    def abs(self) -> np.ndarray:
        return np.abs(self.samples)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.samples + other.samples)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.samples - other.samples)

    def __mul__(self, c: complex) -> "GridFunction":
        return GridFunction(self.samples * c)

    __rmul__ = __mul__

    def __truediv__(self, c: complex) -> "GridFunction":
        return GridFunction(self.samples / c)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    coefficients: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coefficients, dtype=complex).copy()
        _check_dims(arr.shape)
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.coefficients.shape

    @property
    def m(self) -> int:
        return self.coefficients.ndim

    def __getitem__(self, k: Sequence[int]) -> complex:
        k = tuple(k) if np.ndim(k) else (int(k),)
        for kj, n in zip(k, self.dims):
            if abs(kj) > n // 2:
                return 0j
        return complex(self.coefficients[tuple(kj % n for kj, n in zip(k, self.dims))])

    def items(self, tol: float = 0.0) -> Iterable[tuple[tuple[int, ...], complex]]:
        """Non-zero coefficients as (k̄, a_k̄) pairs with signed indices."""
        freqs = [frequencies(n) for n in self.dims]
        for idx in zip(*np.nonzero(np.abs(self.coefficients) > tol)):
            yield tuple(int(freqs[j][i]) for j, i in enumerate(idx)), complex(self.coefficients[idx])

    def energy(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def masked(self, mask: np.ndarray) -> "SpectralFunction":
        return SpectralFunction(np.where(mask, self.coefficients, 0))


def frequencies(n: int) -> np.ndarray:
    """Signed integer frequencies in FFT order (Nyquist appears as -n/2)."""
    return np.rint(np.fft.fftfreq(n) * n).astype(int)


def grid_points(dims: Sequence[int]) -> list[np.ndarray]:
    """Broadcastable coordinate arrays x_j = 2π i / N_j."""
    dims = _check_dims(dims)
    out = []
    for j, n in enumerate(dims):
        shape = [1] * len(dims)
        shape[j] = n
        out.append((2 * np.pi * np.arange(n) / n).reshape(shape))
    return out


def analyze(f: GridFunction) -> SpectralFunction:
    return SpectralFunction(np.fft.fftn(f.samples) / f.size)


def synthesize(F: SpectralFunction) -> GridFunction:
    return GridFunction(np.fft.ifftn(F.coefficients) * F.coefficients.size)


# ---------------------------------------------------------------------------
# dyadic blocks


def axis_block_index(n: int) -> np.ndarray:
    """Block number s of every frequency on an axis of size n (-1 at Nyquist)."""
    k = np.abs(frequencies(n))
    s = np.zeros(n, dtype=int)
    nz = k > 0
    s[nz] = np.floor(np.log2(k[nz])).astype(int) + 1
    s[k == n // 2] = -1
    return s


def max_block(n: int) -> int:
    """Largest s with ρ(s) inside an axis of size n (2^s ≤ n/2)."""
    return int(math.log2(n)) - 1


def rho_block(s: Sequence[int]) -> np.ndarray:
    """All k̄ in ρ(s̄), as an array of shape (count, m)."""
    s = tuple(int(x) for x in np.atleast_1d(s))
    if any(x < 0 for x in s):
        raise DomainError(f"negative block index {s}")
    axes = []
    for sj in s:
        if sj == 0:
            axes.append([0])
        else:
            pos = list(range(2 ** (sj - 1), 2**sj))
            axes.append(sorted([-k for k in pos] + pos))
    return np.array(list(itertools.product(*axes)), dtype=int).reshape(-1, len(s))


def block_size(s: Sequence[int]) -> int:
    return math.prod(1 if sj == 0 else 2**sj for sj in s)


def block_mask(dims: Sequence[int], s: Sequence[int]) -> np.ndarray:
    dims = tuple(dims)
    s = tuple(int(x) for x in np.atleast_1d(s))
    if len(s) != len(dims):
        raise DomainError(f"block {s} does not match dimension {len(dims)}")
    if any(x < 0 for x in s):
        raise DomainError(f"negative block index {s}")
    for sj, n in zip(s, dims):
        if sj > max_block(n):
            raise ResolutionError(f"block {s} exceeds Nyquist for grid {dims}")
    mask = np.ones(dims, dtype=bool)
    for j, (sj, n) in enumerate(zip(s, dims)):
        shape = [1] * len(dims)
        shape[j] = n
        mask = mask & (axis_block_index(n) == sj).reshape(shape)
    return mask


def all_blocks(dims: Sequence[int]) -> list[tuple[int, ...]]:
    """Every s̄ whose block fits the grid, axis 1 fastest."""
    ranges = [range(max_block(n) + 1) for n in dims]
    return [tuple(reversed(s)) for s in itertools.product(*reversed(ranges))]


def dyadic_block(F: SpectralFunction, s: Sequence[int]) -> GridFunction:
    return synthesize(F.masked(block_mask(F.dims, s)))


def block_decomposition(F: SpectralFunction, tol: float = 1e-13) -> dict[tuple[int, ...], GridFunction]:
    """δ_s̄ for every block that fits and carries a coefficient above tol·max|a_k̄|."""
    out = {}
    cut = tol * float(np.max(np.abs(F.coefficients)))
    for s in all_blocks(F.dims):
        mask = block_mask(F.dims, s)
        if np.any(np.abs(F.coefficients[mask]) > cut):
            out[s] = synthesize(F.masked(mask))
    return out


# ---------------------------------------------------------------------------
# hyperbolic crosses


@dataclass(frozen=True)
class HyperbolicCross:
    gamma: tuple[float, ...]
    n: float
    block_list: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return len(self.gamma)

    @cached_property
    def index_set(self) -> np.ndarray:
        if not self.block_list:
            return np.zeros((0, self.m), dtype=int)
        return np.concatenate([rho_block(s) for s in self.block_list])

    def __len__(self) -> int:
        return sum(block_size(s) for s in self.block_list)

    def mask(self, dims: Sequence[int]) -> np.ndarray:
        out = np.zeros(tuple(dims), dtype=bool)
        for s in self.block_list:
            out |= block_mask(dims, s)
        return out


def hyperbolic_cross(gamma: Sequence[float], n: float, m: int | None = None) -> HyperbolicCross:
    """Blocks s̄ ∈ Z_+^m with ⟨s̄, γ̄⟩ < n."""
    gamma = tuple(float(g) for g in np.atleast_1d(gamma))
    if m is not None and len(gamma) != m:
        raise DomainError(f"gamma has {len(gamma)} entries, expected {m}")
    if any(g <= 0 for g in gamma):
        raise DomainError("gamma entries must be positive")
    if n < 0:
        raise DomainError("cross scale n must be non-negative")
    bounds = [range(int(math.ceil(n / g)) + 1) for g in gamma]
    blocks = tuple(
        tuple(reversed(s))
        for s in itertools.product(*reversed(bounds))
        if sum(sj * g for sj, g in zip(reversed(s), gamma)) < n
    )
    return HyperbolicCross(gamma, n, blocks)


def partial_sum(F: SpectralFunction, cross: HyperbolicCross) -> GridFunction:
    return synthesize(F.masked(cross.mask(F.dims)))


def dirichlet_kernel(n: int, N: int) -> GridFunction:
    """Samples of D_n(t) = Σ_{|k|≤n} e^{ikt} at t = 2πi/N."""
    if not 0 <= n < N // 2:
        raise ResolutionError(f"Dirichlet kernel of order {n} needs N > {2 * n}")
    coef = (np.abs(frequencies(N)) <= n).astype(complex)
    return GridFunction(synthesize(SpectralFunction(coef)).samples.real)


def zero_mean_project(F: SpectralFunction) -> SpectralFunction:
    """Zero every coefficient with some k_j = 0."""
    mask = np.ones(F.dims, dtype=bool)
    for j, n in enumerate(F.dims):
        shape = [1] * F.m
        shape[j] = n
        mask = mask & (frequencies(n) != 0).reshape(shape)
    return F.masked(mask)


def is_zero_mean(F: SpectralFunction, tol: float = 1e-12) -> bool:
    scale = max(float(np.max(np.abs(F.coefficients))), 1e-300)
    rest = F.coefficients - zero_mean_project(F).coefficients
    return float(np.max(np.abs(rest))) <= tol * scale


# ---------------------------------------------------------------------------
# generators and file I/O


def from_coefficients(dims: Sequence[int], coeffs: dict) -> GridFunction:
    """Synthesize Σ c_k e^{i⟨k,x⟩} from a {k̄: c} mapping."""
    dims = _check_dims(dims)
    arr = np.zeros(dims, dtype=complex)
    for k, c in coeffs.items():
        k = tuple(np.atleast_1d(k))
        if any(abs(kj) >= n // 2 for kj, n in zip(k, dims)):
            raise ResolutionError(f"frequency {k} does not fit grid {dims}")
        arr[tuple(kj % n for kj, n in zip(k, dims))] += c
    return _tidy(synthesize(SpectralFunction(arr)))


def _tidy(f: GridFunction) -> GridFunction:
    return f.real_part() if f.is_real else f


def block_function(dims: Sequence[int], s: Sequence[int], coefficient: complex = 1.0) -> GridFunction:
    """coefficient · Σ_{k∈ρ(s̄)} e^{i⟨k,x⟩}."""
    dims = _check_dims(dims)
    mask = block_mask(dims, s)
    return _tidy(synthesize(SpectralFunction(mask * complex(coefficient))))


def random_bandlimited(
    dims: Sequence[int], seed: int, lmax: int, zero_mean: bool = True, real: bool = True
) -> GridFunction:
    """Gaussian coefficients on blocks with every s_j ≤ lmax (real by default)."""
    dims = _check_dims(dims)
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    keep = np.ones(dims, dtype=bool)
    for j, n in enumerate(dims):
        if lmax > max_block(n):
            raise ResolutionError(f"lmax={lmax} exceeds Nyquist for grid {dims}")
        shape = [1] * len(dims)
        shape[j] = n
        sj = axis_block_index(n)
        keep = keep & ((sj >= 0) & (sj <= lmax)).reshape(shape)
    coef = np.where(keep, coef, 0)
    F = SpectralFunction(coef)
    if zero_mean:
        F = zero_mean_project(F)
    f = synthesize(F)
    return f.real_part() if real else f


def rect_indicator(dims: Sequence[int], fractions: Sequence[float]) -> GridFunction:
    """Indicator of the box ∏[0, 2π a_j) sampled on the grid."""
    dims = _check_dims(dims)
    if len(fractions) != len(dims):
        raise DomainError("one side fraction per axis is required")
    out = np.ones(dims)
    for j, (n, a) in enumerate(zip(dims, fractions)):
        if not 0 <= a <= 1:
            raise DomainError(f"side fraction {a} outside [0, 1]")
        shape = [1] * len(dims)
        shape[j] = n
        out = out * (np.arange(n) < round(a * n)).reshape(shape)
    return GridFunction(out)


def generate(spec: str, dims: Sequence[int]) -> GridFunction:
    """Build a function from ``gen:block:...``, ``gen:random-bandlimited:...`` or ``gen:rect:...``."""
    parts = spec.split(":")
    if parts[0] != "gen" or len(parts) < 3:
        raise DomainError(f"malformed generator spec {spec!r}")
    kind = parts[1]
    if len(parts) != (4 if kind == "random-bandlimited" else 3):
        raise DomainError(f"malformed generator spec {spec!r}")
    try:
        if kind == "block":
            return block_function(dims, [int(x) for x in parts[2].split(",")])
        if kind == "random-bandlimited":
            return random_bandlimited(dims, int(parts[2]), int(parts[3]))
        if kind == "rect":
            return rect_indicator(dims, [float(x) for x in parts[2].split(",")])
    except ValueError as exc:
        if isinstance(exc, (DomainError, ResolutionError)):
            raise
        raise DomainError(f"malformed generator spec {spec!r}") from exc
    raise DomainError(f"unknown generator {kind!r}")


def write_grid(f: GridFunction, path) -> None:
    kind = "real" if not np.iscomplexobj(f.samples) else "complex"
    flat = f.samples.ravel(order="F")  # axis 1 fastest
    with open(path, "w") as fh:
        fh.write(f"# m={f.m} dims={','.join(map(str, f.dims))} kind={kind}\n")
        for v in flat:
            if kind == "real":
                fh.write(f"{float(v)!r}\n")
            else:
                fh.write(f"{float(v.real)!r},{float(v.imag)!r}\n")


def read_grid(path) -> GridFunction:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise DomainError("grid file must start with a '# m=... dims=... kind=...' header")
        fields = dict(tok.split("=", 1) for tok in header[1:].split())
        m = int(fields["m"])
        dims = tuple(int(x) for x in fields["dims"].split(","))
        kind = fields.get("kind", "real")
        if len(dims) != m:
            raise DomainError(f"header declares m={m} but {len(dims)} dims")
        rows = [line.strip() for line in fh if line.strip()]
    if len(rows) != math.prod(dims):
        raise DomainError(f"expected {math.prod(dims)} samples, found {len(rows)}")
    if kind == "real":
        vals = np.array([float(r) for r in rows])
    elif kind == "complex":
        vals = np.array([complex(*map(float, r.split(","))) for r in rows])
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return GridFunction(vals.reshape(dims, order="F"))


def load_function(source: str, dims: Sequence[int] | None = None) -> GridFunction:
    if source.startswith("gen:"):
        if dims is None:
            raise DomainError("generator inputs need grid dims")
        return generate(source, dims)
    return read_grid(source)
