"""Flat ``key = value`` experiment configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError
from .phi import parse_phi

PER_AXIS = ("dims", "phi", "eta", "psi", "tau", "r", "theta", "gamma", "lambda")
CORPUS_KINDS = ("random", "ball", "blocks")


class ConfigError(DomainError):
    """Collected, line-numbered configuration errors."""

    def __init__(self, errors: list[str]):
        super().__init__("\n".join(errors))
        self.errors = errors


@dataclass
class ExperimentConfig:
    checks: list[str] = field(default_factory=list)
    m: int = 1
    dims: list[int] = field(default_factory=list)
    phi: list[str] = field(default_factory=list)
    eta: list[float] = field(default_factory=list)
    psi: list[str] = field(default_factory=list)
    tau: list[float] = field(default_factory=list)
    r: list[float] = field(default_factory=list)
    theta: list[float] = field(default_factory=list)
    gamma: list[float] = field(default_factory=list)
    lambdas: list[float] = field(default_factory=list)
    scales: list[float] = field(default_factory=list)
    depths: list[int] = field(default_factory=list)
    functions: list[str] = field(default_factory=list)
    corpus: str = "random"
    count: int = 10
    seed: int | None = None
    out: str = "reports"
    iters: int = 10
    q: float = 2.0
    variant: str = "a"
    a: str = "geom:2"
    b: str = "geom:0.25"

    def uses_randomness(self) -> bool:
        gen = any(src.startswith("gen:random") for src in self.functions)
        builtin = not self.functions and self.corpus in ("random", "ball")
        needs_corpus = any(
            c in ("lemma7", "theorem1", "theorem2", "theorem3", "relation14", "relation15", "theorem5", "approx")
            for c in self.checks
        )
        seq = "random" in (self.a, self.b) and any(c.startswith("hardy") for c in self.checks)
        return gen or (builtin and needs_corpus) or seq or "theorem4" in self.checks


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _scales(text: str) -> list[float]:
    """Comma list whose items may be ranges ``a..b``."""
    out: list[float] = []
    for item in text.split(","):
        item = item.strip()
        if ".." in item:
            lo, hi = item.split("..")
            out.extend(float(x) for x in range(int(lo), int(hi) + 1))
        elif item:
            out.append(float(item))
    return out


def _strings(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _as_int(x: float) -> int | float:
    return int(x) if float(x).is_integer() else x


KEYS = {
    "check": ("checks", _strings),
    "checks": ("checks", _strings),
    "m": ("m", int),
    "dims": ("dims", lambda t: [int(x) for x in _strings(t)]),
    "phi": ("phi", _strings),
    "eta": ("eta", _floats),
    "psi": ("psi", _strings),
    "tau": ("tau", _floats),
    "r": ("r", _floats),
    "theta": ("theta", _floats),
    "gamma": ("gamma", _floats),
    "lambda": ("lambdas", _floats),
    "n": ("scales", lambda t: [_as_int(x) for x in _scales(t)]),
    "scales": ("scales", lambda t: [_as_int(x) for x in _scales(t)]),
    "depth": ("depths", lambda t: [int(x) for x in _scales(t)]),
    "functions": ("functions", lambda t: [x.strip() for x in t.split(";") if x.strip()]),
    "corpus": ("corpus", str.strip),
    "count": ("count", int),
    "seed": ("seed", int),
    "out": ("out", str.strip),
    "iters": ("iters", int),
    "q": ("q", float),
    "variant": ("variant", str.strip),
    "a": ("a", str.strip),
    "b": ("b", str.strip),
}


def parse_config(text: str, seed: int | None = None) -> ExperimentConfig:
    """Parse and validate; ``seed`` (e.g. from the command line) overrides the file."""
    cfg = ExperimentConfig()
    errors: list[str] = []
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        attr, conv = KEYS[key]
        try:
            setattr(cfg, attr, conv(value))
        except ValueError:
            errors.append(f"line {lineno}: malformed value for {key!r}: {value!r}")
            continue
        lines[attr] = lineno
    if seed is not None:
        cfg.seed = seed
    if not errors:
        errors += _validate(cfg, lines)
    if errors:
        raise ConfigError(errors)
    return cfg


def _validate(cfg: ExperimentConfig, lines: dict[str, int]) -> list[str]:
    errors = []

    def at(key: str) -> str:
        return f"line {lines[key]}" if key in lines else "config"

    if cfg.m not in (1, 2, 3):
        errors.append(f"{at('m')}: m must be 1, 2 or 3")
        return errors
    for key in PER_AXIS:
        attr = "lambdas" if key == "lambda" else key
        vals = getattr(cfg, attr)
        if vals and len(vals) != cfg.m:
            errors.append(f"{at(attr)}: {key} has {len(vals)} entries but m = {cfg.m}")
    for key in ("phi", "psi"):
        for spec in getattr(cfg, key):
            try:
                parse_phi(spec)
            except DomainError as exc:
                errors.append(f"{at(key)}: {exc}")
    if cfg.corpus not in CORPUS_KINDS:
        errors.append(f"{at('corpus')}: corpus must be one of {', '.join(CORPUS_KINDS)}")
    if cfg.variant not in ("a", "b"):
        errors.append(f"{at('variant')}: variant must be a or b")
    if cfg.seed is None and cfg.uses_randomness():
        errors.append("config: a seed is required when random generators are used")
    return errors
