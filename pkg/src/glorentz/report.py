"""Ratio tables produced by every verification check."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable


def ratio_of(lhs: float, rhs: float) -> float:
    """lhs/rhs with the 0/0 sentinel (nan) and x/0 -> inf."""
    if rhs > 0:
        return lhs / rhs
    if lhs == 0:
        return math.nan
    return math.inf


@dataclass(frozen=True)
class Row:
    case_id: str
    scale: float
    lhs: float
    rhs: float
    ratio: float


@dataclass
class VerificationReport:
    """Rows of (case, scale, lhs, rhs, ratio) plus precondition flags.

    The implicit constants of an inequality show up here as the extreme values
    of the ratio column; boundedness is judged from how those extremes move as
    the scale grows.
    """

    check_id: str
    rows: list[Row] = field(default_factory=list)
    precondition_flags: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def add(self, case_id: str, scale: float, lhs: float, rhs: float) -> Row:
        row = Row(str(case_id), scale, float(lhs), float(rhs), ratio_of(float(lhs), float(rhs)))
        self.rows.append(row)
        self.rows.sort(key=lambda r: r.scale)
        return row

    def flag(self, message: str) -> None:
        if message not in self.precondition_flags:
            self.precondition_flags.append(message)

    def extend(self, other: "VerificationReport") -> None:
        self.rows.extend(other.rows)
        self.rows.sort(key=lambda r: r.scale)
        for f in other.precondition_flags:
            self.flag(f)
        for k, v in other.notes.items():
            self.notes.setdefault(k, v)

    # -- column access ------------------------------------------------------

    def ratios(self, case_id: str | None = None) -> list[float]:
        return [r.ratio for r in self.rows if case_id is None or r.case_id == case_id]

    def scales(self) -> list[float]:
        return sorted({r.scale for r in self.rows})

    def case_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for r in self.rows:
            seen.setdefault(r.case_id, None)
        return list(seen)

    def _finite(self, case_id: str | None = None) -> list[float]:
        return [x for x in self.ratios(case_id) if math.isfinite(x)]

    @property
    def max_ratio(self) -> float:
        vals = self._finite()
        return max(vals) if vals else math.nan

    @property
    def min_ratio(self) -> float:
        vals = self._finite()
        return min(vals) if vals else math.nan

    def max_ratio_by_scale(self) -> dict[float, float]:
        out: dict[float, float] = {}
        for r in self.rows:
            if math.isfinite(r.ratio):
                out[r.scale] = max(out.get(r.scale, -math.inf), r.ratio)
        return dict(sorted(out.items()))

    def growth_factors(self) -> list[float]:
        """Ratio of the corpus-max ratio between successive scales."""
        m = list(self.max_ratio_by_scale().values())
        return [b / a for a, b in zip(m, m[1:]) if a > 0]

    @property
    def max_growth(self) -> float:
        g = self.growth_factors()
        return max(g) if g else math.nan

    @property
    def spread(self) -> float:
        """max/min of the finite ratio column."""
        lo, hi = self.min_ratio, self.max_ratio
        return hi / lo if lo > 0 else math.inf

    @property
    def ok(self) -> bool:
        return not self.precondition_flags

    # -- serialization -------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("case_id,scale,lhs,rhs,ratio\n")
        for r in self.rows:
            buf.write(",".join([r.case_id, fmt(r.scale), fmt(r.lhs), fmt(r.rhs), fmt(r.ratio)]))
            buf.write("\n")
        flags = ";".join(self.precondition_flags) or "none"
        buf.write(
            f"summary,max_ratio={fmt(self.max_ratio)},min_ratio={fmt(self.min_ratio)},"
            f"max_growth={fmt(self.max_growth)},flags={flags}\n"
        )
        return buf.getvalue()


def fmt(x: float) -> str:
    if isinstance(x, int) or (isinstance(x, float) and x.is_integer() and abs(x) < 1e15):
        return str(int(x))
    return format(x, ".12g")


def merge(check_id: str, reports: Iterable[VerificationReport]) -> VerificationReport:
    out = VerificationReport(check_id)
    for rep in reports:
        out.extend(rep)
    return out
