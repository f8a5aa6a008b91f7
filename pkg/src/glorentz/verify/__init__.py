"""Ratio checks for the Hardy-type, embedding and approximation inequalities."""

from .approx import best_approx_refine
from .hardy import hardy1_check, hardy6_check
from .registry import CHECKS, run_check
from .theorems import (
    BlockSeries,
    lemma7_check,
    route_check,
    theorem1_check,
    theorem2_check,
    theorem3_check,
    theorem4_check,
    theorem5_check,
)

__all__ = [
    "BlockSeries",
    "CHECKS",
    "best_approx_refine",
    "hardy1_check",
    "hardy6_check",
    "lemma7_check",
    "route_check",
    "run_check",
    "theorem1_check",
    "theorem2_check",
    "theorem3_check",
    "theorem4_check",
    "theorem5_check",
]
