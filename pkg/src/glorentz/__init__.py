"""Generalized Lorentz norms, dyadic blocks, hyperbolic crosses and Besov
seminorms on sampled periodic functions, with numerical checks of the
embedding and approximation inequalities built on them."""

from .besov import BesovParams, besov_seminorm, class_norm
from .grid import GridFunction, SpectralFunction, analyze, hyperbolic_cross, synthesize
from .norms import LorentzParams, lebesgue_norm, lorentz_norm_aniso, lorentz_norm_iso
from .phi import PhiFunction, dilation_indices, parse_phi
from .report import VerificationReport

__all__ = [
    "BesovParams",
    "GridFunction",
    "LorentzParams",
    "PhiFunction",
    "SpectralFunction",
    "VerificationReport",
    "analyze",
    "besov_seminorm",
    "class_norm",
    "dilation_indices",
    "hyperbolic_cross",
    "lebesgue_norm",
    "lorentz_norm_aniso",
    "lorentz_norm_iso",
    "parse_phi",
    "synthesize",
]
