"""Limit law of the running maximum of a periodically distributed lattice walk."""

from .boundary import BoundaryValues, Method, build_system, closed_form_boundary, solve_boundary
from .cycle import CaseLabel, CyclePattern, CycleSummary, classify, eval_GN, summarize
from .errors import LimitWalkError, NumericalError, ValidationError
from .limitdist import BuildConfig, LimitDistribution, build
from .oracle import dp_bound, mc_estimate, verify
from .pmf import DiscretePmf, discrete_weibull_unit, from_weights, geometric, shifted_poisson
from .roots import RootConfig, RootSet, find_unit_roots

__all__ = [
    "BoundaryValues", "BuildConfig", "CaseLabel", "CyclePattern", "CycleSummary", "DiscretePmf",
    "LimitDistribution", "LimitWalkError", "Method", "NumericalError", "RootConfig", "RootSet",
    "ValidationError", "build", "build_system", "classify", "closed_form_boundary",
    "discrete_weibull_unit", "dp_bound", "eval_GN", "find_unit_roots", "from_weights", "geometric",
    "mc_estimate", "shifted_poisson", "solve_boundary", "summarize", "verify",
]
