"""
Fitting package.

Public API:
- fit_family (engine entry point), fit_nonlinear
- fit_linear, fit_mlp, init_guess, levenberg_marquardt
- FitOptions, MLPOptions, default_fit_options, quick_fit_options
- FitReport, ConvergenceReason
"""

from .engine import fit_family, fit_nonlinear
from .errors import (
    FitError,
    FitFailedError,
    InsufficientRowsError,
    MLPDivergenceError,
    RankDeficiencyError,
    StartAbortedError,
)
from .initial import init_guess
from .levenberg import LMResult, levenberg_marquardt
from .linear import fit_linear, solve_least_squares
from .mlp import fit_mlp
from .models import ConvergenceReason, FitReport
from .policy import FitOptions, MLPOptions, default_fit_options, quick_fit_options

__all__ = [
    "fit_family",
    "fit_nonlinear",
    "fit_linear",
    "solve_least_squares",
    "fit_mlp",
    "init_guess",
    "levenberg_marquardt",
    "LMResult",
    "FitOptions",
    "MLPOptions",
    "default_fit_options",
    "quick_fit_options",
    "FitReport",
    "ConvergenceReason",
    "FitError",
    "FitFailedError",
    "InsufficientRowsError",
    "MLPDivergenceError",
    "RankDeficiencyError",
    "StartAbortedError",
]
