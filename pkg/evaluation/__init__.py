"""
Evaluation package.

Public API:
- metrics
- kfold_indices, kfold_cv, holdout_split
- residual_profile, residual_points
- time_inference
- compare_families, comparison_frame
"""

from .compare import compare_families, comparison_frame
from .cross_validation import holdout_split, kfold_cv, kfold_indices, summarize
from .errors import EvaluationError
from .metrics import metrics
from .models import ComparisonRow, CVReport, EvalReport, FoldResult, ResidualProfile, TimingReport
from .residuals import residual_points, residual_profile, residuals
from .timing import time_inference

__all__ = [
    "metrics",
    "kfold_indices",
    "kfold_cv",
    "holdout_split",
    "summarize",
    "residuals",
    "residual_profile",
    "residual_points",
    "time_inference",
    "compare_families",
    "comparison_frame",
    "EvalReport",
    "FoldResult",
    "CVReport",
    "TimingReport",
    "ResidualProfile",
    "ComparisonRow",
    "EvaluationError",
]
