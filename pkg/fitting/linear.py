"""
Purpose: Closed-form least squares for the linear and 2nd-order polynomial baselines.
What it does:
- solve_least_squares: pivoted QR + triangular solve (no normal equations)
- fit_linear: builds the degree-1 or degree-2 design matrix and solves it
"""

from __future__ import annotations

from typing import Union

import numpy as np
from scipy import linalg

from delay_models.families import polynomial_design
from delay_models.params import LinearParams, PolynomialParams
from telemetry.models import FeatureMatrix

from .errors import InsufficientRowsError, RankDeficiencyError


def solve_least_squares(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    argmin_w ||A w - y||, exactly, via column-pivoted QR.

    Raises RankDeficiencyError when a pivot falls below
    max(n, p) * eps * (largest pivot).
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = A.shape
    if n < p:
        raise InsufficientRowsError(f"need at least {p} rows, got {n}")

    Q, R, perm = linalg.qr(A, mode="economic", pivoting=True)
    pivots = np.abs(np.diag(R))
    tol = max(n, p) * np.finfo(float).eps * (pivots[0] if pivots.size else 0.0)
    rank = int(np.count_nonzero(pivots > tol))
    if rank < p:
        raise RankDeficiencyError(rank, p)

    z = linalg.solve_triangular(R, Q.T @ y)
    coef = np.empty(p)
    coef[perm] = z
    return coef


def fit_linear(M: FeatureMatrix, degree: int = 1) -> Union[LinearParams, PolynomialParams]:
    """
    Least-squares fit of the linear (degree 1) or full quadratic (degree 2)
    model over (x1, x2, x3).
    """
    X = M.model_inputs
    if degree == 1:
        design = np.column_stack([np.ones(M.n_rows), X])
        return LinearParams.from_vector(solve_least_squares(design, M.y))
    if degree == 2:
        return PolynomialParams.from_vector(solve_least_squares(polynomial_design(X), M.y))
    raise ValueError(f"degree must be 1 or 2, got {degree}")
