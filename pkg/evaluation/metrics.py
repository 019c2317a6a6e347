"""
Purpose: Point metrics for delay predictions.
"""

from __future__ import annotations

import numpy as np
from sklearn.metrics import mean_absolute_error, mean_squared_error, r2_score

from .errors import EvaluationError
from .models import EvalReport


def metrics(y, y_hat) -> EvalReport:
    """
    MAE, MSE and R² = 1 - SSres/SStot.

    R² is None when y has zero variance (SStot = 0) instead of sklearn's
    placeholder value.
    """
    y = np.asarray(y, dtype=float).ravel()
    y_hat = np.asarray(y_hat, dtype=float).ravel()
    if y.shape != y_hat.shape:
        raise EvaluationError(f"length mismatch: {y.size} observed vs {y_hat.size} predicted")
    if y.size == 0:
        raise EvaluationError("cannot evaluate empty vectors")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(y_hat))):
        raise EvaluationError("observed and predicted values must be finite")

    r2 = None
    if y.size >= 2 and np.any(y != y[0]):
        r2 = float(r2_score(y, y_hat))
    return EvalReport(
        mae=float(mean_absolute_error(y, y_hat)),
        mse=float(mean_squared_error(y, y_hat)),
        r2=r2,
        n=int(y.size),
    )
