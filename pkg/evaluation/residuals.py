"""
Purpose: Residual analysis against one feature (congestion skew).
What it does:
- residual_profile: equal-population (quantile) bins over the raw feature,
  residual mean / std / count per bin
- residual_points: plot-ready (feature_value, residual) rows

Residual = observed - predicted, so a positive mean means the model
underestimates delay in that bin.
"""

from __future__ import annotations

import logging

import numpy as np
import pandas as pd

from delay_models.artifact import FittedModel
from telemetry.models import FeatureMatrix

from .errors import EvaluationError
from .models import ResidualProfile

logger = logging.getLogger(__name__)


def residuals(model: FittedModel, M: FeatureMatrix) -> np.ndarray:
    return np.asarray(M.y, dtype=float) - model.predict_matrix(M)


def residual_profile(model: FittedModel, M: FeatureMatrix, feature: str, bins: int = 10) -> ResidualProfile:
    if bins < 1:
        raise EvaluationError(f"bins must be >= 1, got {bins}")
    if M.n_rows < bins:
        raise EvaluationError(f"{M.n_rows} rows cannot fill {bins} bins")
    try:
        values = np.asarray(M.unscaled(feature), dtype=float)
    except KeyError as exc:
        raise EvaluationError(str(exc)) from None

    r = residuals(model, M)
    edges = np.unique(np.quantile(values, np.linspace(0.0, 1.0, bins + 1)))

    note = ""
    if edges.size < 2:
        note = f"{feature} is constant ({values[0]:.12g}); single bin"
        logger.warning("residual profile: %s", note)
        edges = np.array([values[0], values[0]])
    elif edges.size < bins + 1:
        note = f"{bins + 1 - edges.size} duplicate quantile edge(s) merged"

    assignment = np.searchsorted(edges[1:-1], values, side="right")
    means, stds, counts = [], [], []
    for i in range(edges.size - 1):
        chunk = r[assignment == i]
        counts.append(int(chunk.size))
        means.append(float(np.mean(chunk)) if chunk.size else None)
        stds.append(float(np.std(chunk)) if chunk.size else None)

    return ResidualProfile(
        feature=feature,
        edges=tuple(float(e) for e in edges),
        means=tuple(means),
        stds=tuple(stds),
        counts=tuple(counts),
        note=note,
    )


def residual_points(model: FittedModel, M: FeatureMatrix, feature: str) -> pd.DataFrame:
    try:
        values = M.unscaled(feature)
    except KeyError as exc:
        raise EvaluationError(str(exc)) from None
    return pd.DataFrame({"feature_value": values, "residual": residuals(model, M)})
