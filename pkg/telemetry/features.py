"""
Purpose: Feature engineering between SampleSet and FeatureMatrix.
What it does:
- pearson: product-moment correlation with explicit errors for undefined cases
- select_features: drop one feature of every pair correlated above a
  threshold, never one of the three model features
- to_feature_matrix: rescale retained features into (x1, x2, x3) order
- build_feature_matrix: select + rescale in one call, driven by FeaturePolicy
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from .errors import CorrelationError, DatasetError, EmptyDatasetError, MissingDivisorError
from .models import DELAY, MODEL_FEATURES, RAW_FEATURES, FeatureMatrix, SampleSet, ScalingSpec
from .policy import DEFAULT_DROP_PRIORITY, FeaturePolicy, default_feature_policy

logger = logging.getLogger(__name__)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Pearson correlation coefficient of two equally long vectors.

    Raises CorrelationError on length mismatch, fewer than two values, or a
    zero-variance vector (the coefficient is undefined there).
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise CorrelationError(f"vectors must be 1-D and equally long, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise CorrelationError("pearson needs at least two observations")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise CorrelationError("pearson is undefined for a zero-variance vector")

    r = float(stats.pearsonr(x, y).statistic)
    return min(1.0, max(-1.0, r))


def select_features(
    s: SampleSet,
    threshold: float = 0.95,
    drop_priority: Sequence[str] = DEFAULT_DROP_PRIORITY,
) -> List[str]:
    """
    Prune redundant raw features.

    For every pair with |pearson| strictly above `threshold`, the member
    listed earlier in `drop_priority` is dropped. Features are examined in
    drop-priority order, and a feature is dropped as soon as it is redundant
    with one that is still retained.

    The three model features are never dropped: a redundant pair of model
    features is logged at warning and both stay, and a model feature that is
    redundant with any other feature removes the other one.

    Returns retained names in canonical column order.
    """
    if len(s) == 0:
        raise EmptyDatasetError("cannot select features from an empty SampleSet")

    rank = {name: position for position, name in enumerate(drop_priority)}
    ordered = sorted(RAW_FEATURES, key=lambda name: (rank.get(name, len(rank)), RAW_FEATURES.index(name)))
    columns = {name: s.column(name) for name in RAW_FEATURES}

    dropped = set()
    for position, candidate in enumerate(ordered):
        for other in ordered[position + 1:]:
            if candidate in dropped:
                break
            if other in dropped:
                continue
            try:
                rho = pearson(columns[candidate], columns[other])
            except CorrelationError as exc:
                logger.warning("skipping pair (%s, %s): %s", candidate, other, exc)
                continue
            if abs(rho) <= threshold:
                continue

            if candidate in MODEL_FEATURES and other in MODEL_FEATURES:
                logger.warning(
                    "keeping model features %s and %s: |pearson| = %.4f > %.2f",
                    candidate, other, abs(rho), threshold,
                )
                continue
            loser, keeper = (other, candidate) if candidate in MODEL_FEATURES else (candidate, other)
            logger.info("dropping %s: |pearson| with %s = %.4f > %.2f", loser, keeper, abs(rho), threshold)
            dropped.add(loser)

    return [name for name in RAW_FEATURES if name not in dropped]


def to_feature_matrix(s: SampleSet, retained: Sequence[str], scaling: Optional[ScalingSpec] = None) -> FeatureMatrix:
    """
    Divide each retained feature by its divisor and lay the columns out as
    (x1, x2, x3) = (Client_Frame_Size, Utilization, Arrival_rate_All),
    followed by any other retained feature. The target is left untouched.
    """
    scaling = scaling or ScalingSpec()
    if len(s) == 0:
        raise EmptyDatasetError("cannot build a feature matrix from an empty SampleSet")

    unknown = [name for name in retained if name not in RAW_FEATURES]
    if unknown:
        raise DatasetError(f"unknown feature(s): {', '.join(unknown)}")

    absent = [name for name in MODEL_FEATURES if name not in retained]
    if absent:
        raise DatasetError(f"model feature(s) not retained: {', '.join(absent)}")

    names = tuple(MODEL_FEATURES) + tuple(
        name for name in RAW_FEATURES if name in retained and name not in MODEL_FEATURES
    )
    for name in names:
        if not scaling.has(name):
            raise MissingDivisorError(f"no divisor for retained feature '{name}'")

    X = np.column_stack([scaling.apply(name, s.column(name)) for name in names])
    return FeatureMatrix(X=X, y=s.column(DELAY), feature_names=names, scaling=scaling)


def build_feature_matrix(s: SampleSet, policy: Optional[FeaturePolicy] = None) -> FeatureMatrix:
    policy = policy or default_feature_policy()
    retained = select_features(s, policy.correlation_threshold, policy.drop_priority)
    return to_feature_matrix(s, retained, policy.scaling())


def correlation_matrix(s: SampleSet) -> pd.DataFrame:
    """Pairwise Pearson of the raw features (for reports)."""
    return s.to_frame()[list(RAW_FEATURES)].corr(method="pearson")
