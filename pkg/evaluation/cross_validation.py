"""
Purpose: Out-of-sample evaluation schedules.
What it does:
- kfold_indices: seeded shuffled k-fold partition (sklearn KFold)
- kfold_cv: fit on k-1 folds, score the held-out fold, aggregate
- holdout_split: one seeded train/test split

Folds run one after another; fold i is fitted with seed opts.seed + i, so a
report depends only on (data, family, k, seed, options).
"""

from __future__ import annotations

import logging
import math
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from sklearn.model_selection import KFold

from delay_models.errors import ModelError
from delay_models.params import Family
from fitting.engine import fit_family
from fitting.errors import FitError
from fitting.policy import FitOptions, default_fit_options
from telemetry.models import FeatureMatrix

from .errors import EvaluationError
from .metrics import metrics
from .models import CVReport, EvalReport, FoldResult

logger = logging.getLogger(__name__)

METRIC_NAMES = ("mae", "mse", "r2")


def kfold_indices(n: int, k: int = 5, seed: int = 0) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    (train_rows, test_rows) per fold. Rows are shuffled once with `seed`;
    fold sizes differ by at most one and the test sets partition range(n).
    """
    if k < 2:
        raise EvaluationError(f"k must be >= 2, got {k}")
    if n < k:
        raise EvaluationError(f"cannot split {n} rows into {k} folds")
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    return [(train, test) for train, test in splitter.split(np.arange(n))]


def kfold_cv(
    M: FeatureMatrix,
    family,
    k: int = 5,
    seed: int = 0,
    opts: Optional[FitOptions] = None,
) -> CVReport:
    """
    k-fold cross-validation of one family.

    A fold whose fit (or held-out prediction) fails is recorded with its
    error and left out of the aggregates; the report is then not complete.
    """
    family = Family.parse(family)
    opts = opts or default_fit_options()
    opts.validate()

    folds: List[FoldResult] = []
    for index, (train, test) in enumerate(kfold_indices(M.n_rows, k, seed)):
        fold_opts = replace(opts, seed=opts.seed + index)
        try:
            model, _ = fit_family(family, M.take(train), fold_opts)
            held_out = M.take(test)
            report = metrics(held_out.y, model.predict_matrix(held_out))
        except (FitError, ModelError, EvaluationError) as exc:
            logger.warning("%s fold %d/%d failed: %s", family.value, index + 1, k, exc)
            folds.append(FoldResult(index, len(train), len(test), error=str(exc)))
            continue
        logger.debug("%s fold %d/%d: R2 %s, MAE %.6g", family.value, index + 1, k, report.r2, report.mae)
        folds.append(FoldResult(index, len(train), len(test), report=report))

    means, stds = summarize([fold.report for fold in folds if fold.ok])
    logger.info("%s %d-fold CV: mean R2 %s", family.value, k, means["r2"])
    return CVReport(family=family.value, k=k, seed=seed, folds=tuple(folds), means=means, stds=stds)


def summarize(reports: List[EvalReport]) -> Tuple[Dict[str, Optional[float]], Dict[str, Optional[float]]]:
    """Arithmetic means and sample (n-1) standard deviations per metric."""
    means: Dict[str, Optional[float]] = {}
    stds: Dict[str, Optional[float]] = {}
    for name in METRIC_NAMES:
        values = [getattr(r, name) for r in reports if getattr(r, name) is not None]
        means[name] = math.fsum(values) / len(values) if values else None
        stds[name] = float(np.std(values, ddof=1)) if len(values) >= 2 else None
    return means, stds


def holdout_split(n: int, test_fraction: float = 0.2, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Seeded (train_rows, test_rows); both sides get at least one row.
    """
    if not (0.0 < test_fraction < 1.0):
        raise EvaluationError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if n < 2:
        raise EvaluationError(f"holdout needs at least 2 rows, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    n_test = min(max(1, int(round(n * test_fraction))), n - 1)
    return np.sort(order[n_test:]), np.sort(order[:n_test])
