"""
Purpose: One consolidated comparison table across model families.
What it does:
- runs kfold_cv for every requested family on the same folds
- optionally times per-sample inference of a model fitted on all rows
- returns rows sorted by mean R² (best first, undefined R² last)
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import pandas as pd

from delay_models.errors import ModelError
from delay_models.params import Family
from fitting.engine import fit_family
from fitting.errors import FitError
from fitting.policy import FitOptions, default_fit_options
from telemetry.models import FeatureMatrix

from .cross_validation import kfold_cv
from .models import ComparisonRow
from .timing import time_inference

logger = logging.getLogger(__name__)


def compare_families(
    M: FeatureMatrix,
    families: Sequence,
    k: int = 5,
    seed: int = 0,
    opts: Optional[FitOptions] = None,
    timing_n: int = 0,
) -> List[ComparisonRow]:
    """
    timing_n = 0 skips the timing columns.
    """
    opts = opts or default_fit_options()
    rows: List[ComparisonRow] = []
    for tag in families:
        family = Family.parse(tag)
        cv = kfold_cv(M, family, k=k, seed=seed, opts=opts)
        timing = None
        if timing_n > 0:
            try:
                model, _ = fit_family(family, M, opts)
                timing = time_inference(model, M, n=timing_n)
            except (FitError, ModelError) as exc:
                logger.warning("%s: no timing (full-data fit failed: %s)", family.value, exc)
        rows.append(ComparisonRow(family=family.value, cv=cv, timing=timing))

    rows.sort(key=lambda row: (row.mean("r2") is None, -(row.mean("r2") or 0.0)))
    return rows


def comparison_frame(rows: Sequence[ComparisonRow]) -> pd.DataFrame:
    """Table layout for --pretty output and CSV export."""
    return pd.DataFrame([row.to_dict() for row in rows])
