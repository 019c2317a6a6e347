"""
Purpose: Per-sample inference latency.

One predict_one call per timed sample (no batching), monotonic
nanosecond clock, garbage collector paused for the whole run.
"""

from __future__ import annotations

import gc
import time
from typing import List

import numpy as np

from delay_models.artifact import FittedModel
from telemetry.models import FeatureMatrix

from .errors import EvaluationError
from .models import TimingReport


def time_inference(model: FittedModel, samples: FeatureMatrix, n: int = 100, warmup: int = 20) -> TimingReport:
    """
    Rows are cycled when the matrix holds fewer than n + warmup of them.
    Warmup calls are made but not reported.
    """
    if n < 1:
        raise EvaluationError(f"n must be >= 1, got {n}")
    if warmup < 0:
        raise EvaluationError(f"warmup must be >= 0, got {warmup}")
    if samples.n_rows == 0:
        raise EvaluationError("no rows to time")

    rows: List[List[float]] = np.asarray(samples.model_inputs, dtype=float).tolist()
    predict_one = model.predict_one
    elapsed_ns: List[int] = []

    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for i in range(warmup):
            predict_one(rows[i % len(rows)])
        for i in range(n):
            x = rows[(warmup + i) % len(rows)]
            start = time.perf_counter_ns()
            predict_one(x)
            elapsed_ns.append(time.perf_counter_ns() - start)
    finally:
        if was_enabled:
            gc.enable()

    ms = np.asarray(elapsed_ns, dtype=float) / 1e6
    return TimingReport(
        avg_ms=float(np.mean(ms)),
        min_ms=float(np.min(ms)),
        max_ms=float(np.max(ms)),
        n=n,
        warmup=warmup,
    )
