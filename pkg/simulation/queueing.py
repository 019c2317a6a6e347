"""
Purpose: Closed-form queueing delay used as a hidden ground truth.
"""

from __future__ import annotations

import numpy as np

from .errors import SaturationError


def saturating_delay(load, capacity: float, k=1.0, base=0.0):
    """
    base + k / (capacity - load).

    Strictly increasing and convex in `load`, diverging as load -> capacity.
    `k` and `base` may be scalars or per-row arrays. Returns a float for
    scalar inputs, an array otherwise.
    """
    if not capacity > 0:
        raise SaturationError(f"capacity must be > 0, got {capacity!r}")

    values = np.asarray(load, dtype=float)
    if np.any(values < 0):
        raise SaturationError("load must be >= 0")
    if np.any(values >= capacity):
        worst = float(np.max(values))
        raise SaturationError(f"load {worst!r} reaches capacity {capacity!r}")

    delay = np.asarray(base, dtype=float) + np.asarray(k, dtype=float) / (capacity - values)
    return float(delay) if delay.ndim == 0 else delay
