"""
Purpose: Central configuration for offloading node selection.
What it does:

Stores the two knobs of the composite score:

ALPHA = 0.5          (weight of normalized delay vs. unreliability)
DELTA_MAX = required (5G uplink delay in seconds above which we stay LOCAL)

Rule: No logic here, just parameters. delta_max has no default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SelectionConfig:
    # 5G delay guard, seconds.
    delta_max: float

    # score = alpha * T / T_max + (1 - alpha) * (1 - R)
    alpha: float = 0.5

    def validate(self) -> None:
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not (math.isfinite(self.delta_max) and self.delta_max > 0):
            raise ValueError(f"delta_max must be a positive number of seconds, got {self.delta_max!r}")


def selection_config(delta_max: float, alpha: float = 0.5) -> SelectionConfig:
    config = SelectionConfig(delta_max=float(delta_max), alpha=float(alpha))
    config.validate()
    return config
