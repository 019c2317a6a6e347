"""
Purpose: Central configuration for telemetry feature engineering.
What it does:

Stores the tunables used between "CSV on disk" and "FeatureMatrix":

CORRELATION_THRESHOLD = 0.95 (strict >, pairs above it are redundant)

DROP_PRIORITY = Arrival_rate_Cl, Utilization, Arrival_rate_All, Client_Frame_Size
(earlier = dropped first when a pair is redundant)

DIVISORS = Client_Frame_Size / 1e6, Arrival_rate_* / 1e3, Utilization / 1

COLUMN_MAP = canonical name -> header used in the CSV file (identity by default)

Rule: No logic here, just parameters so you can tune without rewriting code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

from .models import (
    ARRIVAL_RATE_ALL,
    ARRIVAL_RATE_CL,
    CLIENT_FRAME_SIZE,
    CSV_COLUMNS,
    RAW_FEATURES,
    UTILIZATION,
    ScalingSpec,
    default_divisors,
)

DEFAULT_DROP_PRIORITY: Tuple[str, ...] = (
    ARRIVAL_RATE_CL,
    UTILIZATION,
    ARRIVAL_RATE_ALL,
    CLIENT_FRAME_SIZE,
)


@dataclass(frozen=True)
class FeaturePolicy:
    """
    Feature engineering configuration.

    Notes:
    - Pearson alone does not say which member of a correlated pair to drop,
      so the order is explicit here. Client rate goes before frame size.
    - The divisors become the ScalingSpec stored with each fitted model.
    """

    # --- Redundancy pruning ---
    correlation_threshold: float = 0.95
    drop_priority: Tuple[str, ...] = DEFAULT_DROP_PRIORITY

    # --- Rescaling ---
    divisors: Dict[str, float] = field(default_factory=default_divisors)

    # --- CSV header mapping (canonical -> file header) ---
    # Only the columns that differ need to be listed.
    column_map: Dict[str, str] = field(default_factory=dict)

    def scaling(self) -> ScalingSpec:
        return ScalingSpec(divisors=dict(self.divisors))

    def schema(self) -> Dict[str, str]:
        """Full canonical -> header mapping for load_csv."""
        return {name: self.column_map.get(name, name) for name in CSV_COLUMNS}

    def validate(self) -> None:
        if not (0.0 <= self.correlation_threshold <= 1.0):
            raise ValueError("correlation_threshold must be within [0, 1]")

        if sorted(self.drop_priority) != sorted(RAW_FEATURES):
            raise ValueError("drop_priority must list every raw feature exactly once")

        for name, divisor in self.divisors.items():
            if not (math.isfinite(divisor) and divisor > 0):
                raise ValueError(f"divisor for {name} must be > 0")

        for name in self.column_map:
            if name not in CSV_COLUMNS:
                raise ValueError(f"column_map refers to unknown column '{name}'")


def default_feature_policy() -> FeaturePolicy:
    """
    Convenience factory for the default policy.
    """
    p = FeaturePolicy()
    p.validate()
    return p
