"""
Purpose: Result objects produced by the fitters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from delay_models.params import Family, ModelParams


class ConvergenceReason(str, Enum):
    TOLERANCE = "tolerance"
    MAX_ITER = "max-iter"
    REJECTED_SINGULAR = "rejected-singular"
    CLOSED_FORM = "closed-form"
    EPOCHS = "epochs"


@dataclass(frozen=True)
class FitReport:
    """
    Converged parameters plus optimizer diagnostics.

    `initial_cost` / `final_cost` are sums of squared residuals of the
    reported start. `start_costs` has one entry per start in the order they
    were run (None = aborted or rejected).
    """
    family: Family
    params: ModelParams
    initial_cost: float
    final_cost: float
    iterations: int
    reason: ConvergenceReason

    start_costs: Tuple[Optional[float], ...] = ()
    winning_start: int = 0
    rejected_starts: int = 0
    cost_history: Tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.value,
            "params": [float(v) for v in self.params.to_vector()],
            "initial_cost": float(self.initial_cost),
            "final_cost": float(self.final_cost),
            "iterations": int(self.iterations),
            "reason": self.reason.value,
            "start_costs": [None if c is None else float(c) for c in self.start_costs],
            "winning_start": int(self.winning_start),
            "rejected_starts": int(self.rejected_starts),
        }
