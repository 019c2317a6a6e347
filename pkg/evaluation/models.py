"""
Purpose: Report objects produced by evaluation.
What it does:
- EvalReport: MAE / MSE / R² over n rows (R² None when the target has no variance)
- FoldResult + CVReport: per-fold metrics and their aggregates
- TimingReport: per-sample inference latency in milliseconds
- ResidualProfile: binned residual statistics over one feature
- ComparisonRow: one family's line in a comparison table

Every report serialises through to_dict() into plain JSON types.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple


@dataclass(frozen=True)
class EvalReport:
    mae: float
    mse: float
    r2: Optional[float]
    n: int

    @property
    def r2_defined(self) -> bool:
        return self.r2 is not None

    def to_dict(self) -> Dict[str, Any]:
        return {"mae": self.mae, "mse": self.mse, "r2": self.r2, "n": self.n}


@dataclass(frozen=True)
class FoldResult:
    """
    One held-out fold. `report` is None when the fit on the other folds
    failed; `error` then carries the message.
    """
    index: int
    train_size: int
    test_size: int
    report: Optional[EvalReport] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.report is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fold": self.index,
            "train_size": self.train_size,
            "test_size": self.test_size,
            "report": None if self.report is None else self.report.to_dict(),
            "error": self.error,
        }


@dataclass(frozen=True)
class CVReport:
    """
    k-fold cross-validation summary.

    Means and sample standard deviations cover successful folds only;
    `complete` is False when at least one fold failed. R² aggregates also
    skip folds whose R² is undefined.
    """
    family: str
    k: int
    seed: int
    folds: Tuple[FoldResult, ...]
    means: Dict[str, Optional[float]]
    stds: Dict[str, Optional[float]]

    @property
    def complete(self) -> bool:
        return all(fold.ok for fold in self.folds)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "k": self.k,
            "seed": self.seed,
            "complete": self.complete,
            "folds": [fold.to_dict() for fold in self.folds],
            "means": dict(self.means),
            "stds": dict(self.stds),
        }


@dataclass(frozen=True)
class TimingReport:
    avg_ms: float
    min_ms: float
    max_ms: float
    n: int
    warmup: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "avg_ms": self.avg_ms,
            "min_ms": self.min_ms,
            "max_ms": self.max_ms,
            "n": self.n,
            "warmup": self.warmup,
        }


@dataclass(frozen=True)
class ResidualProfile:
    """
    Residual (observed - predicted) statistics per quantile bin of `feature`.

    `edges` has len(counts) + 1 entries in raw feature units. Bin i holds
    values in [edges[i], edges[i+1]), the last bin also includes its upper
    edge. Empty bins report mean/std as None.
    """
    feature: str
    edges: Tuple[float, ...]
    means: Tuple[Optional[float], ...]
    stds: Tuple[Optional[float], ...]
    counts: Tuple[int, ...]
    note: str = ""

    @property
    def n(self) -> int:
        return int(sum(self.counts))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "feature": self.feature,
            "edges": list(self.edges),
            "means": list(self.means),
            "stds": list(self.stds),
            "counts": list(self.counts),
            "note": self.note,
        }


@dataclass(frozen=True)
class ComparisonRow:
    family: str
    cv: CVReport
    timing: Optional[TimingReport] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def mean(self, metric: str) -> Optional[float]:
        return self.cv.means.get(metric)

    def to_dict(self) -> Dict[str, Any]:
        row = {
            "family": self.family,
            "complete": self.cv.complete,
            "mae_mean": self.cv.means.get("mae"),
            "mae_std": self.cv.stds.get("mae"),
            "mse_mean": self.cv.means.get("mse"),
            "mse_std": self.cv.stds.get("mse"),
            "r2_mean": self.cv.means.get("r2"),
            "r2_std": self.cv.stds.get("r2"),
            "avg_ms": None if self.timing is None else self.timing.avg_ms,
            "min_ms": None if self.timing is None else self.timing.min_ms,
            "max_ms": None if self.timing is None else self.timing.max_ms,
        }
        row.update(self.extras)
        return row
