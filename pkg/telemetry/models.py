"""
Purpose: Domain models for delay telemetry.
What it does:
- TelemetrySample: one monitored observation (frame size, arrival rates, utilization, delay)
- SampleSet: ordered collection of samples + where they came from
- ScalingSpec: per-feature divisors applied before fitting (persisted with every model)
- FeatureMatrix: model-ready rows of (x1, x2, x3) and the delay target

Canonical column names (CSV header and feature names everywhere):
- Client_Frame_Size (bytes)
- Arrival_rate_Cl (packets/s, client interface)
- Arrival_rate_All (packets/s, all devices on the segment)
- Utilization (as logged, may exceed 100)
- Delay (seconds, the prediction target)

Rule: No file I/O, no statistics. Models only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

CLIENT_FRAME_SIZE = "Client_Frame_Size"
ARRIVAL_RATE_CL = "Arrival_rate_Cl"
ARRIVAL_RATE_ALL = "Arrival_rate_All"
UTILIZATION = "Utilization"
DELAY = "Delay"

# Raw features in CSV column order.
RAW_FEATURES: Tuple[str, ...] = (CLIENT_FRAME_SIZE, ARRIVAL_RATE_CL, ARRIVAL_RATE_ALL, UTILIZATION)

# (x1, x2, x3) as consumed by every model family.
MODEL_FEATURES: Tuple[str, ...] = (CLIENT_FRAME_SIZE, UTILIZATION, ARRIVAL_RATE_ALL)

CSV_COLUMNS: Tuple[str, ...] = RAW_FEATURES + (DELAY,)

_FIELD_BY_COLUMN = {
    CLIENT_FRAME_SIZE: "client_frame_size",
    ARRIVAL_RATE_CL: "arrival_rate_cl",
    ARRIVAL_RATE_ALL: "arrival_rate_all",
    UTILIZATION: "utilization",
    DELAY: "delay",
}


@dataclass(frozen=True)
class TelemetrySample:
    """
    One monitored observation of a network segment.
    """
    client_frame_size: float
    arrival_rate_cl: float
    arrival_rate_all: float
    utilization: float
    delay: float

    def value(self, column: str) -> float:
        """Look a field up by its canonical column name."""
        try:
            return getattr(self, _FIELD_BY_COLUMN[column])
        except KeyError:
            raise KeyError(f"unknown telemetry column '{column}'") from None

    def violations(self) -> List[str]:
        """
        Returns the invariants this sample breaks (empty list = valid row).
        """
        problems = []
        for column in CSV_COLUMNS:
            if not math.isfinite(self.value(column)):
                problems.append(f"{column} is not finite")
        if problems:
            return problems

        if self.client_frame_size < 0:
            problems.append("Client_Frame_Size < 0")
        if self.arrival_rate_cl < 0:
            problems.append("Arrival_rate_Cl < 0")
        if self.arrival_rate_all < 0:
            problems.append("Arrival_rate_All < 0")
        if self.utilization < 0:
            problems.append("Utilization < 0")
        if self.delay <= 0:
            problems.append("Delay <= 0")
        return problems

    def is_valid(self) -> bool:
        return not self.violations()


@dataclass(frozen=True)
class SampleSet:
    """
    Ordered, immutable collection of telemetry samples.

    `provenance` records the source CSV path or the generator seed.
    `rejected_rows` holds 1-based data row numbers skipped at load time.
    """
    samples: Tuple[TelemetrySample, ...]
    provenance: str = ""
    rejected_rows: Tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, index: int) -> TelemetrySample:
        return self.samples[index]

    def column(self, name: str) -> np.ndarray:
        return np.array([sample.value(name) for sample in self.samples], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        """Canonical-column pandas DataFrame, one row per sample, in order."""
        return pd.DataFrame({name: self.column(name) for name in CSV_COLUMNS}, columns=list(CSV_COLUMNS))

    def permuted(self, order: Sequence[int]) -> SampleSet:
        """Same samples in `order`; provenance and rejected rows carry over."""
        return SampleSet(
            samples=tuple(self.samples[i] for i in order),
            provenance=self.provenance,
            rejected_rows=self.rejected_rows,
        )


def default_divisors() -> Dict[str, float]:
    # Brings typical magnitudes to O(1)-O(100).
    return {
        CLIENT_FRAME_SIZE: 1e6,
        ARRIVAL_RATE_ALL: 1e3,
        ARRIVAL_RATE_CL: 1e3,
        UTILIZATION: 1.0,
    }


@dataclass(frozen=True)
class ScalingSpec:
    """
    Per-feature divisors. The ScalingSpec used at fit time is stored in the model
    file and reused verbatim at predict time.
    """
    divisors: Dict[str, float] = field(default_factory=default_divisors)

    def __post_init__(self) -> None:
        for name, divisor in self.divisors.items():
            if not (math.isfinite(divisor) and divisor > 0):
                raise ValueError(f"divisor for '{name}' must be a positive finite number, got {divisor!r}")

    def has(self, name: str) -> bool:
        return name in self.divisors

    def apply(self, name: str, values):
        return np.asarray(values, dtype=float) / self.divisors[name]

    def invert(self, name: str, values):
        return np.asarray(values, dtype=float) * self.divisors[name]

    def to_dict(self) -> Dict[str, float]:
        return {name: float(self.divisors[name]) for name in sorted(self.divisors)}

    @classmethod
    def from_dict(cls, data: Mapping[str, float]) -> ScalingSpec:
        return cls(divisors={str(name): float(value) for name, value in data.items()})

    @classmethod
    def identity(cls, names: Sequence[str] = RAW_FEATURES) -> ScalingSpec:
        return cls(divisors={name: 1.0 for name in names})


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """
    Model-ready data.

    Columns of `X` follow `feature_names`: the three model features first,
    in (x1, x2, x3) order, then any other retained feature. Both arrays are
    read-only.
    """
    X: np.ndarray
    y: np.ndarray
    feature_names: Tuple[str, ...]
    scaling: ScalingSpec

    def __post_init__(self) -> None:
        if self.X.ndim != 2 or self.X.shape[1] != len(self.feature_names):
            raise ValueError("X must be 2-D with one column per feature name")
        if self.y.shape != (self.X.shape[0],):
            raise ValueError("y must have one entry per row of X")
        self.X.setflags(write=False)
        self.y.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def model_inputs(self) -> np.ndarray:
        """The (x1, x2, x3) block."""
        return self.X[:, : len(MODEL_FEATURES)]

    def column(self, name: str) -> np.ndarray:
        try:
            return self.X[:, self.feature_names.index(name)]
        except ValueError:
            raise KeyError(f"feature '{name}' is not in this matrix") from None

    def unscaled(self, name: str) -> np.ndarray:
        return self.scaling.invert(name, self.column(name))

    def take(self, rows) -> FeatureMatrix:
        rows = np.asarray(rows, dtype=int)
        return FeatureMatrix(
            X=np.array(self.X[rows]),
            y=np.array(self.y[rows]),
            feature_names=self.feature_names,
            scaling=self.scaling,
        )
