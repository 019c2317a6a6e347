"""
Purpose: Central configuration for synthetic telemetry generation.
What it does:

Stores every knob of the generator:

N = 5000 samples, SEED = 0

RANGES (raw units):
  Client_Frame_Size 2e5 .. 2e6 bytes
  Arrival_rate_All  1e3 .. 5e3 packets/s
  Arrival_rate_Cl   5e2 .. 2.5e3 packets/s (coupled to frame size)
  Utilization       0 .. 120

HIDDEN MODEL = saturating queue (default) or rational-exponential

NOISE = 0.01 * mean delay (Gaussian), CORRELATION(frame, client rate) = 0.98

Also: load_generator_config() to read the same fields from a YAML/JSON file.

Rule: No generation logic here, just parameters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple, Union

import numpy as np
import yaml

from delay_models.families import EPS_DEN, denominator_rational
from delay_models.params import RationalExpParams
from telemetry.models import MODEL_FEATURES, ScalingSpec

from .errors import GeneratorConfigError

Range = Tuple[float, float]


class HiddenModel(str, Enum):
    SATURATING = "saturating"
    RATIONAL_EXP = "rational_exp"


@dataclass(frozen=True)
class FeatureRanges:
    """Uniform sampling ranges in raw (unscaled) units."""
    frame_size: Range = (2e5, 2e6)
    arrival_rate_all: Range = (1e3, 5e3)
    arrival_rate_cl: Range = (5e2, 2.5e3)
    utilization: Range = (0.0, 120.0)


@dataclass(frozen=True)
class QueueParams:
    """
    Saturating-queue ground truth, evaluated on rescaled features:

        delay = (base + service * capacity / (capacity - x2)) * exp(contention_rate * x3)
        service = service_per_mb * x1 + service_per_kpps * x3
    """
    # Utilization (scaled units) at which the queue saturates.
    capacity: float = 150.0
    # Propagation floor, seconds.
    base: float = 1e-3
    # Service seconds per rescaled frame-size unit (MB) and per 1e3 pkt/s.
    service_per_mb: float = 0.01
    service_per_kpps: float = 0.002
    # Contention growth with aggregate arrival rate.
    contention_rate: float = 0.15


# Positive denominator over the whole default box (minimum 0.55).
DEFAULT_HIDDEN_PARAMS = RationalExpParams(
    a=(0.02, 0.0003, 0.004),
    b=(0.05, -0.004, 0.02),
    c=0.0,
    d=0.12,
)


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Generator configuration (validated, immutable).
    """
    n: int = 5000
    seed: int = 0
    ranges: FeatureRanges = field(default_factory=FeatureRanges)
    hidden: HiddenModel = HiddenModel.SATURATING
    rational_exp: RationalExpParams = DEFAULT_HIDDEN_PARAMS
    queue: QueueParams = field(default_factory=QueueParams)

    # Gaussian noise sigma as a fraction of the mean noiseless delay.
    noise_fraction: float = 0.01

    # Target Pearson correlation between frame size and client arrival rate.
    correlation: float = 0.98

    scaling: ScalingSpec = field(default_factory=ScalingSpec)

    def validate(self) -> None:
        if self.n < 1:
            raise GeneratorConfigError("n must be >= 1")
        if not (math.isfinite(self.noise_fraction) and self.noise_fraction >= 0):
            raise GeneratorConfigError("noise_fraction must be >= 0")
        if not (-1.0 <= self.correlation <= 1.0):
            raise GeneratorConfigError("correlation must lie in [-1, 1]")

        for name, (low, high) in asdict(self.ranges).items():
            if not (math.isfinite(low) and math.isfinite(high)) or low < 0 or high <= low:
                raise GeneratorConfigError(f"range for {name} must satisfy 0 <= low < high, got ({low}, {high})")

        if self.hidden is HiddenModel.SATURATING:
            q = self.queue
            top = self.scaling.apply("Utilization", self.ranges.utilization[1])
            if top >= q.capacity:
                raise GeneratorConfigError(
                    f"utilization range reaches queue capacity ({top} >= {q.capacity})"
                )
            if q.base < 0 or q.service_per_mb < 0 or q.service_per_kpps < 0:
                raise GeneratorConfigError("queue base and service times must be >= 0")
        else:
            self.rational_exp.validate()
            # Affine denominator: positive at every corner means positive on the whole box.
            corners = list(itertools.product(
                self.ranges.frame_size, self.ranges.utilization, self.ranges.arrival_rate_all,
            ))
            X = np.array([
                [float(self.scaling.apply(name, value)) for name, value in zip(MODEL_FEATURES, corner)]
                for corner in corners
            ])
            D = denominator_rational(self.rational_exp, X)
            worst = int(np.argmin(D))
            if D[worst] <= EPS_DEN:
                raise GeneratorConfigError(
                    f"hidden rational_exp denominator {D[worst]:.6g} <= {EPS_DEN} at corner {corners[worst]}"
                )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "seed": self.seed,
            "hidden": self.hidden.value,
            "noise_fraction": self.noise_fraction,
            "correlation": self.correlation,
            "ranges": {name: list(bounds) for name, bounds in asdict(self.ranges).items()},
            "queue": asdict(self.queue),
            "rational_exp": {
                "a": list(self.rational_exp.a),
                "b": list(self.rational_exp.b),
                "c": self.rational_exp.c,
                "d": self.rational_exp.d,
            },
            "scaling": self.scaling.to_dict(),
        }


def default_generator_config() -> GeneratorConfig:
    """
    Convenience factory for the default (saturating-queue) dataset.
    """
    p = GeneratorConfig()
    p.validate()
    return p


def saturating_config(n: int = 5000, seed: int = 0, noise_fraction: float = 0.01) -> GeneratorConfig:
    p = GeneratorConfig(n=n, seed=seed, hidden=HiddenModel.SATURATING, noise_fraction=noise_fraction)
    p.validate()
    return p


def rational_exp_config(
    n: int = 2000,
    seed: int = 0,
    noise_fraction: float = 0.0,
    params: RationalExpParams = DEFAULT_HIDDEN_PARAMS,
) -> GeneratorConfig:
    """
    Self-realizable data: the rational-exponential family can fit it exactly.
    """
    p = GeneratorConfig(
        n=n, seed=seed, hidden=HiddenModel.RATIONAL_EXP, rational_exp=params, noise_fraction=noise_fraction,
    )
    p.validate()
    return p


def config_from_mapping(data: Mapping[str, Any], base: GeneratorConfig = None) -> GeneratorConfig:
    """
    Overlay a plain mapping (from YAML/JSON or CLI flags) on `base`.
    Unknown keys are an error.
    """
    base = base or GeneratorConfig()
    known = {"n", "seed", "hidden", "noise_fraction", "correlation", "ranges", "queue", "rational_exp", "scaling"}
    unknown = set(data) - known
    if unknown:
        raise GeneratorConfigError(f"unknown generator setting(s): {', '.join(sorted(unknown))}")

    updates: Dict[str, Any] = {}
    for key in ("n", "seed"):
        if key in data:
            updates[key] = int(data[key])
    for key in ("noise_fraction", "correlation"):
        if key in data:
            updates[key] = float(data[key])
    if "hidden" in data:
        try:
            updates["hidden"] = HiddenModel(str(data["hidden"]))
        except ValueError:
            raise GeneratorConfigError(f"unknown hidden model '{data['hidden']}'") from None
    if "ranges" in data:
        ranges = {name: tuple(float(v) for v in bounds) for name, bounds in (data["ranges"] or {}).items()}
        updates["ranges"] = _overlay(base.ranges, ranges, "ranges")
    if "queue" in data:
        queue = {name: float(value) for name, value in (data["queue"] or {}).items()}
        updates["queue"] = _overlay(base.queue, queue, "queue")
    if "rational_exp" in data:
        hidden = data["rational_exp"] or {}
        current = base.rational_exp
        updates["rational_exp"] = RationalExpParams(
            a=tuple(float(v) for v in hidden.get("a", current.a)),
            b=tuple(float(v) for v in hidden.get("b", current.b)),
            c=float(hidden.get("c", current.c)),
            d=float(hidden.get("d", current.d)),
        )
    if "scaling" in data:
        updates["scaling"] = ScalingSpec.from_dict(data["scaling"])

    config = replace(base, **updates)
    config.validate()
    return config


def load_generator_config(path: Union[str, Path]) -> GeneratorConfig:
    """Read a YAML (or JSON) generator config file."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except FileNotFoundError:
        raise GeneratorConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise GeneratorConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise GeneratorConfigError(f"{path} must contain a mapping")
    return config_from_mapping(data)


def _overlay(current, values: Mapping[str, Any], what: str):
    try:
        return replace(current, **values)
    except TypeError as exc:
        raise GeneratorConfigError(f"bad {what} setting: {exc}") from None
