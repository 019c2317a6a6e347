"""
Purpose: Deterministic synthetic telemetry with a hidden ground truth.
What it does:
- draws raw features from one seeded numpy stream (fixed draw order)
- couples Arrival_rate_Cl to Client_Frame_Size to hit the target correlation
- evaluates the hidden delay process on the rescaled features
- adds Gaussian noise proportional to the mean delay, floored at 1e-6 s

Every number that reaches a SampleSet is rounded to 12 significant digits,
the precision write_csv uses, so a dataset survives a CSV round trip intact.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from delay_models.families import predict_rational_exp
from telemetry.models import (
    ARRIVAL_RATE_ALL,
    CLIENT_FRAME_SIZE,
    MODEL_FEATURES,
    UTILIZATION,
    SampleSet,
    TelemetrySample,
)

from .errors import GeneratorConfigError
from .policy import GeneratorConfig, HiddenModel, default_generator_config
from .queueing import saturating_delay

logger = logging.getLogger(__name__)

DELAY_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """
    The hidden process behind a generated SampleSet.
    `noiseless` holds the per-row delay before noise (same row order).
    """
    config: GeneratorConfig
    noiseless: np.ndarray
    noise_sigma: float

    def __post_init__(self) -> None:
        self.noiseless.setflags(write=False)

    @property
    def hidden(self) -> HiddenModel:
        return self.config.hidden

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hidden": self.hidden.value,
            "config": self.config.to_dict(),
            "noise_sigma": self.noise_sigma,
            "mean_noiseless_delay": float(np.mean(self.noiseless)),
            "noiseless_delay": [float(v) for v in self.noiseless],
        }


def generate(config: Optional[GeneratorConfig] = None) -> Tuple[SampleSet, GroundTruth]:
    """
    Build one dataset. Pure function of `config` (seed included).

    Raises GeneratorConfigError for an invalid config, including hidden
    rational-exp parameters whose denominator reaches the floor inside the
    configured feature box.
    """
    config = config or default_generator_config()
    config.validate()

    rng = np.random.default_rng(config.seed)
    r = config.ranges
    n = config.n

    frame = _round12(rng.uniform(*r.frame_size, size=n))
    utilization = _round12(rng.uniform(*r.utilization, size=n))
    arrival_all = _round12(rng.uniform(*r.arrival_rate_all, size=n))
    arrival_cl = _round12(_coupled_rate(frame, config, rng.standard_normal(n)))

    X = np.column_stack([
        config.scaling.apply(CLIENT_FRAME_SIZE, frame),
        config.scaling.apply(UTILIZATION, utilization),
        config.scaling.apply(ARRIVAL_RATE_ALL, arrival_all),
    ])
    noiseless = _round12(np.maximum(_hidden_delay(config, X), DELAY_FLOOR))

    sigma = config.noise_fraction * float(np.mean(noiseless))
    delay = _round12(np.maximum(noiseless + sigma * rng.standard_normal(n), DELAY_FLOOR))

    samples = tuple(
        TelemetrySample(
            client_frame_size=float(frame[i]),
            arrival_rate_cl=float(arrival_cl[i]),
            arrival_rate_all=float(arrival_all[i]),
            utilization=float(utilization[i]),
            delay=float(delay[i]),
        )
        for i in range(n)
    )
    logger.info(
        "generated %d samples (hidden=%s, seed=%d, sigma=%.3g s)", n, config.hidden.value, config.seed, sigma,
    )
    dataset = SampleSet(samples=samples, provenance=f"generator:{config.hidden.value}:seed={config.seed}")
    return dataset, GroundTruth(config=config, noiseless=noiseless, noise_sigma=sigma)


# -----------------------------
# Internal helpers
# -----------------------------

def _round12(values: np.ndarray) -> np.ndarray:
    return np.array([float(f"{v:.12g}") for v in np.asarray(values, dtype=float)])


def _coupled_rate(frame: np.ndarray, config: GeneratorConfig, z: np.ndarray) -> np.ndarray:
    """
    Affine coupling: standardized frame size mixed with independent noise,
    mapped onto the client-rate range (floored at 0).
    """
    f_low, f_high = config.ranges.frame_size
    c_low, c_high = config.ranges.arrival_rate_cl
    rho = config.correlation

    u = (frame - 0.5 * (f_low + f_high)) / ((f_high - f_low) / math.sqrt(12.0))
    spread = (c_high - c_low) / math.sqrt(12.0)
    rate = 0.5 * (c_low + c_high) + spread * (rho * u + math.sqrt(1.0 - rho * rho) * z)
    return np.maximum(rate, 0.0)


def _hidden_delay(config: GeneratorConfig, X: np.ndarray) -> np.ndarray:
    if config.hidden is HiddenModel.RATIONAL_EXP:
        return np.asarray(predict_rational_exp(config.rational_exp, X), dtype=float)

    q = config.queue
    x1, x2, x3 = (X[:, i] for i in range(len(MODEL_FEATURES)))
    service = q.service_per_mb * x1 + q.service_per_kpps * x3
    if np.any(x2 >= q.capacity):
        raise GeneratorConfigError("utilization reaches queue capacity")
    queueing = saturating_delay(x2, q.capacity, k=service * q.capacity, base=q.base)
    return queueing * np.exp(q.contention_rate * x3)
