"""
Purpose: Glue between fitted delay models and SegmentDelays.
What it does:
- predict_segment / predict_segments: current telemetry -> predicted delay,
  clamped at 0 from below (fitted rationals can dip negative off-hull)
- ClampCounter: thread-safe count of clamped predictions
- SegmentModelProvider: one model per segment, turns a telemetry snapshot
  into SegmentDelays
"""

from __future__ import annotations

import logging
import threading
from typing import Iterable, Mapping, Optional

import numpy as np

from delay_models.artifact import FittedModel
from telemetry.models import TelemetrySample

from .errors import MissingSegmentError
from .models import SEGMENT_5G, SegmentDelays, edge_segment

logger = logging.getLogger(__name__)


class ClampCounter:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._count = 0

    def increment(self) -> int:
        with self._lock:
            self._count += 1
            return self._count

    @property
    def value(self) -> int:
        with self._lock:
            return self._count

    def reset(self) -> None:
        with self._lock:
            self._count = 0


# Shared by every call that does not pass its own counter.
CLAMP_COUNTER = ClampCounter()


def predict_segment(model: FittedModel, telemetry: TelemetrySample, counter: Optional[ClampCounter] = None) -> float:
    """
    Scaled with the model's stored ScalingSpec, then the family predictor.
    Denominator singularities propagate.
    """
    value = model.predict_sample(telemetry)
    if value < 0.0:
        total = (counter or CLAMP_COUNTER).increment()
        logger.warning("negative delay prediction %.3g clamped to 0 (%d clamped so far)", value, total)
        return 0.0
    return float(value)


def predict_segments(
    model: FittedModel,
    samples: Iterable[TelemetrySample],
    counter: Optional[ClampCounter] = None,
) -> np.ndarray:
    return np.array([predict_segment(model, sample, counter) for sample in samples], dtype=float)


class SegmentModelProvider:
    """
    Bundles per-segment models ("5g", "edge1", "edge2", ...) into a
    SegmentDelays factory. Every lookup runs the model, so each negative
    prediction is clamped and counted.
    """

    def __init__(self, models: Mapping[str, FittedModel], counter: Optional[ClampCounter] = None):
        if SEGMENT_5G not in models:
            raise MissingSegmentError(f"no model for segment '{SEGMENT_5G}'")
        self.models = dict(models)
        self.counter = counter or ClampCounter()

    @property
    def edge_indices(self):
        return sorted(int(name[len("edge"):]) for name in self.models if name.startswith("edge"))

    def predict(self, segment: str, telemetry: TelemetrySample) -> float:
        try:
            model = self.models[segment]
        except KeyError:
            raise MissingSegmentError(f"no model for segment '{segment}'") from None
        return predict_segment(model, telemetry, self.counter)

    def __call__(self, telemetry: Mapping[str, TelemetrySample]) -> SegmentDelays:
        """
        `telemetry` maps segment key -> current sample for that segment.
        """
        missing = [segment for segment in self.models if segment not in telemetry]
        if missing:
            raise MissingSegmentError(f"no current telemetry for segment(s) {', '.join(sorted(missing))}")
        return SegmentDelays(
            d_5g=self.predict(SEGMENT_5G, telemetry[SEGMENT_5G]),
            d_edge={i: self.predict(edge_segment(i), telemetry[edge_segment(i)]) for i in self.edge_indices},
        )
