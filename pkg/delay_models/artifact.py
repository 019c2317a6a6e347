"""
Purpose: The fitted-model artifact and its file format.
What it does:
- FittedModel bundles family params + the ScalingSpec + retained features +
  fit metadata, and predicts from raw telemetry or model-ready rows.
- save / load_model: one JSON document per model, `format_version` mandatory.

File layout (format_version 1):
{
  "format_version": 1,
  "family": "rational_exp",
  "parameter_names": ["a1", ...],
  "parameters": [...],
  "family_options": {"feature": ..., "hidden": ...},
  "scaling": {"Client_Frame_Size": 1000000.0, ...},
  "retained_features": [...],
  "metadata": {"created_at": ..., "seed": ..., "training_digest": ..., "fit_report": {...}}
}
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from telemetry.models import MODEL_FEATURES, FeatureMatrix, ScalingSpec, TelemetrySample

from .errors import ModelFormatError, SchemaMismatchError
from .families import predict, scalar_kernel
from .params import (
    DEFAULT_HIDDEN,
    Family,
    MLPParams,
    ModelParams,
    UnivariateRationalParams,
    family_of,
    parameter_names,
    params_from_vector,
)

MODEL_FORMAT_VERSION = 1


def matrix_digest(M: FeatureMatrix) -> str:
    """sha256 over the training rows and target (identifies the training set)."""
    h = hashlib.sha256()
    h.update(",".join(M.feature_names).encode("utf-8"))
    h.update(np.ascontiguousarray(M.X, dtype=float).tobytes())
    h.update(np.ascontiguousarray(M.y, dtype=float).tobytes())
    return h.hexdigest()


@dataclass(frozen=True, eq=False)
class FittedModel:
    """
    A trained predictor. Predictions are a pure function of
    (params, scaling, raw features).
    """
    params: ModelParams
    scaling: ScalingSpec
    retained_features: Tuple[str, ...] = MODEL_FEATURES
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def family(self) -> Family:
        return family_of(self.params)

    @cached_property
    def _kernel(self) -> Callable[[Sequence[float]], float]:
        return scalar_kernel(self.params)

    # --- Prediction ---

    def predict_matrix(self, data: Union[FeatureMatrix, np.ndarray]) -> np.ndarray:
        """Vectorised prediction over model-ready rows."""
        if isinstance(data, FeatureMatrix):
            self.check_compatible(data)
            rows = data.model_inputs
        else:
            rows = np.atleast_2d(np.asarray(data, dtype=float))
        return np.atleast_1d(predict(self.params, rows))

    def predict_raw(self, rows) -> np.ndarray:
        """Unscaled (frame size, utilization, all-devices rate) rows; scaling applied here."""
        raw = np.atleast_2d(np.asarray(rows, dtype=float))
        if raw.shape[1] != len(MODEL_FEATURES):
            raise SchemaMismatchError(f"expected {len(MODEL_FEATURES)} raw columns {MODEL_FEATURES}, got {raw.shape[1]}")
        scaled = np.column_stack([self.scaling.apply(name, raw[:, i]) for i, name in enumerate(MODEL_FEATURES)])
        return self.predict_matrix(scaled)

    def predict_one(self, x: Sequence[float]) -> float:
        """One already-scaled (x1, x2, x3) row through the scalar fast path."""
        return self._kernel(x)

    def scaled_inputs(self, sample: TelemetrySample) -> Tuple[float, float, float]:
        divisors = self.scaling.divisors
        x1, x2, x3 = (sample.value(name) / divisors[name] for name in MODEL_FEATURES)
        return (x1, x2, x3)

    def predict_sample(self, sample: TelemetrySample) -> float:
        return self.predict_one(self.scaled_inputs(sample))

    def predict_samples(self, samples: Iterable[TelemetrySample]) -> np.ndarray:
        return np.array([self.predict_sample(sample) for sample in samples], dtype=float)

    def check_compatible(self, M: FeatureMatrix) -> None:
        if tuple(M.feature_names[: len(MODEL_FEATURES)]) != MODEL_FEATURES:
            raise SchemaMismatchError(
                f"data columns {M.feature_names} do not start with model features {MODEL_FEATURES}"
            )
        for name in MODEL_FEATURES:
            ours = self.scaling.divisors.get(name)
            theirs = M.scaling.divisors.get(name)
            if ours != theirs:
                raise SchemaMismatchError(
                    f"scaling for {name} differs: model uses {ours!r}, data uses {theirs!r}"
                )

    # --- Serialization ---

    def to_document(self) -> Dict[str, Any]:
        options: Dict[str, Any] = {}
        if isinstance(self.params, UnivariateRationalParams):
            options["feature"] = self.params.feature
        if isinstance(self.params, MLPParams):
            options["hidden"] = self.params.hidden
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "family": self.family.value,
            "parameter_names": parameter_names(self.params),
            "parameters": [float(v) for v in self.params.to_vector()],
            "family_options": options,
            "scaling": self.scaling.to_dict(),
            "retained_features": list(self.retained_features),
            "metadata": self.metadata,
        }

    @classmethod
    def from_document(cls, doc: Mapping[str, Any]) -> FittedModel:
        version = doc.get("format_version")
        if version is None:
            raise ModelFormatError("model document has no format_version")
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format_version {version!r}")

        missing = [key for key in ("family", "parameters", "scaling") if key not in doc]
        if missing:
            raise ModelFormatError(f"model document missing field(s): {', '.join(missing)}")

        family = Family.parse(doc["family"])
        options = doc.get("family_options") or {}
        params = params_from_vector(
            family,
            doc["parameters"],
            feature=options.get("feature", MODEL_FEATURES[0]),
            hidden=int(options.get("hidden", DEFAULT_HIDDEN)),
        )
        params.validate()
        return cls(
            params=params,
            scaling=ScalingSpec.from_dict(doc["scaling"]),
            retained_features=tuple(doc.get("retained_features") or MODEL_FEATURES),
            metadata=dict(doc.get("metadata") or {}),
        )

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


def load_model(path: Union[str, Path]) -> FittedModel:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ModelFormatError(f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{path} does not hold a model document")
    return FittedModel.from_document(doc)


def build_metadata(M: FeatureMatrix, seed: Optional[int], fit_report: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "seed": seed,
        "n_train": M.n_rows,
        "training_digest": matrix_digest(M),
        "fit_report": fit_report or {},
    }
