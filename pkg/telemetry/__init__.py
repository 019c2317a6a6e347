"""
Telemetry domain package.

Public API:
- Domain models: TelemetrySample, SampleSet, ScalingSpec, FeatureMatrix
- Ingestion: load_csv, write_csv
- Feature engineering: pearson, select_features, to_feature_matrix, build_feature_matrix
- Configuration: FeaturePolicy, default_feature_policy
"""

from .features import build_feature_matrix, correlation_matrix, pearson, select_features, to_feature_matrix
from .loader import load_csv, write_csv
from .models import (
    ARRIVAL_RATE_ALL,
    ARRIVAL_RATE_CL,
    CLIENT_FRAME_SIZE,
    CSV_COLUMNS,
    DELAY,
    MODEL_FEATURES,
    RAW_FEATURES,
    UTILIZATION,
    FeatureMatrix,
    SampleSet,
    ScalingSpec,
    TelemetrySample,
)
from .policy import FeaturePolicy, default_feature_policy

__all__ = [
    "TelemetrySample",
    "SampleSet",
    "ScalingSpec",
    "FeatureMatrix",
    "load_csv",
    "write_csv",
    "pearson",
    "select_features",
    "to_feature_matrix",
    "build_feature_matrix",
    "correlation_matrix",
    "FeaturePolicy",
    "default_feature_policy",
    "CLIENT_FRAME_SIZE",
    "ARRIVAL_RATE_CL",
    "ARRIVAL_RATE_ALL",
    "UTILIZATION",
    "DELAY",
    "RAW_FEATURES",
    "MODEL_FEATURES",
    "CSV_COLUMNS",
]
