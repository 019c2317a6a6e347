"""
Synthetic telemetry package.

Public API:
- generate (dataset + GroundTruth)
- GeneratorConfig, FeatureRanges, QueueParams, HiddenModel
- default_generator_config, saturating_config, rational_exp_config, load_generator_config
- saturating_delay
"""

from .errors import GeneratorConfigError, SaturationError
from .generator import DELAY_FLOOR, GroundTruth, generate
from .policy import (
    DEFAULT_HIDDEN_PARAMS,
    FeatureRanges,
    GeneratorConfig,
    HiddenModel,
    QueueParams,
    config_from_mapping,
    default_generator_config,
    load_generator_config,
    rational_exp_config,
    saturating_config,
)
from .queueing import saturating_delay

__all__ = [
    "generate",
    "GroundTruth",
    "DELAY_FLOOR",
    "GeneratorConfig",
    "FeatureRanges",
    "QueueParams",
    "HiddenModel",
    "DEFAULT_HIDDEN_PARAMS",
    "config_from_mapping",
    "default_generator_config",
    "saturating_config",
    "rational_exp_config",
    "load_generator_config",
    "saturating_delay",
    "GeneratorConfigError",
    "SaturationError",
]
