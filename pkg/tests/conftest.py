import numpy as np
import pytest

from simulation.generator import generate
from simulation.policy import default_generator_config, rational_exp_config
from telemetry.features import build_feature_matrix
from telemetry.models import MODEL_FEATURES, FeatureMatrix, SampleSet, ScalingSpec, TelemetrySample


@pytest.fixture(scope="session")
def saturating_dataset():
    """Default generator output: 5000 saturating-queue rows, 1% noise."""
    return generate(default_generator_config())


@pytest.fixture(scope="session")
def saturating_matrix(saturating_dataset):
    samples, _ = saturating_dataset
    return build_feature_matrix(samples)


@pytest.fixture(scope="session")
def exact_dataset():
    """2000 noiseless rows from the rational-exponential hidden model."""
    return generate(rational_exp_config(n=2000, seed=0, noise_fraction=0.0))


@pytest.fixture(scope="session")
def exact_matrix(exact_dataset):
    samples, _ = exact_dataset
    return build_feature_matrix(samples)


def make_matrix(X, y, names=MODEL_FEATURES) -> FeatureMatrix:
    """Already-scaled rows wrapped with an identity ScalingSpec."""
    return FeatureMatrix(
        X=np.array(X, dtype=float),
        y=np.array(y, dtype=float),
        feature_names=tuple(names),
        scaling=ScalingSpec.identity(),
    )


def make_samples(rows) -> SampleSet:
    """rows: (frame, rate_cl, rate_all, utilization, delay) tuples."""
    return SampleSet(samples=tuple(TelemetrySample(*map(float, row)) for row in rows), provenance="test")
