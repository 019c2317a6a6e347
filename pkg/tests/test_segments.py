import threading

import numpy as np
import pytest
import yaml

from delay_models.artifact import FittedModel
from delay_models.params import Family, LinearParams
from offloading.accuracy import decision_accuracy, default_nodes, segment_generator_configs, simulate_decision_accuracy
from offloading.errors import MissingSegmentError, SelectionError
from offloading.models import SegmentDelays
from offloading.policy import selection_config
from offloading.segments import ClampCounter, SegmentModelProvider, predict_segment, predict_segments
from offloading.topology import load_topology
from simulation.policy import DEFAULT_HIDDEN_PARAMS
from telemetry.models import MODEL_FEATURES, ScalingSpec


@pytest.fixture
def uplink_model():
    return FittedModel(params=DEFAULT_HIDDEN_PARAMS, scaling=ScalingSpec())


@pytest.fixture
def negative_model():
    return FittedModel(params=LinearParams(w0=-1e-5, w=(0.0, 0.0, 0.0)), scaling=ScalingSpec())


def test_predict_segment_applies_stored_scaling(uplink_model, saturating_dataset):
    samples, _ = saturating_dataset
    sample = samples[0]

    expected = uplink_model.predict_raw([[sample.value(name) for name in MODEL_FEATURES]])[0]

    assert predict_segment(uplink_model, sample) == pytest.approx(expected, rel=1e-12)


def test_negative_predictions_are_clamped_and_counted(negative_model, saturating_dataset):
    samples, _ = saturating_dataset
    counter = ClampCounter()

    assert predict_segment(negative_model, samples[0], counter) == 0.0
    assert counter.value == 1

    batch = predict_segments(negative_model, samples.samples[:10], counter)
    np.testing.assert_array_equal(batch, np.zeros(10))
    assert counter.value == 11

    counter.reset()
    assert counter.value == 0


def test_batch_equals_single_calls(uplink_model, saturating_dataset):
    samples, _ = saturating_dataset
    head = samples.samples[:100]

    batch = predict_segments(uplink_model, head)

    np.testing.assert_array_equal(batch, [predict_segment(uplink_model, s) for s in head])


def test_clamp_counter_is_thread_safe():
    counter = ClampCounter()

    def hammer():
        for _ in range(1000):
            counter.increment()

    threads = [threading.Thread(target=hammer) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    assert counter.value == 8000


def test_provider_builds_segment_delays(uplink_model, negative_model, saturating_dataset):
    samples, _ = saturating_dataset
    provider = SegmentModelProvider({"5g": uplink_model, "edge1": uplink_model, "edge2": negative_model})

    delays = provider({"5g": samples[0], "edge1": samples[1], "edge2": samples[2]})

    assert isinstance(delays, SegmentDelays)
    assert provider.edge_indices == [1, 2]
    assert delays.d_5g == pytest.approx(uplink_model.predict_sample(samples[0]))
    assert delays.edge(2) == 0.0
    assert provider.counter.value == 1

    # No memo between calls: a repeat lookup predicts, clamps and counts again.
    again = provider({"5g": samples[0], "edge1": samples[1], "edge2": samples[2]})
    assert again == delays
    assert provider.counter.value == 2

    with pytest.raises(MissingSegmentError):
        provider({"5g": samples[0]})
    with pytest.raises(MissingSegmentError):
        SegmentModelProvider({"edge1": uplink_model})


def test_decision_accuracy_of_a_perfect_provider_is_one(uplink_model):
    """
    Epoch telemetry generated from the same hidden model the provider uses,
    with no noise: predicted and true delays coincide.
    """
    from simulation.generator import generate
    from simulation.policy import rational_exp_config

    epochs = {
        segment: generate(rational_exp_config(n=50, seed=i))[0]
        for i, segment in enumerate(["5g", "edge1", "edge2", "edge3"])
    }
    provider = SegmentModelProvider({segment: uplink_model for segment in epochs})

    [report] = decision_accuracy({"truth": provider}, epochs, default_nodes(), selection_config(delta_max=0.15))

    assert report.epochs == 50
    assert report.rate == pytest.approx(1.0)
    assert report.fallbacks_predicted == report.fallbacks_true


def test_segment_configs_give_edges_their_own_seed():
    configs = segment_generator_configs(100, seed=4)

    assert list(configs) == ["5g", "edge1", "edge2", "edge3"]
    assert [c.seed for c in configs.values()] == [4, 5, 6, 7]
    assert configs["edge1"].queue.service_per_mb == configs["5g"].queue.service_per_mb / 2


def test_rational_exp_decides_at_least_as_well_as_linear():
    """
    1000 epochs; selections from each family's predicted segment delays are
    compared with selections from the true delays.
    """
    reports = {r.family: r for r in simulate_decision_accuracy(epochs=1000, n_train=2000, seed=0)}

    assert set(reports) == {Family.RATIONAL_EXP.value, Family.LINEAR.value}
    assert reports["rational_exp"].epochs == 1000
    assert reports["rational_exp"].rate >= reports["linear"].rate


# -----------------------------
# Topology documents
# -----------------------------

def test_load_topology_with_measured_segments(tmp_path):
    doc = {
        "alpha": 0.3,
        "delta_max": 0.15,
        "nodes": [
            {"id": "local", "kind": "local", "processing_delay": 0.12, "reliability": 0.99},
            {"id": "edge1", "kind": "edge", "index": 1, "processing_delay": 0.01, "reliability": 0.9},
        ],
        "segments": {"5g": 0.02, "edge1": 0.01},
    }
    path = tmp_path / "topology.yaml"
    path.write_text(yaml.safe_dump(doc))

    topology = load_topology(path)

    assert topology.alpha == 0.3 and topology.delta_max == 0.15
    assert [n.id for n in topology.nodes] == ["local", "edge1"]
    assert topology.segments == SegmentDelays.of(0.02, (0.01,))
    assert not topology.uses_models


def test_load_topology_with_models_resolves_paths(tmp_path):
    doc = {
        "nodes": [{"id": "local", "kind": "local"}],
        "models": {"5g": "models/uplink.json"},
        "telemetry": {"5g": "data/uplink.csv"},
    }
    path = tmp_path / "topology.yaml"
    path.write_text(yaml.safe_dump(doc))

    topology = load_topology(path)

    assert topology.uses_models
    assert topology.models["5g"] == tmp_path / "models" / "uplink.json"
    assert topology.delta_max is None


def test_load_topology_errors(tmp_path):
    with pytest.raises(SelectionError):
        load_topology(tmp_path / "missing.yaml")

    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({"nodes": [{"id": "local", "kind": "local"}], "segments": {"wifi": 0.1}}))
    with pytest.raises(SelectionError):
        load_topology(bad)

    orphan = tmp_path / "orphan.yaml"
    orphan.write_text(yaml.safe_dump({"nodes": [{"id": "local", "kind": "local"}], "models": {"5g": "m.json"}}))
    with pytest.raises(SelectionError, match="telemetry"):
        load_topology(orphan)
