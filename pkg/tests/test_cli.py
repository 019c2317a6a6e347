import json

import pandas as pd
import pytest
import yaml

from cli.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, run
from delay_models.params import Family


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """
    One small simulated dataset and a quick rational fit on it, shared by
    the read-only subcommand tests.
    """
    out = tmp_path_factory.mktemp("cli")
    assert run(["simulate", "--n", "300", "--seed", "1", "--out", str(out)]) == EXIT_OK
    data = out / "telemetry.csv"
    assert run(["fit", "--family", "rational", "--data", str(data), "--quick", "--out", str(out)]) == EXIT_OK
    return out, data, out / "rational.model.json"


def test_usage_errors_write_nothing(tmp_path):
    assert run(["nope", "--out", str(tmp_path)]) == EXIT_USAGE
    assert run(["fit", "--family", "rational", "--out", str(tmp_path)]) == EXIT_USAGE
    assert run(["fit", "--family", "quadratic", "--data", "x.csv", "--out", str(tmp_path)]) == EXIT_USAGE
    assert list(tmp_path.iterdir()) == []


def test_parser_exposes_fit_budget_flags():
    args = build_parser().parse_args(["cv", "--family", "rational_exp", "--multistarts", "3", "--max-iters", "50"])

    assert args.multistarts == 3
    assert args.max_iterations == 50
    assert args.k == 5


def test_compare_defaults_to_every_family():
    args = build_parser().parse_args(["compare"])

    assert args.families == list(Family)
    assert {Family.SIGMOID, Family.MLP} <= set(args.families)


def test_simulate_writes_dataset_and_manifest(workspace):
    out, data, _ = workspace

    # 1. Telemetry CSV and ground-truth sidecar.
    frame = pd.read_csv(data)
    assert list(frame.columns) == ["Client_Frame_Size", "Arrival_rate_Cl", "Arrival_rate_All", "Utilization", "Delay"]
    assert len(frame) == 300
    truth = read_json(out / "telemetry.ground_truth.json")
    assert truth["config"]["seed"] == 1

    # 2. Manifest records seed, outputs and their digests.
    manifest = read_json(out / "simulate.manifest.json")
    assert manifest["status"] == "ok"
    assert manifest["seeds"] == {"seed": 1}
    assert str(data) in manifest["outputs"]
    assert len(manifest["digests"][str(data)]) == 64


def test_fit_then_evaluate(workspace, tmp_path):
    out, data, model = workspace

    fit_report = read_json(out / "fit.report.json")
    assert fit_report["family"] == "rational"
    assert fit_report["n_train"] == 300
    assert "Arrival_rate_Cl" not in fit_report["retained_features"]

    args = ["evaluate", "--model", str(model), "--data", str(data), "--out", str(tmp_path)]
    assert run(args + ["--split", "in-sample"]) == EXIT_OK
    in_sample = read_json(tmp_path / "evaluate.report.json")
    assert in_sample["split"] == "in-sample"
    assert in_sample["report"]["n"] == 300
    assert in_sample["report"]["r2"] > 0.5

    assert run(args + ["--split", "holdout", "--test-fraction", "0.2"]) == EXIT_OK
    holdout = read_json(tmp_path / "evaluate.report.json")
    assert holdout["report"]["n"] == 60
    assert holdout["test_fraction"] == 0.2


def test_cv_is_reproducible(workspace, tmp_path):
    _, data, _ = workspace
    first, second = tmp_path / "a", tmp_path / "b"

    for out in (first, second):
        assert run(["cv", "--family", "linear", "--data", str(data), "--k", "5", "--seed", "3", "--out", str(out)]) == EXIT_OK

    assert (first / "cv.report.json").read_text() == (second / "cv.report.json").read_text()
    folds = pd.read_csv(first / "cv.folds.csv")
    assert list(folds["test_size"]) == [60] * 5


def test_bench_residuals_and_compare(workspace, tmp_path):
    _, data, model = workspace

    assert run(["bench", "--model", str(model), "--data", str(data), "--n", "5", "--out", str(tmp_path)]) == EXIT_OK
    timing = read_json(tmp_path / "bench.report.json")["timing"]
    assert timing["n"] == 5
    assert timing["min_ms"] <= timing["avg_ms"] <= timing["max_ms"]

    assert run(["residuals", "--model", str(model), "--data", str(data), "--bins", "4", "--out", str(tmp_path)]) == EXIT_OK
    profile = read_json(tmp_path / "residuals.profile.json")["profile"]
    assert sum(profile["counts"]) == 300
    assert len(pd.read_csv(tmp_path / "residuals.points.csv")) == 300

    args = ["compare", "--families", "linear,polynomial2", "--data", str(data), "--k", "3", "--timing-n", "5"]
    assert run(args + ["--out", str(tmp_path)]) == EXIT_OK
    table = pd.read_csv(tmp_path / "compare.table.csv")
    assert set(table["family"]) == {"linear", "polynomial2"}


def test_decide_on_measured_segments(tmp_path, capsys):
    topology = tmp_path / "topology.yaml"
    topology.write_text(yaml.safe_dump({
        "nodes": [
            {"id": "local", "kind": "local", "processing_delay": 0.12, "reliability": 0.99},
            {"id": "edge1", "kind": "edge", "index": 1, "processing_delay": 0.01, "reliability": 0.9},
        ],
        "segments": {"5g": 0.02, "edge1": 0.01},
    }))
    out = tmp_path / "out"

    assert run(["decide", "--topology", str(topology), "--alpha", "1", "--delta-max", "0.15",
                "--out", str(out), "--pretty"]) == EXIT_OK
    doc = read_json(out / "decision.json")
    assert doc["decision"]["selected"] == "edge1"
    assert doc["decision"]["total_delay"] == pytest.approx(0.04)
    assert doc["source"] == "measured"
    assert "total_delay" in capsys.readouterr().out

    assert run(["decide", "--topology", str(topology), "--delta-max", "0.01", "--out", str(out)]) == EXIT_OK
    assert read_json(out / "decision.json")["decision"]["fallback"] is True


def test_decide_with_segment_models(workspace, tmp_path):
    _, data, model = workspace
    topology = tmp_path / "topology.yaml"
    topology.write_text(yaml.safe_dump({
        "delta_max": 10.0,
        "nodes": [
            {"id": "local", "kind": "local", "processing_delay": 0.12, "reliability": 0.99},
            {"id": "near", "kind": "near", "processing_delay": 0.03, "reliability": 0.95},
        ],
        "models": {"5g": str(model)},
        "telemetry": {"5g": str(data)},
    }))

    assert run(["decide", "--topology", str(topology), "--out", str(tmp_path)]) == EXIT_OK

    doc = read_json(tmp_path / "decision.json")
    assert doc["source"] == "models"
    assert doc["alpha"] == 0.5
    assert set(doc["decision"]["scores"]) == {"local", "near"}


def test_decide_without_guard_is_a_usage_error(tmp_path):
    topology = tmp_path / "topology.yaml"
    topology.write_text(yaml.safe_dump({"nodes": [{"id": "local", "kind": "local"}], "segments": {"5g": 0.01}}))

    assert run(["decide", "--topology", str(topology), "--out", str(tmp_path / "out")]) == EXIT_USAGE
    assert not (tmp_path / "out").exists()


def test_computation_failure_exits_2_with_failed_manifest(tmp_path):
    out = tmp_path / "out"

    status = run(["fit", "--family", "linear", "--data", str(tmp_path / "missing.csv"), "--out", str(out)])

    assert status == EXIT_FAILURE
    manifest = read_json(out / "fit.manifest.json")
    assert manifest["status"] == "failed"
    assert "missing.csv" in manifest["error"]
    assert manifest["digests"] == {}


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("LATENCYKIT_OUTPUT_DIR", str(tmp_path))

    assert run(["simulate", "--n", "20", "--name", "tiny"]) == EXIT_OK

    assert (tmp_path / "tiny.csv").is_file()
    assert (tmp_path / "simulate.manifest.json").is_file()
