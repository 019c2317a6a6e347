"""
Purpose: The `latencykit` command line (python -m cli <subcommand>).
What it does:
One parser, one handler per subcommand:

- simulate   generator -> telemetry CSV + ground-truth sidecar
- fit        telemetry CSV -> model file + fit report
- evaluate   model + CSV -> EvalReport (--split in-sample | holdout)
- cv         k-fold CVReport + per-fold CSV
- bench      per-sample inference TimingReport
- residuals  binned residual profile + plot-ready CSV
- decide     topology document -> offloading Decision
- compare    several families -> one comparison table

Exit status: 0 success, 1 usage error (nothing written), 2 failure during
computation. Every run past argument parsing writes one
`<subcommand>.manifest.json` into --out.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import pandas as pd

from delay_models.artifact import FittedModel, load_model
from delay_models.errors import ModelError
from delay_models.params import Family, parameter_names
from evaluation.compare import compare_families, comparison_frame
from evaluation.cross_validation import holdout_split, kfold_cv
from evaluation.errors import EvaluationError
from evaluation.metrics import metrics
from evaluation.residuals import residual_points, residual_profile
from evaluation.timing import time_inference
from fitting.engine import fit_family
from fitting.errors import FitError
from fitting.policy import FitOptions, default_fit_options, quick_fit_options
from offloading.errors import SelectionError
from offloading.policy import selection_config
from offloading.segments import SegmentModelProvider
from offloading.selection import select_node
from offloading.topology import load_topology
from simulation.errors import GeneratorConfigError
from simulation.generator import generate
from simulation.policy import GeneratorConfig, HiddenModel, config_from_mapping, load_generator_config
from telemetry.errors import DatasetError
from telemetry.features import build_feature_matrix, to_feature_matrix
from telemetry.loader import load_csv, write_csv
from telemetry.models import MODEL_FEATURES, RAW_FEATURES, UTILIZATION, FeatureMatrix, SampleSet

from .errors import UsageError
from .manifest import RunManifest, dump_json
from .settings import default_output_dir

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2

# Everything a handler may raise for bad data, models or configs.
LIBRARY_ERRORS = (
    DatasetError,
    ModelError,
    FitError,
    EvaluationError,
    SelectionError,
    GeneratorConfigError,
    ValueError,
    OSError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message, self.format_usage())


def _family(tag: str) -> Family:
    try:
        return Family.parse(tag)
    except ModelError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _families(text: str) -> List[Family]:
    tags = [part for part in text.split(",") if part.strip()]
    if not tags:
        raise argparse.ArgumentTypeError("no families given")
    return [_family(tag.strip()) for tag in tags]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, default=None,
                        help="Output directory (default: $LATENCYKIT_OUTPUT_DIR or ./runs).")
    common.add_argument("--seed", type=int, default=None, help="Seed for every random choice (default 0).")
    common.add_argument("--pretty", action="store_true", help="Also print a human-readable table.")
    common.add_argument("--verbose", action="store_true", help="Debug logging.")

    fitting = _Parser(add_help=False)
    fitting.add_argument("--quick", action="store_true", help="Small iteration/start/epoch budget.")
    fitting.add_argument("--max-iters", dest="max_iterations", type=int, default=None, help="Levenberg-Marquardt iteration cap.")
    fitting.add_argument("--multistarts", type=int, default=None, help="Multistart count.")
    fitting.add_argument("--hidden", type=int, default=None, help="MLP hidden units.")
    fitting.add_argument("--epochs", type=int, default=None, help="MLP epochs.")
    fitting.add_argument("--univariate-feature", choices=MODEL_FEATURES, default=None)

    parser = _Parser(prog="latencykit", description="Delay-model fitting, evaluation and offloading decisions.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="<subcommand>")

    p = sub.add_parser("simulate", parents=[common], help="Generate synthetic telemetry.")
    p.add_argument("--config", type=Path, default=None, help="Generator config (YAML/JSON).")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--hidden-model", choices=[m.value for m in HiddenModel], default=None)
    p.add_argument("--noise", type=float, default=None, help="Noise sigma as a fraction of the mean delay.")
    p.add_argument("--correlation", type=float, default=None)
    p.add_argument("--name", default="telemetry", help="Base name of the written files.")

    p = sub.add_parser("fit", parents=[common, fitting], help="Fit one model family.")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--model", type=Path, default=None, help="Model file (default: <out>/<family>.model.json).")
    p.add_argument("--test-fraction", type=float, default=None,
                   help="Hold this fraction out (seeded) and train on the rest.")

    p = sub.add_parser("evaluate", parents=[common], help="Score a model on data.")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--split", choices=["in-sample", "holdout"], required=True)
    p.add_argument("--test-fraction", type=float, default=0.2)

    p = sub.add_parser("cv", parents=[common, fitting], help="k-fold cross-validation.")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--data", type=Path, default=None, help="Telemetry CSV (default: generated dataset).")
    p.add_argument("--k", type=int, default=5)

    p = sub.add_parser("bench", parents=[common], help="Per-sample inference timing.")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--data", type=Path, default=None)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--warmup", type=int, default=20)

    p = sub.add_parser("residuals", parents=[common], help="Residual profile over one feature.")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--feature", choices=RAW_FEATURES, default=UTILIZATION)
    p.add_argument("--bins", type=int, default=10)

    p = sub.add_parser("decide", parents=[common], help="Select an offloading target.")
    p.add_argument("--topology", type=Path, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--delta-max", type=float, default=None)

    p = sub.add_parser("compare", parents=[common, fitting], help="Compare families side by side.")
    p.add_argument("--families", type=_families,
                   default=list(Family), help="Comma-separated families (default: all).")
    p.add_argument("--data", type=Path, default=None)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--timing-n", type=int, default=100, help="Samples timed per family (0 = skip).")

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"{exc.usage}latencykit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args.out = args.out or default_output_dir()
    args.seed = args.seed if args.seed is not None else _default_seed(args)

    manifest = RunManifest(subcommand=args.command, config=_resolved(args))
    if args.seed is not None:
        manifest.seeds["seed"] = args.seed
    started = time.perf_counter()
    try:
        HANDLERS[args.command](args, manifest)
        status = EXIT_OK
    except UsageError as exc:
        print(f"latencykit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LIBRARY_ERRORS as exc:
        logger.error("%s failed: %s", args.command, exc)
        manifest.status = "failed"
        manifest.error = f"{type(exc).__name__}: {exc}"
        status = EXIT_FAILURE
    manifest.duration_s = time.perf_counter() - started
    manifest.write(args.out)
    return status


def main() -> int:
    return run(sys.argv[1:])


# -----------------------------
# Subcommand handlers
# -----------------------------

def _simulate(args, manifest: RunManifest) -> None:
    config = load_generator_config(args.config) if args.config else GeneratorConfig()
    if args.config:
        manifest.add_input(args.config)
    overrides: Dict[str, Any] = {}
    for flag, key in (("n", "n"), ("hidden_model", "hidden"), ("noise", "noise_fraction"),
                      ("correlation", "correlation"), ("seed", "seed")):
        if getattr(args, flag) is not None:
            overrides[key] = getattr(args, flag)
    config = config_from_mapping(overrides, base=config)
    manifest.config["generator"] = config.to_dict()
    manifest.seeds["seed"] = config.seed

    samples, truth = generate(config)
    csv_path = write_csv(samples, args.out / f"{args.name}.csv")
    truth_path = _write_text(args.out / f"{args.name}.ground_truth.json", dump_json(truth.to_dict()))
    manifest.add_output(csv_path)
    manifest.add_output(truth_path)

    summary = {
        "n": len(samples),
        "hidden": config.hidden.value,
        "seed": config.seed,
        "noise_sigma": truth.noise_sigma,
        "data": str(csv_path),
        "ground_truth": str(truth_path),
    }
    _emit(args, summary, lambda: samples.to_frame().describe())


def _fit(args, manifest: RunManifest) -> None:
    opts = _fit_options(args)
    manifest.config["fit_options"] = _options_dict(opts)
    samples = _load(args.data, manifest)
    M = build_feature_matrix(samples)
    if args.test_fraction is not None:
        train, _ = holdout_split(M.n_rows, args.test_fraction, args.seed)
        M = M.take(train)

    model, report = fit_family(args.family, M, opts)
    path = model.save(args.model or args.out / f"{args.family.value}.model.json")
    manifest.add_output(path)

    doc = {
        "family": args.family.value,
        "model": str(path),
        "n_train": M.n_rows,
        "retained_features": list(M.feature_names),
        "fit_report": report.to_dict(),
    }
    report_path = _write_text(args.out / "fit.report.json", dump_json(doc))
    manifest.add_output(report_path)
    _emit(args, doc, lambda: pd.DataFrame({
        "parameter": parameter_names(model.params),
        "value": model.params.to_vector(),
    }))


def _evaluate(args, manifest: RunManifest) -> None:
    model = _load_model(args.model, manifest)
    M = _model_matrix(model, _load(args.data, manifest))
    if args.split == "holdout":
        _, test = holdout_split(M.n_rows, args.test_fraction, args.seed)
        M = M.take(test)

    report = metrics(M.y, model.predict_matrix(M))
    doc = {
        "family": model.family.value,
        "split": args.split,
        "test_fraction": args.test_fraction if args.split == "holdout" else None,
        "seed": args.seed,
        "report": report.to_dict(),
    }
    manifest.add_output(_write_text(args.out / "evaluate.report.json", dump_json(doc)))
    _emit(args, doc, lambda: pd.DataFrame([report.to_dict()]))


def _cv(args, manifest: RunManifest) -> None:
    opts = _fit_options(args)
    manifest.config["fit_options"] = _options_dict(opts)
    M = build_feature_matrix(_dataset(args, manifest))

    report = kfold_cv(M, args.family, k=args.k, seed=args.seed, opts=opts)
    doc = report.to_dict()
    manifest.add_output(_write_text(args.out / "cv.report.json", dump_json(doc)))

    folds = _fold_frame(doc)
    folds_path = args.out / "cv.folds.csv"
    folds.to_csv(folds_path, index=False)
    manifest.add_output(folds_path)
    _emit(args, doc, lambda: folds)


def _bench(args, manifest: RunManifest) -> None:
    model = _load_model(args.model, manifest)
    M = _model_matrix(model, _dataset(args, manifest))
    report = time_inference(model, M, n=args.n, warmup=args.warmup)
    doc = {"family": model.family.value, "timing": report.to_dict()}
    manifest.add_output(_write_text(args.out / "bench.report.json", dump_json(doc)))
    _emit(args, doc, lambda: pd.DataFrame([report.to_dict()]))


def _residuals(args, manifest: RunManifest) -> None:
    model = _load_model(args.model, manifest)
    samples = _load(args.data, manifest)
    M = _model_matrix(model, samples, extra=args.feature)

    profile = residual_profile(model, M, args.feature, bins=args.bins)
    doc = {"family": model.family.value, "profile": profile.to_dict()}
    manifest.add_output(_write_text(args.out / "residuals.profile.json", dump_json(doc)))

    points_path = args.out / "residuals.points.csv"
    residual_points(model, M, args.feature).to_csv(points_path, index=False, float_format="%.12g")
    manifest.add_output(points_path)
    _emit(args, doc, lambda: pd.DataFrame({
        "low": profile.edges[:-1],
        "high": profile.edges[1:],
        "count": profile.counts,
        "mean": profile.means,
        "std": profile.stds,
    }))


def _decide(args, manifest: RunManifest) -> None:
    topology = load_topology(args.topology)
    manifest.add_input(args.topology)

    alpha = args.alpha if args.alpha is not None else topology.alpha
    delta_max = args.delta_max if args.delta_max is not None else topology.delta_max
    if delta_max is None:
        raise UsageError("delta_max is required (--delta-max or 'delta_max' in the topology)")
    config = selection_config(delta_max=delta_max, alpha=0.5 if alpha is None else alpha)
    manifest.config["selection"] = {"alpha": config.alpha, "delta_max": config.delta_max}

    clamped = 0
    if topology.uses_models:
        provider = SegmentModelProvider({seg: _load_model(path, manifest) for seg, path in topology.models.items()})
        current = {seg: _load(topology.telemetry[seg], manifest)[-1] for seg in topology.models}
        segments = provider(current)
        clamped = provider.counter.value
    else:
        segments = topology.segments

    decision = select_node(segments, topology.nodes, config)
    doc = {
        "decision": decision.to_dict(),
        "segments": segments.to_dict(),
        "source": "models" if topology.uses_models else "measured",
        "clamped_predictions": clamped,
        "alpha": config.alpha,
        "delta_max": config.delta_max,
    }
    manifest.add_output(_write_text(args.out / "decision.json", dump_json(doc)))
    _emit(args, doc, lambda: pd.DataFrame({
        "node": [node.id for node in topology.nodes],
        "total_delay": [decision.delays.get(node.id) for node in topology.nodes],
        "score": [decision.scores.get(node.id) for node in topology.nodes],
    }))


def _compare(args, manifest: RunManifest) -> None:
    opts = _fit_options(args)
    manifest.config["fit_options"] = _options_dict(opts)
    M = build_feature_matrix(_dataset(args, manifest))

    rows = compare_families(M, args.families, k=args.k, seed=args.seed, opts=opts, timing_n=args.timing_n)
    table = comparison_frame(rows)
    doc = {"k": args.k, "seed": args.seed, "rows": [row.to_dict() for row in rows]}
    manifest.add_output(_write_text(args.out / "compare.report.json", dump_json(doc)))

    table_path = args.out / "compare.table.csv"
    table.to_csv(table_path, index=False)
    manifest.add_output(table_path)
    _emit(args, doc, lambda: table)


HANDLERS: Dict[str, Callable[[argparse.Namespace, RunManifest], None]] = {
    "simulate": _simulate,
    "fit": _fit,
    "evaluate": _evaluate,
    "cv": _cv,
    "bench": _bench,
    "residuals": _residuals,
    "decide": _decide,
    "compare": _compare,
}


# ---- Internal helpers ----

def _default_seed(args) -> Optional[int]:
    # simulate takes its seed from the config file unless --seed is given.
    return None if args.command == "simulate" else 0


def _resolved(args) -> Dict[str, Any]:
    resolved: Dict[str, Any] = {}
    for key, value in sorted(vars(args).items()):
        if isinstance(value, Path):
            value = str(value)
        elif isinstance(value, Family):
            value = value.value
        elif isinstance(value, list):
            value = [v.value if isinstance(v, Family) else v for v in value]
        resolved[key] = value
    return resolved


def _fit_options(args) -> FitOptions:
    base = quick_fit_options(args.seed) if args.quick else replace(default_fit_options(), seed=args.seed)
    updates: Dict[str, Any] = {}
    if args.max_iterations is not None:
        updates["max_iterations"] = args.max_iterations
    if args.multistarts is not None:
        updates["multistart_count"] = args.multistarts
    if args.univariate_feature is not None:
        updates["univariate_feature"] = args.univariate_feature
    mlp_updates = {k: v for k, v in (("hidden", args.hidden), ("epochs", args.epochs)) if v is not None}
    if mlp_updates:
        updates["mlp"] = replace(base.mlp, **mlp_updates)
    opts = replace(base, **updates)
    opts.validate()
    return opts


def _options_dict(opts: FitOptions) -> Dict[str, Any]:
    doc = {key: value for key, value in vars(opts).items() if key != "mlp"}
    doc["mlp"] = dict(vars(opts.mlp))
    return doc


def _load(path: Path, manifest: RunManifest) -> SampleSet:
    manifest.add_input(path)
    return load_csv(path)


def _load_model(path: Path, manifest: RunManifest) -> FittedModel:
    manifest.add_input(path)
    return load_model(path)


def _dataset(args, manifest: RunManifest) -> SampleSet:
    if args.data is not None:
        return _load(args.data, manifest)
    config = replace(GeneratorConfig(), seed=args.seed)
    manifest.config["generator"] = config.to_dict()
    return generate(config)[0]


def _model_matrix(model: FittedModel, samples: SampleSet, extra: Optional[str] = None) -> FeatureMatrix:
    """Rows scaled and ordered the way the model was trained."""
    names = list(model.retained_features)
    scaling = model.scaling
    if extra is not None and extra not in names:
        names.append(extra)
        if not scaling.has(extra):
            scaling = replace(scaling, divisors={**scaling.divisors, extra: 1.0})
    return to_feature_matrix(samples, names, scaling)


def _fold_frame(doc: Dict[str, Any]) -> pd.DataFrame:
    rows = []
    for fold in doc["folds"]:
        report = fold["report"] or {}
        rows.append({
            "fold": fold["fold"],
            "train_size": fold["train_size"],
            "test_size": fold["test_size"],
            "mae": report.get("mae"),
            "mse": report.get("mse"),
            "r2": report.get("r2"),
            "error": fold["error"],
        })
    return pd.DataFrame(rows)


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _emit(args, doc: Dict[str, Any], table: Callable[[], pd.DataFrame]) -> None:
    print(dump_json(doc), end="")
    if args.pretty:
        print(table().to_string())
