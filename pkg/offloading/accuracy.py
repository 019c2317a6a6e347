"""
Purpose: Decision accuracy of model-driven offloading.
What it does:
For every decision epoch, selects a node twice: once from the true segment
delays (the observed Delay of each segment's telemetry row) and once from
the delays a family's models predict for the same telemetry. The agreement
rate per family is the decision accuracy.

simulate_decision_accuracy builds the whole experiment from the generator:
per-segment training sets, one fitted model per (family, segment), and a
fresh stream of epoch telemetry.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, List, Mapping, Optional, Sequence

from delay_models.params import Family
from fitting.engine import fit_family
from fitting.policy import FitOptions, default_fit_options
from simulation.generator import generate
from simulation.policy import GeneratorConfig, saturating_config
from telemetry.features import build_feature_matrix
from telemetry.models import SampleSet

from .errors import MissingSegmentError
from .models import SEGMENT_5G, AccuracyReport, CandidateNode, NodeKind, SegmentDelays, edge_segment
from .policy import SelectionConfig, selection_config
from .segments import SegmentModelProvider
from .selection import select_node

logger = logging.getLogger(__name__)

# Seed offset between training telemetry and epoch telemetry.
EPOCH_SEED_OFFSET = 1000


def default_nodes() -> List[CandidateNode]:
    return [
        CandidateNode.new("local", NodeKind.LOCAL, processing_delay=0.12, reliability=0.99),
        CandidateNode.new("near", NodeKind.NEAR, processing_delay=0.03, reliability=0.95),
        CandidateNode.new("edge1", NodeKind.EDGE, processing_delay=0.01, reliability=0.90, index=1),
        CandidateNode.new("edge2", NodeKind.EDGE, processing_delay=0.008, reliability=0.93, index=2),
        CandidateNode.new("edge3", NodeKind.EDGE, processing_delay=0.005, reliability=0.97, index=3),
    ]


def segment_generator_configs(n: int, seed: int = 0, edges: int = 3) -> Dict[str, GeneratorConfig]:
    """
    Saturating-queue telemetry per segment. Wired edge paths get half the
    service time of the 5G uplink and their own seed.
    """
    uplink = saturating_config(n=n, seed=seed)
    configs = {SEGMENT_5G: uplink}
    for i in range(1, edges + 1):
        queue = replace(
            uplink.queue,
            service_per_mb=uplink.queue.service_per_mb / 2,
            service_per_kpps=uplink.queue.service_per_kpps / 2,
        )
        configs[edge_segment(i)] = replace(uplink, seed=seed + i, queue=queue)
    return configs


def true_delays(epochs: Mapping[str, SampleSet], j: int) -> SegmentDelays:
    edge_keys = sorted(int(key[len("edge"):]) for key in epochs if key.startswith("edge"))
    return SegmentDelays(
        d_5g=epochs[SEGMENT_5G][j].delay,
        d_edge={i: epochs[edge_segment(i)][j].delay for i in edge_keys},
    )


def decision_accuracy(
    providers: Mapping[str, SegmentModelProvider],
    epochs: Mapping[str, SampleSet],
    nodes: Sequence[CandidateNode],
    config: SelectionConfig,
) -> List[AccuracyReport]:
    """
    `providers` maps family tag -> per-segment models; `epochs` maps
    segment key -> one telemetry row per epoch (all the same length).
    """
    if SEGMENT_5G not in epochs:
        raise MissingSegmentError(f"no epoch telemetry for segment '{SEGMENT_5G}'")
    lengths = {len(samples) for samples in epochs.values()}
    if len(lengths) != 1:
        raise ValueError(f"epoch telemetry lengths differ across segments: {sorted(lengths)}")
    n_epochs = lengths.pop()

    oracle = []
    for j in range(n_epochs):
        oracle.append(select_node(true_delays(epochs, j), nodes, config))
    true_fallbacks = sum(decision.fallback for decision in oracle)

    reports: List[AccuracyReport] = []
    for family, provider in providers.items():
        agreements = 0
        fallbacks = 0
        for j in range(n_epochs):
            snapshot = {segment: samples[j] for segment, samples in epochs.items()}
            decision = select_node(provider(snapshot), nodes, config)
            agreements += decision.selected_id == oracle[j].selected_id
            fallbacks += decision.fallback
        report = AccuracyReport(
            family=family,
            epochs=n_epochs,
            agreements=agreements,
            fallbacks_true=true_fallbacks,
            fallbacks_predicted=fallbacks,
            clamped=provider.counter.value,
        )
        logger.info("%s decision accuracy %.3f over %d epochs", family, report.rate, n_epochs)
        reports.append(report)
    return reports


def simulate_decision_accuracy(
    families: Sequence = (Family.RATIONAL_EXP, Family.LINEAR),
    epochs: int = 1000,
    n_train: int = 2000,
    seed: int = 0,
    nodes: Optional[Sequence[CandidateNode]] = None,
    config: Optional[SelectionConfig] = None,
    fit_options: Optional[FitOptions] = None,
) -> List[AccuracyReport]:
    nodes = list(nodes or default_nodes())
    config = config or selection_config(delta_max=0.15)
    fit_options = fit_options or replace(default_fit_options(), seed=seed)

    training = segment_generator_configs(n_train, seed)
    matrices = {segment: build_feature_matrix(generate(cfg)[0]) for segment, cfg in training.items()}

    providers: Dict[str, SegmentModelProvider] = {}
    for tag in families:
        family = Family.parse(tag)
        models = {segment: fit_family(family, M, fit_options)[0] for segment, M in matrices.items()}
        providers[family.value] = SegmentModelProvider(models)

    epoch_sets = {
        segment: generate(replace(cfg, n=epochs, seed=cfg.seed + EPOCH_SEED_OFFSET))[0]
        for segment, cfg in training.items()
    }
    return decision_accuracy(providers, epoch_sets, nodes, config)
