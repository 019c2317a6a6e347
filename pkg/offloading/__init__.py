"""
Offloading package.

Public API:
- compose_delays, select_node
- predict_segment, predict_segments, SegmentModelProvider, ClampCounter
- decision_accuracy, simulate_decision_accuracy
- load_topology
"""

from .accuracy import decision_accuracy, default_nodes, segment_generator_configs, simulate_decision_accuracy
from .errors import MissingSegmentError, SelectionError
from .models import (
    SEGMENT_5G,
    AccuracyReport,
    CandidateNode,
    Decision,
    NodeKind,
    SegmentDelays,
    edge_segment,
)
from .policy import SelectionConfig, selection_config
from .segments import CLAMP_COUNTER, ClampCounter, SegmentModelProvider, predict_segment, predict_segments
from .selection import compose_delays, select_node
from .topology import Topology, load_topology, topology_from_mapping

__all__ = [
    "compose_delays",
    "select_node",
    "predict_segment",
    "predict_segments",
    "SegmentModelProvider",
    "ClampCounter",
    "CLAMP_COUNTER",
    "decision_accuracy",
    "simulate_decision_accuracy",
    "default_nodes",
    "segment_generator_configs",
    "load_topology",
    "topology_from_mapping",
    "Topology",
    "SelectionConfig",
    "selection_config",
    "CandidateNode",
    "NodeKind",
    "SegmentDelays",
    "Decision",
    "AccuracyReport",
    "SEGMENT_5G",
    "edge_segment",
    "SelectionError",
    "MissingSegmentError",
]
