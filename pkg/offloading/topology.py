"""
Purpose: Decision topology documents (YAML or JSON).
What it does:
Reads the candidate nodes, selection knobs and either measured segment
delays or per-segment model files + current telemetry for one decision.

Document layout:

    alpha: 0.5
    delta_max: 0.15
    nodes:
      - {id: local, kind: local, processing_delay: 0.12, reliability: 0.99}
      - {id: near,  kind: near,  processing_delay: 0.03, reliability: 0.95}
      - {id: edge1, kind: edge,  index: 1, processing_delay: 0.01, reliability: 0.9}
    segments:                 # measured delays, seconds
      5g: 0.02
      edge1: 0.01
    # or, instead of segments:
    models:    {5g: models/uplink.json, edge1: models/edge1.json}
    telemetry: {5g: data/uplink.csv,    edge1: data/edge1.csv}

With models, the last row of each telemetry CSV is the current sample.
Relative paths resolve against the document's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import yaml

from .errors import SelectionError
from .models import SEGMENT_5G, CandidateNode, SegmentDelays


@dataclass(frozen=True)
class Topology:
    nodes: List[CandidateNode]
    alpha: Optional[float] = None
    delta_max: Optional[float] = None
    segments: Optional[SegmentDelays] = None
    models: Dict[str, Path] = field(default_factory=dict)
    telemetry: Dict[str, Path] = field(default_factory=dict)

    @property
    def uses_models(self) -> bool:
        return self.segments is None


def load_topology(path: Union[str, Path]) -> Topology:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SelectionError(f"topology file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise SelectionError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SelectionError(f"{path} must contain a mapping")
    return topology_from_mapping(doc, base_dir=path.parent)


def topology_from_mapping(doc: Mapping[str, Any], base_dir: Path = Path(".")) -> Topology:
    raw_nodes = doc.get("nodes") or []
    if not raw_nodes:
        raise SelectionError("topology lists no nodes")
    nodes = []
    for entry in raw_nodes:
        try:
            nodes.append(CandidateNode.new(
                entry["id"],
                entry["kind"],
                processing_delay=entry.get("processing_delay", 0.0),
                reliability=entry.get("reliability", 1.0),
                index=entry.get("index"),
            ))
        except KeyError as exc:
            raise SelectionError(f"node entry {entry!r} is missing {exc}") from None

    segments = None
    if doc.get("segments") is not None:
        segments = _segments(doc["segments"])
    models = {str(k): base_dir / str(v) for k, v in (doc.get("models") or {}).items()}
    telemetry = {str(k): base_dir / str(v) for k, v in (doc.get("telemetry") or {}).items()}
    if segments is None:
        if not models:
            raise SelectionError("topology needs either 'segments' or 'models' + 'telemetry'")
        missing = sorted(set(models) - set(telemetry))
        if missing:
            raise SelectionError(f"no telemetry file for segment(s) {', '.join(missing)}")

    return Topology(
        nodes=nodes,
        alpha=None if doc.get("alpha") is None else float(doc["alpha"]),
        delta_max=None if doc.get("delta_max") is None else float(doc["delta_max"]),
        segments=segments,
        models=models,
        telemetry=telemetry,
    )


def _segments(raw: Mapping[str, Any]) -> SegmentDelays:
    values = {str(k).lower(): float(v) for k, v in raw.items()}
    if SEGMENT_5G not in values:
        raise SelectionError(f"segments must include '{SEGMENT_5G}'")
    edges = {}
    for key, value in values.items():
        if key == SEGMENT_5G:
            continue
        if not key.startswith("edge") or not key[len("edge"):].isdigit():
            raise SelectionError(f"unknown segment '{key}' (expected '5g' or 'edge<i>')")
        edges[int(key[len("edge"):])] = value
    return SegmentDelays(d_5g=values[SEGMENT_5G], d_edge=edges)
