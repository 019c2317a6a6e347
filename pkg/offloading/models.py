"""
Purpose: Core data models for the offloading domain.
What it does:
Defines candidate compute nodes, the per-segment delays feeding a decision,
and the decision itself, without any selection logic.

Delay composition per node kind:
- LOCAL:  T = D_proc
- NEAR:   T = D_5G + D_proc
- EDGE i: T = D_5G + D_E[i] + D_proc
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from .errors import MissingSegmentError, SelectionError

SEGMENT_5G = "5g"


def edge_segment(index: int) -> str:
    """Segment key for the wired path to edge server `index` (1-based)."""
    return f"edge{index}"


class NodeKind(str, Enum):
    LOCAL = "local"
    NEAR = "near"
    EDGE = "edge"


_KIND_RANK = {NodeKind.LOCAL: 0, NodeKind.NEAR: 1, NodeKind.EDGE: 2}


@dataclass(frozen=True)
class CandidateNode:
    """
    One offloading target. `index` is only meaningful (and required) for EDGE nodes.
    """
    id: str
    kind: NodeKind
    processing_delay: float = 0.0
    reliability: float = 1.0
    index: Optional[int] = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.processing_delay) and self.processing_delay >= 0):
            raise SelectionError(f"node '{self.id}': processing_delay must be finite and >= 0")
        if not (0.0 <= self.reliability <= 1.0):
            raise SelectionError(f"node '{self.id}': reliability must lie in [0, 1], got {self.reliability!r}")
        if self.kind is NodeKind.EDGE and (self.index is None or self.index < 1):
            raise SelectionError(f"edge node '{self.id}' needs an index >= 1")

    @property
    def priority(self) -> Tuple[int, int]:
        """Tie-break order: LOCAL < NEAR < EDGE1 < EDGE2 < EDGE3."""
        return (_KIND_RANK[self.kind], self.index or 0)

    @classmethod
    def new(
        cls,
        node_id: str,
        kind: str | NodeKind,
        processing_delay: float = 0.0,
        reliability: float = 1.0,
        index: Optional[int] = None,
    ) -> CandidateNode:
        if isinstance(kind, str):
            try:
                kind = NodeKind(kind.strip().lower())
            except ValueError:
                raise SelectionError(f"node '{node_id}': unknown kind '{kind}'") from None
        return cls(
            id=str(node_id),
            kind=kind,
            processing_delay=float(processing_delay),
            reliability=float(reliability),
            index=None if index is None else int(index),
        )


@dataclass(frozen=True)
class SegmentDelays:
    """
    Current delay of the 5G uplink and of each wired edge path, in seconds.
    Values are measured or predicted; either way finite and >= 0.
    """
    d_5g: float
    d_edge: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = [(SEGMENT_5G, self.d_5g)] + [(edge_segment(i), v) for i, v in self.d_edge.items()]
        for name, value in values:
            if not (math.isfinite(value) and value >= 0):
                raise SelectionError(f"segment delay {name} must be finite and >= 0, got {value!r}")

    def edge(self, index: int) -> float:
        try:
            return self.d_edge[index]
        except KeyError:
            raise MissingSegmentError(f"no delay for segment {edge_segment(index)}") from None

    @classmethod
    def of(cls, d_5g: float, edges: Sequence[float] = ()) -> SegmentDelays:
        """Edge paths numbered 1..len(edges)."""
        return cls(d_5g=float(d_5g), d_edge={i + 1: float(v) for i, v in enumerate(edges)})

    def to_dict(self) -> Dict[str, float]:
        out = {SEGMENT_5G: self.d_5g}
        out.update({edge_segment(i): v for i, v in sorted(self.d_edge.items())})
        return out


@dataclass(frozen=True)
class Decision:
    """
    Selected node plus the full score table.

    On fallback (5G delay above the guard) nothing is scored: `score` is
    None and `scores` is empty.
    """
    selected_id: str
    total_delay: float
    score: Optional[float]
    scores: Dict[str, float]
    delays: Dict[str, float]
    fallback: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "selected": self.selected_id,
            "total_delay": self.total_delay,
            "score": self.score,
            "scores": dict(self.scores),
            "delays": dict(self.delays),
            "fallback": self.fallback,
        }


@dataclass(frozen=True)
class AccuracyReport:
    """How often model-driven selections agree with true-delay selections."""
    family: str
    epochs: int
    agreements: int
    fallbacks_true: int = 0
    fallbacks_predicted: int = 0
    clamped: int = 0

    @property
    def rate(self) -> float:
        return self.agreements / self.epochs if self.epochs else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "epochs": self.epochs,
            "agreements": self.agreements,
            "rate": self.rate,
            "fallbacks_true": self.fallbacks_true,
            "fallbacks_predicted": self.fallbacks_predicted,
            "clamped": self.clamped,
        }
