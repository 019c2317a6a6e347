"""
Purpose: Delay composition and the delay/reliability node selector.
What it does:
- compose_delays: end-to-end delay T_j for every candidate
- select_node: 5G guard, then argmin of
      S_j = alpha * T_j / T_max + (1 - alpha) * (1 - R_j)
  over all candidates (LOCAL included), ties broken by node priority.

Stateless; safe to call from several threads at once.
"""

from __future__ import annotations

import logging
from typing import Dict, Sequence

from .errors import SelectionError
from .models import CandidateNode, Decision, NodeKind, SegmentDelays
from .policy import SelectionConfig

logger = logging.getLogger(__name__)


def compose_delays(segments: SegmentDelays, nodes: Sequence[CandidateNode]) -> Dict[str, float]:
    """
    Per-node total delay in seconds, keyed by node id (input order kept).
    """
    if not nodes:
        raise SelectionError("candidate set is empty")

    totals: Dict[str, float] = {}
    for node in nodes:
        if node.kind is NodeKind.LOCAL:
            total = node.processing_delay
        elif node.kind is NodeKind.NEAR:
            total = segments.d_5g + node.processing_delay
        else:
            total = segments.d_5g + segments.edge(node.index) + node.processing_delay
        totals[node.id] = total
    return totals


def select_node(segments: SegmentDelays, nodes: Sequence[CandidateNode], config: SelectionConfig) -> Decision:
    config.validate()
    local = _local_node(nodes)

    if segments.d_5g > config.delta_max:
        logger.debug("5G delay %.6g s above guard %.6g s: staying local", segments.d_5g, config.delta_max)
        return Decision(
            selected_id=local.id,
            total_delay=local.processing_delay,
            score=None,
            scores={},
            delays={},
            fallback=True,
        )

    delays = compose_delays(segments, nodes)
    t_max = max(delays.values())
    alpha = config.alpha

    scores: Dict[str, float] = {}
    for node in nodes:
        # T_max = 0 means every delay is 0; reliability alone decides.
        normalized = delays[node.id] / t_max if t_max > 0 else 0.0
        scores[node.id] = alpha * normalized + (1.0 - alpha) * (1.0 - node.reliability)

    best = min(nodes, key=lambda node: (scores[node.id], node.priority))
    return Decision(
        selected_id=best.id,
        total_delay=delays[best.id],
        score=scores[best.id],
        scores=scores,
        delays=delays,
        fallback=False,
    )


# ---- Internal helpers ----

def _local_node(nodes: Sequence[CandidateNode]) -> CandidateNode:
    if not nodes:
        raise SelectionError("candidate set is empty")
    ids = [node.id for node in nodes]
    if len(set(ids)) != len(ids):
        raise SelectionError(f"duplicate node ids in {ids}")
    locals_ = [node for node in nodes if node.kind is NodeKind.LOCAL]
    if not locals_:
        raise SelectionError("candidate set has no LOCAL node")
    if len(locals_) > 1:
        raise SelectionError(f"candidate set has {len(locals_)} LOCAL nodes, expected exactly one")
    return locals_[0]
