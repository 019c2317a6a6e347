import numpy as np
import pytest

from offloading.errors import MissingSegmentError, SelectionError
from offloading.models import CandidateNode, NodeKind, SegmentDelays
from offloading.policy import SelectionConfig, selection_config
from offloading.selection import compose_delays, select_node

PRIORITY = {NodeKind.LOCAL: 0, NodeKind.NEAR: 1, NodeKind.EDGE: 2}


@pytest.fixture
def nodes():
    return [
        CandidateNode.new("local", "local"),
        CandidateNode.new("near", "near"),
        CandidateNode.new("edge1", "edge", index=1),
        CandidateNode.new("edge2", "edge", index=2),
        CandidateNode.new("edge3", "edge", index=3),
    ]


def random_case(rng):
    n_edges = int(rng.integers(0, 4))
    nodes = [CandidateNode.new("local", "local", rng.uniform(0, 0.2), rng.uniform(0, 1))]
    if rng.random() < 0.8:
        nodes.append(CandidateNode.new("near", "near", rng.uniform(0, 0.1), rng.uniform(0, 1)))
    for i in range(1, n_edges + 1):
        nodes.append(CandidateNode.new(f"edge{i}", "edge", rng.uniform(0, 0.05), rng.uniform(0, 1), index=i))
    # Coarse grids make exact score ties common.
    if rng.random() < 0.3:
        nodes = [
            CandidateNode.new(n.id, n.kind, round(n.processing_delay, 1), round(n.reliability, 1), n.index)
            for n in nodes
        ]
    rng.shuffle(nodes)
    segments = SegmentDelays.of(rng.uniform(0, 0.2), rng.uniform(0, 0.1, n_edges))
    config = selection_config(delta_max=rng.uniform(0.01, 0.25), alpha=float(rng.choice([0.0, 1.0, rng.random()])))
    return segments, nodes, config


def brute_force_select(segments, nodes, config):
    """Independent evaluation of the guard, delay sums and score table."""
    local = next(n for n in nodes if n.kind is NodeKind.LOCAL)
    if segments.d_5g > config.delta_max:
        return local.id

    totals = {}
    for n in nodes:
        total = n.processing_delay
        if n.kind is not NodeKind.LOCAL:
            total += segments.d_5g
        if n.kind is NodeKind.EDGE:
            total = segments.d_5g + segments.d_edge[n.index] + n.processing_delay
        totals[n.id] = total
    t_max = max(totals.values())

    best = None
    for n in sorted(nodes, key=lambda n: (PRIORITY[n.kind], n.index or 0)):
        norm = totals[n.id] / t_max if t_max > 0 else 0.0
        s = config.alpha * norm + (1 - config.alpha) * (1 - n.reliability)
        if best is None or s < best[0]:
            best = (s, n.id)
    return best[1]


# -----------------------------
# Delay composition
# -----------------------------

def test_compose_delays_by_substitution(nodes):
    totals = compose_delays(SegmentDelays.of(0.01, (0.005, 0.01, 0.02)), nodes)

    assert totals == pytest.approx({"local": 0.0, "near": 0.01, "edge1": 0.015, "edge2": 0.02, "edge3": 0.03})


def test_zero_segments_leave_processing_delay():
    nodes = [
        CandidateNode.new("local", "local", 0.2),
        CandidateNode.new("near", "near", 0.05),
        CandidateNode.new("e1", "edge", 0.01, index=1),
    ]
    assert compose_delays(SegmentDelays.of(0.0, (0.0,)), nodes) == {"local": 0.2, "near": 0.05, "e1": 0.01}


def test_compose_delays_errors(nodes):
    with pytest.raises(MissingSegmentError, match="edge3"):
        compose_delays(SegmentDelays.of(0.01, (0.005, 0.01)), nodes)
    with pytest.raises(SelectionError):
        compose_delays(SegmentDelays.of(0.01), [])


# -----------------------------
# Selection
# -----------------------------

def test_guard_returns_local_without_scoring(nodes):
    config = selection_config(delta_max=0.05)

    decision = select_node(SegmentDelays.of(0.1, (0, 0, 0)), nodes, config)

    assert decision.selected_id == "local"
    assert decision.fallback is True
    assert decision.score is None and decision.scores == {}


def test_guard_dominates_every_configuration():
    rng = np.random.default_rng(1)
    for _ in range(500):
        segments, nodes, config = random_case(rng)
        guarded = SegmentDelays(d_5g=config.delta_max * 1.5, d_edge=segments.d_edge)
        assert select_node(guarded, nodes, config).selected_id == "local"


def test_alpha_one_picks_smallest_delay():
    nodes = [
        CandidateNode.new("local", "local", 0.3, reliability=1.0),
        CandidateNode.new("near", "near", 0.2, reliability=0.0),
        CandidateNode.new("edge1", "edge", 0.01, reliability=0.1, index=1),
    ]
    decision = select_node(SegmentDelays.of(0.02, (0.03,)), nodes, selection_config(1.0, alpha=1.0))

    assert decision.selected_id == "edge1"
    assert decision.total_delay == pytest.approx(0.06)


def test_alpha_zero_picks_most_reliable():
    nodes = [
        CandidateNode.new("local", "local", 5.0, reliability=0.6),
        CandidateNode.new("near", "near", 0.0, reliability=0.5),
        CandidateNode.new("edge1", "edge", 0.0, reliability=0.9, index=1),
    ]
    decision = select_node(SegmentDelays.of(0.02, (3.0,)), nodes, selection_config(1.0, alpha=0.0))

    assert decision.selected_id == "edge1"


def test_exact_tie_goes_to_higher_priority():
    """
    T = (1, 2), R = (0.5, 1.0), alpha 0.5: both scores are exactly 0.5.
    """
    nodes = [
        CandidateNode.new("near", "near", 1.0, reliability=1.0),
        CandidateNode.new("local", "local", 1.0, reliability=0.5),
    ]
    decision = select_node(SegmentDelays.of(1.0), nodes, selection_config(delta_max=5.0, alpha=0.5))

    assert decision.scores == {"near": 0.5, "local": 0.5}
    assert decision.selected_id == "local"


def test_all_zero_delays_fall_back_to_reliability():
    nodes = [
        CandidateNode.new("local", "local", 0.0, reliability=0.7),
        CandidateNode.new("near", "near", 0.0, reliability=0.8),
    ]
    decision = select_node(SegmentDelays.of(0.0), nodes, selection_config(delta_max=0.1))

    assert decision.selected_id == "near"
    assert decision.scores["near"] == pytest.approx(0.1)


def test_matches_brute_force_enumeration():
    """
    10^4 randomized configurations, guard and ties included.
    """
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        segments, nodes, config = random_case(rng)

        decision = select_node(segments, nodes, config)

        assert decision.selected_id == brute_force_select(segments, nodes, config)
        if not decision.fallback:
            assert set(decision.scores) == {n.id for n in nodes}
            assert decision.score == min(decision.scores.values())


def test_common_delay_scale_does_not_change_selection():
    rng = np.random.default_rng(8)
    for _ in range(300):
        segments, nodes, config = random_case(rng)
        config = SelectionConfig(delta_max=10.0, alpha=config.alpha)
        k = float(rng.uniform(0.1, 10.0))

        scaled_nodes = [
            CandidateNode.new(n.id, n.kind, n.processing_delay * k, n.reliability, n.index) for n in nodes
        ]
        scaled = SegmentDelays(d_5g=segments.d_5g * k, d_edge={i: v * k for i, v in segments.d_edge.items()})

        before = select_node(segments, nodes, config)
        after = select_node(scaled, scaled_nodes, config)
        # Rounding can split an exact tie; compare scores of the two picks instead.
        assert after.scores[before.selected_id] == pytest.approx(after.score, abs=1e-12)


def test_faster_winner_keeps_winning():
    """
    Lowering the chosen node's processing delay only lowers its own score
    and can only raise the others (T_max never grows).
    """
    rng = np.random.default_rng(17)
    checked = 0
    for _ in range(2000):
        segments, nodes, config = random_case(rng)
        config = SelectionConfig(delta_max=10.0, alpha=config.alpha)
        before = select_node(segments, nodes, config)
        winner = next(n for n in nodes if n.id == before.selected_id)
        if winner.processing_delay == 0:
            continue

        faster = float(rng.uniform(0.0, 1.0)) * winner.processing_delay
        changed = [
            CandidateNode.new(n.id, n.kind, faster, n.reliability, n.index) if n.id == winner.id else n
            for n in nodes
        ]
        after = select_node(segments, changed, config)

        # 1. The old winner still has the minimum score (a new pick can only be an exact tie).
        assert after.scores[winner.id] == pytest.approx(after.score, abs=1e-12)
        # 2. Its own score did not go up.
        assert after.scores[winner.id] <= before.score + 1e-12
        checked += 1

    assert checked > 500


def test_equal_reliability_reduces_to_delay_argmin():
    rng = np.random.default_rng(3)
    for _ in range(300):
        segments, nodes, config = random_case(rng)
        nodes = [CandidateNode.new(n.id, n.kind, n.processing_delay, 0.9, n.index) for n in nodes]
        config = SelectionConfig(delta_max=10.0, alpha=max(config.alpha, 0.1))

        decision = select_node(segments, nodes, config)

        assert decision.total_delay == min(decision.delays.values())


def test_candidate_set_validation(nodes):
    config = selection_config(0.1)
    segments = SegmentDelays.of(0.01, (0.01, 0.01, 0.01))

    with pytest.raises(SelectionError):
        select_node(segments, [], config)
    with pytest.raises(SelectionError, match="LOCAL"):
        select_node(segments, nodes[1:], config)
    with pytest.raises(SelectionError, match="LOCAL"):
        select_node(segments, nodes + [CandidateNode.new("local2", "local")], config)
    with pytest.raises(SelectionError, match="duplicate"):
        select_node(segments, nodes + [CandidateNode.new("near", "near")], config)


def test_invalid_inputs():
    with pytest.raises(SelectionError):
        CandidateNode.new("n", "near", reliability=1.5)
    with pytest.raises(SelectionError):
        CandidateNode.new("e", "edge")
    with pytest.raises(SelectionError):
        CandidateNode.new("x", "satellite")
    with pytest.raises(SelectionError):
        SegmentDelays.of(-0.01)
    with pytest.raises(ValueError):
        selection_config(delta_max=0.0)
    with pytest.raises(ValueError):
        selection_config(delta_max=0.1, alpha=1.5)
