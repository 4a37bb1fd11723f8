"""Subgraph-isomorphism search (VF2), induced and non-induced, with deadlines.

The search maps pattern vertices to target vertices one at a time. Candidate
targets are narrowed with bitmask intersections against the images of already
mapped pattern neighbors (and non-neighbors, in induced mode), then tried in
descending target-degree order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .graphs import Graph
from .timing import DeadlineExceeded, as_deadline

_CHECK_MASK = 0xFF  # deadline polled every 256 search nodes


class MatchStatus(str, Enum):
    FOUND = "found"
    NOT_FOUND = "not_found"
    TIMED_OUT = "timed_out"


class Mode(str, Enum):
    INDUCED = "induced"
    SUBGRAPH = "subgraph"


@dataclass(frozen=True)
class MatchOutcome:
    status: MatchStatus
    mapping: Optional[Tuple[int, ...]] = None  # pattern vertex -> target vertex


def verify_embedding(pattern: Graph, target: Graph, mapping: Tuple[int, ...], mode) -> bool:
    """Direct recheck that a mapping is a valid (induced) embedding."""
    mode = Mode(mode)
    if len(mapping) != pattern.order or len(set(mapping)) != pattern.order:
        return False
    for u in range(pattern.order):
        for v in range(u + 1, pattern.order):
            pe = pattern.has_edge(u, v)
            te = target.has_edge(mapping[u], mapping[v])
            if pe and not te:
                return False
            if mode is Mode.INDUCED and not pe and te:
                return False
    return True


def find_embedding(pattern: Graph, target: Graph, mode="induced", deadline=None) -> MatchOutcome:
    """First embedding of pattern into target, or NOT_FOUND after exhaustion.

    A pattern larger than the target is NOT_FOUND immediately, not an error.
    """
    mode = Mode(mode)
    dl = as_deadline(deadline)
    np_, nt = pattern.order, target.order
    if np_ > nt:
        return MatchOutcome(MatchStatus.NOT_FOUND)
    if mode is Mode.SUBGRAPH and pattern.num_edges() > target.num_edges():
        return MatchOutcome(MatchStatus.NOT_FOUND)

    induced = mode is Mode.INDUCED
    p_rows, t_rows = pattern.rows, target.rows
    p_deg = pattern.degrees()
    t_deg = target.degrees()
    t_all = (1 << nt) - 1
    # target vertices pre-sorted once; candidate loops preserve this order
    by_degree = sorted(range(nt), key=lambda v: (-t_deg[v], v))

    mapping = [-1] * np_
    mapped_p = 0  # bitmask of mapped pattern vertices
    used_t = 0  # bitmask of used target vertices
    nodes = 0

    def next_pattern_vertex() -> int:
        frontier = -1
        for v in range(np_):
            if mapped_p >> v & 1:
                continue
            if p_rows[v] & mapped_p:
                return v
            if frontier < 0:
                frontier = v
        return frontier

    def search(depth: int) -> bool:
        nonlocal mapped_p, used_t, nodes
        nodes += 1
        if nodes & _CHECK_MASK == 0:
            dl.check()
        if depth == np_:
            return True
        pv = next_pattern_vertex()
        cand = t_all & ~used_t
        rest = mapped_p
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            if p_rows[pv] >> u & 1:
                cand &= t_rows[mapping[u]]
            elif induced:
                cand &= ~t_rows[mapping[u]]
            if not cand:
                return False
        need = p_deg[pv]
        for tv in by_degree:
            if not (cand >> tv & 1) or t_deg[tv] < need:
                continue
            mapping[pv] = tv
            mapped_p |= 1 << pv
            used_t |= 1 << tv
            if search(depth + 1):
                return True
            mapping[pv] = -1
            mapped_p ^= 1 << pv
            used_t ^= 1 << tv
        return False

    try:
        found = search(0)
    except DeadlineExceeded:
        return MatchOutcome(MatchStatus.TIMED_OUT)
    if found:
        return MatchOutcome(MatchStatus.FOUND, tuple(mapping))
    return MatchOutcome(MatchStatus.NOT_FOUND)


def contains(pattern: Graph, target: Graph, mode="induced", deadline=None) -> str:
    """Tri-state containment: "yes", "no", or "unknown" on timeout."""
    outcome = find_embedding(pattern, target, mode, deadline)
    if outcome.status is MatchStatus.FOUND:
        return "yes"
    if outcome.status is MatchStatus.NOT_FOUND:
        return "no"
    return "unknown"
