"""Registry of graph invariants and deadline-aware computation.

Every invariant is computed through :func:`compute`, which returns a
status-tagged :class:`InvariantValue`. Mathematically undefined cases (the
diameter of a disconnected graph, the girth of a forest) are Undefined,
never infinite; deadline expiry is TimedOut, never a wrong value.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Union

from . import canon, subiso
from .graphs import Graph, complement
from .timing import Deadline, DeadlineExceeded, as_deadline

DEFAULT_DEADLINE_SECONDS = 300.0

UNSUPPORTED_INVARIANT_IDS = ("genus", "treewidth")


class UnknownInvariant(Exception):
    pass


class Kind(str, Enum):
    INTEGER = "integer"
    RATIONAL = "rational"
    BOOLEAN = "boolean"


class Hardness(str, Enum):
    POLYNOMIAL = "polynomial"
    EXPONENTIAL = "exponential"


class Status(str, Enum):
    COMPUTED = "computed"
    UNDEFINED = "undefined"
    TIMED_OUT = "timed_out"
    PENDING = "pending"
    FAILED = "failed"


Value = Union[int, bool, Fraction]


@dataclass(frozen=True)
class InvariantValue:
    status: Status
    value: Optional[Value] = None

    @classmethod
    def computed(cls, value: Value) -> "InvariantValue":
        return cls(Status.COMPUTED, value)

    @classmethod
    def undefined(cls) -> "InvariantValue":
        return cls(Status.UNDEFINED)

    @classmethod
    def timed_out(cls) -> "InvariantValue":
        return cls(Status.TIMED_OUT)

    @classmethod
    def pending(cls) -> "InvariantValue":
        return cls(Status.PENDING)

    @classmethod
    def failed(cls) -> "InvariantValue":
        return cls(Status.FAILED)


@dataclass(frozen=True)
class InvariantDescriptor:
    id: str
    display_name: str
    kind: Kind
    hardness: Hardness


_SOLVERS: Dict[str, Callable[[Graph, Deadline], Optional[Value]]] = {}
_DESCRIPTORS: Dict[str, InvariantDescriptor] = {}
_EXTENDED: set = set()


def _register(inv_id: str, name: str, kind: Kind, hardness: Hardness, extended: bool = False):
    def wrap(solver):
        _DESCRIPTORS[inv_id] = InvariantDescriptor(inv_id, name, kind, hardness)
        _SOLVERS[inv_id] = solver
        if extended:
            _EXTENDED.add(inv_id)
        return solver

    return wrap


def registry(include_extended: bool = False) -> List[InvariantDescriptor]:
    """The fixed invariant set in stable id order."""
    return [
        _DESCRIPTORS[i]
        for i in sorted(_DESCRIPTORS)
        if include_extended or i not in _EXTENDED
    ]


def descriptor(inv_id: str) -> InvariantDescriptor:
    try:
        return _DESCRIPTORS[inv_id]
    except KeyError:
        if inv_id in UNSUPPORTED_INVARIANT_IDS:
            raise UnknownInvariant(f"{inv_id} is a recorded but unsupported invariant") from None
        raise UnknownInvariant(inv_id) from None


def compute(inv_id: str, g: Graph, deadline=None) -> InvariantValue:
    """Compute one invariant under a cooperative deadline."""
    descriptor(inv_id)
    dl = as_deadline(DEFAULT_DEADLINE_SECONDS if deadline is None else deadline)
    try:
        value = _SOLVERS[inv_id](g, dl)
    except DeadlineExceeded:
        return InvariantValue.timed_out()
    if value is None:
        return InvariantValue.undefined()
    return InvariantValue.computed(value)


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------


def _bfs_dists(g: Graph, src: int) -> List[int]:
    dist = [-1] * g.order
    dist[src] = 0
    queue = deque([src])
    rows = g.rows
    while queue:
        u = queue.popleft()
        row = rows[u]
        while row:
            low = row & -row
            v = low.bit_length() - 1
            row ^= low
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _component_count(g: Graph) -> int:
    seen = 0
    count = 0
    for v in range(g.order):
        if not (seen >> v & 1):
            count += 1
            stack = [v]
            seen |= 1 << v
            while stack:
                u = stack.pop()
                row = g.rows[u] & ~seen
                while row:
                    low = row & -row
                    w = low.bit_length() - 1
                    row ^= low
                    seen |= low
                    stack.append(w)
    return count


# ---------------------------------------------------------------------------
# Polynomial invariants
# ---------------------------------------------------------------------------


@_register("number_of_vertices", "Number of vertices", Kind.INTEGER, Hardness.POLYNOMIAL)
def _number_of_vertices(g, dl):
    return g.order


@_register("number_of_edges", "Number of edges", Kind.INTEGER, Hardness.POLYNOMIAL)
def _number_of_edges(g, dl):
    return g.num_edges()


@_register("minimum_degree", "Minimum degree", Kind.INTEGER, Hardness.POLYNOMIAL)
def _minimum_degree(g, dl):
    return min(g.degrees())


@_register("maximum_degree", "Maximum degree", Kind.INTEGER, Hardness.POLYNOMIAL)
def _maximum_degree(g, dl):
    return max(g.degrees())


@_register("average_degree", "Average degree", Kind.RATIONAL, Hardness.POLYNOMIAL)
def _average_degree(g, dl):
    return Fraction(2 * g.num_edges(), g.order)


@_register("is_regular", "Regular", Kind.BOOLEAN, Hardness.POLYNOMIAL)
def _is_regular(g, dl):
    degs = g.degrees()
    return min(degs) == max(degs)


@_register("is_connected", "Connected", Kind.BOOLEAN, Hardness.POLYNOMIAL)
def _is_connected(g, dl):
    return _component_count(g) == 1


@_register("number_of_components", "Number of components", Kind.INTEGER, Hardness.POLYNOMIAL)
def _number_of_components(g, dl):
    return _component_count(g)


@_register("is_bipartite", "Bipartite", Kind.BOOLEAN, Hardness.POLYNOMIAL)
def _is_bipartite(g, dl):
    side = [-1] * g.order
    for s in range(g.order):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            row = g.rows[u]
            while row:
                low = row & -row
                v = low.bit_length() - 1
                row ^= low
                if side[v] < 0:
                    side[v] = side[u] ^ 1
                    queue.append(v)
                elif side[v] == side[u]:
                    return False
    return True


@_register("diameter", "Diameter", Kind.INTEGER, Hardness.POLYNOMIAL)
def _diameter(g, dl):
    worst = 0
    for v in range(g.order):
        dl.check()
        dist = _bfs_dists(g, v)
        far = max(dist)
        if min(dist) < 0:
            return None  # disconnected
        worst = max(worst, far)
    return worst


@_register("radius", "Radius", Kind.INTEGER, Hardness.POLYNOMIAL)
def _radius(g, dl):
    best = None
    for v in range(g.order):
        dl.check()
        dist = _bfs_dists(g, v)
        if min(dist) < 0:
            return None
        ecc = max(dist)
        best = ecc if best is None else min(best, ecc)
    return best


@_register("girth", "Girth", Kind.INTEGER, Hardness.POLYNOMIAL)
def _girth(g, dl):
    best = None
    for root in range(g.order):
        dl.check()
        dist = [-1] * g.order
        parent = [-1] * g.order
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            row = g.rows[u]
            while row:
                low = row & -row
                v = low.bit_length() - 1
                row ^= low
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif v != parent[u]:
                    cyc = dist[u] + dist[v] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


@_register("number_of_triangles", "Number of triangles", Kind.INTEGER, Hardness.POLYNOMIAL)
def _number_of_triangles(g, dl):
    total = 0
    for u, v in g.edges():
        total += (g.rows[u] & g.rows[v]).bit_count()
    return total // 3


@_register("is_eulerian", "Eulerian", Kind.BOOLEAN, Hardness.POLYNOMIAL)
def _is_eulerian(g, dl):
    if any(d % 2 for d in g.degrees()):
        return False
    # at most one component may contain edges
    seen = 0
    edged_components = 0
    for v in range(g.order):
        if not (seen >> v & 1):
            stack = [v]
            seen |= 1 << v
            has_edge = False
            while stack:
                u = stack.pop()
                if g.rows[u]:
                    has_edge = True
                row = g.rows[u] & ~seen
                while row:
                    low = row & -row
                    seen |= low
                    stack.append(low.bit_length() - 1)
                    row ^= low
            if has_edge:
                edged_components += 1
    return edged_components <= 1


@_register("is_claw_free", "Claw-free", Kind.BOOLEAN, Hardness.POLYNOMIAL)
def _is_claw_free(g, dl):
    claw = Graph(4, [0b1110, 0b0001, 0b0001, 0b0001])
    outcome = subiso.find_embedding(claw, g, subiso.Mode.INDUCED, dl)
    if outcome.status is subiso.MatchStatus.TIMED_OUT:
        raise DeadlineExceeded()
    return outcome.status is subiso.MatchStatus.NOT_FOUND


# ---------------------------------------------------------------------------
# Connectivity via unit-capacity max-flow
# ---------------------------------------------------------------------------


def _max_flow(n: int, arcs: Dict[int, Dict[int, int]], s: int, t: int, dl: Deadline) -> int:
    flow = 0
    while True:
        dl.check()
        prev = {s: -1}
        queue = deque([s])
        while queue and t not in prev:
            u = queue.popleft()
            for v, cap in arcs[u].items():
                if cap > 0 and v not in prev:
                    prev[v] = u
                    queue.append(v)
        if t not in prev:
            return flow
        v = t
        while v != s:
            u = prev[v]
            arcs[u][v] -= 1
            arcs[v][u] = arcs[v].get(u, 0) + 1
            v = u
        flow += 1


@_register("edge_connectivity", "Edge connectivity", Kind.INTEGER, Hardness.POLYNOMIAL)
def _edge_connectivity(g, dl):
    n = g.order
    if n == 1:
        return 0
    if _component_count(g) > 1:
        return 0
    best = None
    for t in range(1, n):
        arcs: Dict[int, Dict[int, int]] = {v: {} for v in range(n)}
        for u, v in g.edges():
            arcs[u][v] = 1
            arcs[v][u] = 1
        f = _max_flow(n, arcs, 0, t, dl)
        best = f if best is None else min(best, f)
    return best


@_register("vertex_connectivity", "Vertex connectivity", Kind.INTEGER, Hardness.POLYNOMIAL)
def _vertex_connectivity(g, dl):
    n = g.order
    if n == 1:
        return 0
    if all(g.has_edge(u, v) for u in range(n) for v in range(u + 1, n)):
        return n - 1
    if _component_count(g) > 1:
        return 0
    # vertex splitting: v_in = 2v, v_out = 2v+1, internal capacity 1
    best = n - 1
    for s in range(n):
        for t in range(s + 1, n):
            if g.has_edge(s, t):
                continue
            arcs: Dict[int, Dict[int, int]] = {x: {} for x in range(2 * n)}
            for v in range(n):
                arcs[2 * v][2 * v + 1] = n if v in (s, t) else 1
            for u, v in g.edges():
                arcs[2 * u + 1][2 * v] = n
                arcs[2 * v + 1][2 * u] = n
            best = min(best, _max_flow(2 * n, arcs, 2 * s + 1, 2 * t, dl))
    return best


# ---------------------------------------------------------------------------
# Exponential invariants
# ---------------------------------------------------------------------------


@_register("clique_number", "Clique number", Kind.INTEGER, Hardness.EXPONENTIAL)
def _clique_number(g, dl):
    rows = g.rows
    best = 0
    nodes = 0

    def expand(cand: int, size: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes & 0x3FF == 0:
            dl.check()
        if cand == 0:
            if size > best:
                best = size
            return
        # greedy coloring of the candidate set: color count bounds clique growth
        order = []
        uncolored = cand
        color = 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                order.append((v, color))
                uncolored ^= low
                avail = avail & ~rows[v] & ~low & uncolored
        sub = cand
        for v, c in reversed(order):
            if size + c <= best:
                return
            expand(sub & rows[v], size + 1)
            sub &= ~(1 << v)

    expand((1 << g.order) - 1, 0)
    return best


@_register("independence_number", "Independence number", Kind.INTEGER, Hardness.EXPONENTIAL)
def _independence_number(g, dl):
    return _clique_number(complement(g), dl)


def _greedy_coloring_bound(g: Graph) -> int:
    order = sorted(range(g.order), key=lambda v: -g.degree(v))
    colors = {}
    used = 0
    for v in order:
        taken = {colors[u] for u in g.neighbors(v) if u in colors}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
        used = max(used, c + 1)
    return used


def _greedy_clique_bound(g: Graph) -> int:
    cand = (1 << g.order) - 1
    size = 0
    rows = g.rows
    while cand:
        best_v, best_d = -1, -1
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            d = (rows[v] & cand).bit_count()
            if d > best_d:
                best_v, best_d = v, d
        size += 1
        cand &= rows[best_v]
    return size


@_register("chromatic_number", "Chromatic number", Kind.INTEGER, Hardness.EXPONENTIAL)
def _chromatic_number(g, dl):
    n = g.order
    if g.num_edges() == 0:
        return 1
    lower = _greedy_clique_bound(g)
    best = _greedy_coloring_bound(g)
    if lower == best:
        return best
    rows = g.rows
    colors = [-1] * n
    nodes = 0

    def saturation_pick() -> int:
        pick, pick_sat, pick_deg = -1, -1, -1
        for v in range(n):
            if colors[v] >= 0:
                continue
            sat = len({colors[u] for u in g.neighbors(v) if colors[u] >= 0})
            deg = rows[v].bit_count()
            if sat > pick_sat or (sat == pick_sat and deg > pick_deg):
                pick, pick_sat, pick_deg = v, sat, deg
        return pick

    def backtrack(colored: int, used: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes & 0xFF == 0:
            dl.check()
        if used >= best or best == lower:
            return
        if colored == n:
            best = used
            return
        v = saturation_pick()
        taken = {colors[u] for u in g.neighbors(v) if colors[u] >= 0}
        for c in range(used):
            if c not in taken:
                colors[v] = c
                backtrack(colored + 1, used)
                colors[v] = -1
        if used + 1 < best:
            colors[v] = used
            backtrack(colored + 1, used + 1)
            colors[v] = -1

    backtrack(0, 0)
    return best


@_register("chromatic_index", "Chromatic index", Kind.INTEGER, Hardness.EXPONENTIAL)
def _chromatic_index(g, dl):
    """Vizing dichotomy: max degree if the edges are max-degree-colorable, else +1."""
    edges = list(g.edges())
    m = len(edges)
    if m == 0:
        return 0
    delta = max(g.degrees())
    vertex_used = [0] * g.order  # bitmask of colors present at each vertex
    assigned = [-1] * m
    full = (1 << delta) - 1
    nodes = 0

    def pick_edge() -> int:
        pick, pick_avail = -1, delta + 1
        for i in range(m):
            if assigned[i] >= 0:
                continue
            u, v = edges[i]
            avail = (full & ~vertex_used[u] & ~vertex_used[v]).bit_count()
            if avail < pick_avail:
                pick, pick_avail = i, avail
                if avail == 0:
                    break
        return pick

    def color_edges(done: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes & 0xFF == 0:
            dl.check()
        if done == m:
            return True
        i = pick_edge()
        u, v = edges[i]
        avail = full & ~vertex_used[u] & ~vertex_used[v]
        while avail:
            low = avail & -avail
            avail ^= low
            assigned[i] = low.bit_length() - 1
            vertex_used[u] |= low
            vertex_used[v] |= low
            if color_edges(done + 1):
                return True
            assigned[i] = -1
            vertex_used[u] ^= low
            vertex_used[v] ^= low
        return False

    return delta if color_edges(0) else delta + 1


@_register("is_hamiltonian", "Hamiltonian", Kind.BOOLEAN, Hardness.EXPONENTIAL)
def _is_hamiltonian(g, dl):
    n = g.order
    if n < 3:
        return False
    if any(d < 2 for d in g.degrees()):
        return False
    if _component_count(g) > 1:
        return False
    rows = g.rows
    all_mask = (1 << n) - 1
    nodes = 0

    def extend(current: int, visited: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes & 0x3FF == 0:
            dl.check()
        if visited == all_mask:
            return bool(rows[current] & 1)  # close the cycle at vertex 0
        row = rows[current] & ~visited
        while row:
            low = row & -row
            row ^= low
            w = low.bit_length() - 1
            # a non-final unvisited vertex with no remaining exit is a dead end
            if extend(w, visited | low):
                return True
        return False

    return extend(0, 1)


@_register("automorphism_group_order", "Automorphism group order", Kind.INTEGER, Hardness.EXPONENTIAL)
def _automorphism_group_order(g, dl):
    return canon.canonical_form(g, dl).automorphism_group_order


@_register("circumference", "Circumference", Kind.INTEGER, Hardness.EXPONENTIAL, extended=True)
def _circumference(g, dl):
    """Longest cycle length; Undefined for forests."""
    n = g.order
    rows = g.rows
    best = 0
    nodes = 0

    def extend(start: int, current: int, visited: int, length: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes & 0x3FF == 0:
            dl.check()
        if length + (n - visited.bit_count()) <= best:
            return
        row = rows[current]
        if length >= 3 and row >> start & 1 and length > best:
            best = length
        row &= ~visited
        while row:
            low = row & -row
            row ^= low
            w = low.bit_length() - 1
            if w > start:  # each cycle is rooted at its minimum vertex
                extend(start, w, visited | low, length + 1)

    for s in range(n):
        extend(s, s, 1 << s, 1)
    return best if best >= 3 else None


@_register("matching_number", "Matching number", Kind.INTEGER, Hardness.EXPONENTIAL, extended=True)
def _matching_number(g, dl):
    edges = list(g.edges())
    m = len(edges)
    best = 0
    nodes = 0

    def choose(i: int, used: int, size: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes & 0x3FF == 0:
            dl.check()
        if size > best:
            best = size
        if i == m or size + (m - i) <= best:
            return
        u, v = edges[i]
        if not (used >> u & 1 or used >> v & 1):
            choose(i + 1, used | 1 << u | 1 << v, size + 1)
        choose(i + 1, used, size)

    choose(0, 0, 0)
    return best
