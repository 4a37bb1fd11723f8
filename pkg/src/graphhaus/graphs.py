"""Graph representation, text codecs, derived graphs, and layout generation.

Graphs are simple, undirected, unweighted, on 1..250 vertices. Adjacency is
kept as one integer bitmask per vertex so the hot kernels (triangle counts,
partition refinement, VF2) reduce to word operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

MAX_ORDER = 250


class GraphError(Exception):
    """Base class for graph construction and codec errors."""


class OrderOutOfRange(GraphError):
    pass


class LoopRejected(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class MalformedHeader(GraphError):
    pass


class TruncatedBody(GraphError):
    pass


class TrailingData(GraphError):
    pass


class NonzeroPadding(GraphError):
    pass


class InvalidByte(GraphError):
    pass


class NotSquare(GraphError):
    pass


class NotSymmetric(GraphError):
    pass


class NonzeroDiagonal(GraphError):
    pass


class ParseError(GraphError):
    pass


class Graph:
    """Immutable simple undirected graph with bitmask adjacency rows.

    ``rows[v]`` has bit ``u`` set iff the edge (u, v) is present. Rows are
    symmetric and have zero diagonal by construction.
    """

    __slots__ = ("order", "rows")

    def __init__(self, order: int, rows: Sequence[int]):
        self.order = order
        self.rows = tuple(rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.order == other.order
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.order, self.rows))

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.num_edges()})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> List[int]:
        return [r.bit_count() for r in self.rows]

    def neighbors(self, v: int) -> Iterator[int]:
        row = self.rows[v]
        while row:
            low = row & -row
            yield low.bit_length() - 1
            row ^= low

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges as (u, v) with u < v, in sorted order."""
        for u in range(self.order):
            row = self.rows[u] >> (u + 1) << (u + 1)
            while row:
                low = row & -row
                yield (u, low.bit_length() - 1)
                row ^= low

    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2


def new_graph(order: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    """Build a graph from an explicit order and edge pairs.

    Duplicate pairs collapse; (u, u) pairs are rejected.
    """
    if order < 1 or order > MAX_ORDER:
        raise OrderOutOfRange(f"order must be in 1..{MAX_ORDER}, got {order}")
    rows = [0] * order
    for u, v in edges:
        if u == v:
            raise LoopRejected(f"loop at vertex {u}")
        if not (0 <= u < order and 0 <= v < order):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{order - 1}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(order, rows)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Apply a permutation: vertex v of g becomes perm[v] in the result."""
    rows = [0] * g.order
    for u, v in g.edges():
        pu, pv = perm[u], perm[v]
        rows[pu] |= 1 << pv
        rows[pv] |= 1 << pu
    return Graph(g.order, rows)


# ---------------------------------------------------------------------------
# graph6 codec
#
# Header N(n): one byte n+63 for n <= 62; byte 126 ('~') followed by three
# bytes encoding n in 6-bit big-endian chunks (each +63) for 63 <= n <= 250.
# Body: upper-triangle bits x(i,j) in column order (j = 1..n-1, i = 0..j-1)
# packed into 6-bit groups, zero-padded, each +63.
# ---------------------------------------------------------------------------


# 6-bit group <-> printable character lookup tables
_CHUNK_TO_CHAR = {format(v, "06b"): chr(v + 63) for v in range(64)}
_BYTE_TO_BITS = {b: format(b - 63, "06b") for b in range(63, 127)}


def _upper_triangle_string(g: Graph) -> str:
    """Bits x(i,j) in column order; column j is the low j bits of row j reversed."""
    rows = g.rows
    return "".join(
        format(rows[j] & ((1 << j) - 1), f"0{j}b")[::-1] for j in range(1, g.order)
    )


def to_graph6(g: Graph) -> str:
    n = g.order
    if n <= 62:
        header = chr(n + 63)
    else:
        header = "~" + chr((n >> 12) + 63) + chr(((n >> 6) & 63) + 63) + chr((n & 63) + 63)
    bits = _upper_triangle_string(g)
    bits += "0" * (-len(bits) % 6)
    return header + "".join(_CHUNK_TO_CHAR[bits[k : k + 6]] for k in range(0, len(bits), 6))


def from_graph6(text: str) -> Graph:
    for c in text:
        if not 63 <= ord(c) <= 126:
            raise InvalidByte(f"byte {ord(c)} outside graph6 range 63..126")
    if not text:
        raise MalformedHeader("empty input")
    if text[0] == "~":
        if len(text) < 4:
            raise MalformedHeader("long-form header needs three size bytes")
        n = (ord(text[1]) - 63) << 12 | (ord(text[2]) - 63) << 6 | (ord(text[3]) - 63)
        body = text[4:]
    else:
        n = ord(text[0]) - 63
        body = text[1:]
    if n < 1 or n > MAX_ORDER:
        raise OrderOutOfRange(f"decoded order {n} outside 1..{MAX_ORDER}")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) < need:
        raise TruncatedBody(f"need {need} body bytes, got {len(body)}")
    if len(body) > need:
        raise TrailingData(f"{len(body) - need} extra bytes after body")
    bits = "".join(_BYTE_TO_BITS[ord(c)] for c in body)
    if "1" in bits[nbits:]:
        raise NonzeroPadding("padding bits must be zero")
    rows = [0] * n
    offset = 0
    for j in range(1, n):
        column = bits[offset : offset + j]
        offset += j
        if "1" in column:
            low = int(column[::-1], 2)
            rows[j] |= low
            bit_j = 1 << j
            while low:
                lowest = low & -low
                rows[lowest.bit_length() - 1] |= bit_j
                low ^= lowest
    return Graph(n, rows)


# ---------------------------------------------------------------------------
# Adjacency-matrix and edge-list formats
# ---------------------------------------------------------------------------


def from_adjacency_matrix(text: str) -> Graph:
    """Parse n lines of n whitespace-optional 0/1 entries."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    rows_bits: List[List[int]] = []
    for ln in lines:
        entries = []
        for ch in ln:
            if ch in "01":
                entries.append(int(ch))
            elif not ch.isspace():
                raise ParseError(f"invalid matrix character {ch!r}")
        rows_bits.append(entries)
    n = len(rows_bits)
    if n < 1 or n > MAX_ORDER:
        raise OrderOutOfRange(f"matrix order {n} outside 1..{MAX_ORDER}")
    if any(len(r) != n for r in rows_bits):
        raise NotSquare("matrix rows must all have length equal to the row count")
    for i in range(n):
        if rows_bits[i][i]:
            raise NonzeroDiagonal(f"nonzero diagonal at {i}")
        for j in range(i + 1, n):
            if rows_bits[i][j] != rows_bits[j][i]:
                raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
    rows = [0] * n
    for i in range(n):
        for j in range(n):
            if rows_bits[i][j]:
                rows[i] |= 1 << j
    return Graph(n, rows)


def to_adjacency_matrix(g: Graph) -> str:
    return "\n".join(
        " ".join("1" if g.has_edge(i, j) else "0" for j in range(g.order))
        for i in range(g.order)
    )


def from_edge_list(text: str) -> Graph:
    """Parse lines "u v" of 0-based endpoints.

    Order is max endpoint + 1 unless an explicit first line "n=<k>" is given.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    declared = None
    if lines and lines[0].startswith("n="):
        try:
            declared = int(lines[0][2:])
        except ValueError:
            raise ParseError(f"bad order declaration {lines[0]!r}") from None
        lines = lines[1:]
    edges = []
    for ln in lines:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {ln!r}") from None
        if u < 0 or v < 0:
            raise ParseError(f"negative endpoint in {ln!r}")
        edges.append((u, v))
    if declared is not None:
        order = declared
    elif edges:
        order = max(max(u, v) for u, v in edges) + 1
    else:
        order = 0
    return new_graph(order, edges)


def to_edge_list(g: Graph) -> str:
    lines = [f"n={g.order}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Derived graphs
# ---------------------------------------------------------------------------


def complement(g: Graph) -> Graph:
    full = (1 << g.order) - 1
    rows = [(full ^ g.rows[v]) & ~(1 << v) for v in range(g.order)]
    return Graph(g.order, rows)


def line_graph(g: Graph) -> Graph:
    """One vertex per edge of g, adjacent iff the edges share an endpoint.

    Result vertices follow the sorted (min, max) edge order of g.
    """
    edge_list = list(g.edges())
    m = len(edge_list)
    if m < 1 or m > MAX_ORDER:
        raise OrderOutOfRange(f"line graph order {m} outside 1..{MAX_ORDER}")
    rows = [0] * m
    for a in range(m):
        ua, va = edge_list[a]
        for b in range(a + 1, m):
            ub, vb = edge_list[b]
            if ua == ub or ua == vb or va == ub or va == vb:
                rows[a] |= 1 << b
                rows[b] |= 1 << a
    return Graph(m, rows)


# ---------------------------------------------------------------------------
# Spring layout
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Per-vertex (x, y) positions, normalized into the unit square."""

    positions: Tuple[Tuple[float, float], ...]


def spring_layout(g: Graph, iterations: int = 50, seed: int = 0) -> Embedding:
    """Deterministic force-directed layout normalized into [0,1]^2.

    Fruchterman-Reingold style: all-pairs repulsion, attraction along edges,
    linear cooling. Identical inputs always give identical output.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    n = g.order
    if n == 1:
        return Embedding(((0.5, 0.5),))
    rng = random.Random(seed)
    xs = [rng.random() for _ in range(n)]
    ys = [rng.random() for _ in range(n)]
    k = (1.0 / n) ** 0.5
    edge_list = list(g.edges())
    for step in range(iterations):
        temp = 0.1 * (1.0 - step / iterations)
        dx = [0.0] * n
        dy = [0.0] * n
        for u in range(n):
            for v in range(u + 1, n):
                ex, ey = xs[u] - xs[v], ys[u] - ys[v]
                dist = (ex * ex + ey * ey) ** 0.5
                if dist < 1e-9:
                    # identical positions: seeded jitter keeps forces finite
                    ex, ey = rng.random() - 0.5, rng.random() - 0.5
                    dist = (ex * ex + ey * ey) ** 0.5
                rep = k * k / dist
                dx[u] += ex / dist * rep
                dy[u] += ey / dist * rep
                dx[v] -= ex / dist * rep
                dy[v] -= ey / dist * rep
        for u, v in edge_list:
            ex, ey = xs[u] - xs[v], ys[u] - ys[v]
            dist = (ex * ex + ey * ey) ** 0.5
            if dist < 1e-9:
                continue
            att = dist * dist / k
            dx[u] -= ex / dist * att
            dy[u] -= ey / dist * att
            dx[v] += ex / dist * att
            dy[v] += ey / dist * att
        for v in range(n):
            mag = (dx[v] * dx[v] + dy[v] * dy[v]) ** 0.5
            if mag > 1e-9:
                scale = min(mag, temp) / mag
                xs[v] += dx[v] * scale
                ys[v] += dy[v] * scale
    return Embedding(tuple(zip(_normalize(xs), _normalize(ys))))


def _normalize(coords: List[float]) -> List[float]:
    """Affine rescale into [0,1] with a 5% margin; degenerate axes center."""
    lo, hi = min(coords), max(coords)
    span = hi - lo
    if span < 1e-12:
        return [0.5] * len(coords)
    return [0.05 + 0.9 * (c - lo) / span for c in coords]
