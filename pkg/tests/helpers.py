"""Shared graph builders and enumeration utilities for the test suite."""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, List, Tuple

from graphhaus.graphs import Graph, new_graph


def complete_graph(n: int) -> Graph:
    return new_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def empty_graph(n: int) -> Graph:
    return new_graph(n, [])


def path_graph(n: int) -> Graph:
    return new_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return new_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return new_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    # Kneser K(5,2): 2-subsets of {0..4}, adjacent iff disjoint
    subsets = list(combinations(range(5), 2))
    edges = [
        (a, b)
        for a in range(10)
        for b in range(a + 1, 10)
        if not set(subsets[a]) & set(subsets[b])
    ]
    return new_graph(10, edges)


def petersen_classic() -> Graph:
    # outer 5-cycle, inner pentagram, spokes: a different labelling entirely
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, 5 + i) for i in range(5)]
    return new_graph(10, edges)


def frucht_graph() -> Graph:
    # cubic, 12 vertices, trivial automorphism group; LCF notation
    lcf = [-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2]
    edges = [(i, (i + 1) % 12) for i in range(12)]
    edges += [(i, (i + lcf[i]) % 12) for i in range(12)]
    return new_graph(12, edges)


def vertex_pairs(n: int) -> List[Tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def all_labelled_graphs(n: int) -> Iterator[Graph]:
    """Every labelled simple graph on n vertices, by edge-set bitmask order."""
    pairs = vertex_pairs(n)
    for mask in range(1 << len(pairs)):
        yield new_graph(n, [pairs[k] for k in range(len(pairs)) if mask >> k & 1])


def random_graph(rng, order: int, p: float = 0.5) -> Graph:
    return new_graph(
        order,
        [(u, v) for u in range(order) for v in range(u + 1, order) if rng.random() < p],
    )


def iso_class_representatives(n: int) -> List[Graph]:
    """One representative per isomorphism class on n vertices."""
    from graphhaus import canon

    reps: dict = {}
    for g in all_labelled_graphs(n):
        key = canon.canonical_key(g).key
        if key not in reps:
            reps[key] = g
    return list(reps.values())


def mycielskian(g: Graph) -> Graph:
    """M(G): triangle-free preserving, chromatic number grows by one."""
    n = g.order
    edges = list(g.edges())
    out = list(edges)
    for u, v in edges:
        out.append((u, n + v))
        out.append((v, n + u))
    w = 2 * n
    out.extend((n + i, w) for i in range(n))
    return new_graph(2 * n + 1, out)


def hard_coloring_instance() -> Graph:
    """Iterated Mycielskian of K2: 47 vertices, triangle-free, chromatic 6.

    The clique bound stays at 2 while the true chromatic number is 6, so
    exact branch-and-bound cannot close the gap quickly; a millisecond
    deadline always fires first.
    """
    g = complete_graph(2)
    for _ in range(4):
        g = mycielskian(g)
    return g
