"""Independent brute-force oracles.

Everything here is deliberately naive (exhaustive subsets, colorings,
permutations, Floyd-Warshall) and shares no code with the production
solvers it is used to check.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Optional

from graphhaus.graphs import Graph


def brute_canonical_string(g: Graph) -> int:
    """Global minimum of the column-order upper-triangle bits over all perms."""
    n = g.order
    best = None
    for perm in permutations(range(n)):
        bits = 0
        for j in range(1, n):
            for i in range(j):
                bits = bits << 1 | (1 if g.has_edge(perm[i], perm[j]) else 0)
        if best is None or bits < best:
            best = bits
    return best


def count_automorphisms(g: Graph) -> int:
    """Backtracking count of adjacency-preserving permutations."""
    n = g.order
    degrees = g.degrees()
    count = 0

    def extend(mapping, used):
        nonlocal count
        v = len(mapping)
        if v == n:
            count += 1
            return
        for w in range(n):
            if used >> w & 1 or degrees[w] != degrees[v]:
                continue
            if all(g.has_edge(u, v) == g.has_edge(mapping[u], w) for u in range(v)):
                mapping.append(w)
                extend(mapping, used | 1 << w)
                mapping.pop()

    extend([], 0)
    return count


def all_pairs_shortest(g: Graph):
    n = g.order
    inf = float("inf")
    dist = [[0 if i == j else (1 if g.has_edge(i, j) else inf) for j in range(n)] for i in range(n)]
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return dist


def oracle_diameter(g: Graph) -> Optional[int]:
    dist = all_pairs_shortest(g)
    worst = max(max(row) for row in dist)
    return None if worst == float("inf") else int(worst)


def oracle_radius(g: Graph) -> Optional[int]:
    dist = all_pairs_shortest(g)
    if any(max(row) == float("inf") for row in dist):
        return None
    return int(min(max(row) for row in dist))


def oracle_components(g: Graph) -> int:
    parent = list(range(g.order))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        parent[find(u)] = find(v)
    return len({find(v) for v in range(g.order)})


def _cycles_of_length(g: Graph, k: int):
    for subset in combinations(range(g.order), k):
        first = subset[0]
        for rest in permutations(subset[1:]):
            if rest[0] > rest[-1]:
                continue  # each cycle once per direction
            cyc = (first,) + rest
            if all(g.has_edge(cyc[i], cyc[(i + 1) % k]) for i in range(k)):
                yield cyc


def oracle_girth(g: Graph) -> Optional[int]:
    for k in range(3, g.order + 1):
        for _ in _cycles_of_length(g, k):
            return k
    return None


def oracle_circumference(g: Graph) -> Optional[int]:
    for k in range(g.order, 2, -1):
        for _ in _cycles_of_length(g, k):
            return k
    return None


def oracle_is_hamiltonian(g: Graph) -> bool:
    n = g.order
    if n < 3:
        return False
    for rest in permutations(range(1, n)):
        cyc = (0,) + rest
        if all(g.has_edge(cyc[i], cyc[(i + 1) % n]) for i in range(n)):
            return True
    return False


def oracle_clique_number(g: Graph) -> int:
    best = 0
    for k in range(g.order, 0, -1):
        for subset in combinations(range(g.order), k):
            if all(g.has_edge(u, v) for u, v in combinations(subset, 2)):
                return k
    return best


def oracle_independence_number(g: Graph) -> int:
    for k in range(g.order, 0, -1):
        for subset in combinations(range(g.order), k):
            if not any(g.has_edge(u, v) for u, v in combinations(subset, 2)):
                return k
    return 0


def oracle_chromatic_number(g: Graph) -> int:
    n = g.order
    edges = list(g.edges())
    for k in range(1, n + 1):
        for coloring in product(range(k), repeat=n):
            if all(coloring[u] != coloring[v] for u, v in edges):
                return k
    return n


def oracle_chromatic_index(g: Graph) -> int:
    """Exhaustive proper edge coloring, fewest colors first."""
    edges = list(g.edges())
    m = len(edges)
    if m == 0:
        return 0
    conflicts = [
        [b for b in range(m) if b != a and set(edges[a]) & set(edges[b])]
        for a in range(m)
    ]

    def colorable(k: int) -> bool:
        assigned = [-1] * m

        def go(i: int) -> bool:
            if i == m:
                return True
            for c in range(k):
                if all(assigned[b] != c for b in conflicts[i]):
                    assigned[i] = c
                    if go(i + 1):
                        return True
                    assigned[i] = -1
            return False

        return go(0)

    k = 1
    while not colorable(k):
        k += 1
    return k


def _connected_after_removal(g: Graph, removed_vertices=(), removed_edges=()) -> bool:
    keep = [v for v in range(g.order) if v not in removed_vertices]
    if len(keep) <= 1:
        return True
    removed = {frozenset(e) for e in removed_edges}
    seen = {keep[0]}
    stack = [keep[0]]
    keepset = set(keep)
    while stack:
        u = stack.pop()
        for v in range(g.order):
            if (
                v in keepset
                and v not in seen
                and g.has_edge(u, v)
                and frozenset((u, v)) not in removed
            ):
                seen.add(v)
                stack.append(v)
    return len(seen) == len(keep)


def oracle_vertex_connectivity(g: Graph) -> int:
    n = g.order
    if n == 1:
        return 0
    if all(g.has_edge(u, v) for u, v in combinations(range(n), 2)):
        return n - 1
    for k in range(n - 1):
        for cut in combinations(range(n), k):
            if not _connected_after_removal(g, removed_vertices=set(cut)):
                return k
    return n - 1


def oracle_edge_connectivity(g: Graph) -> int:
    if g.order == 1:
        return 0
    edges = list(g.edges())
    for k in range(len(edges) + 1):
        for cut in combinations(edges, k):
            if not _connected_after_removal(g, removed_edges=cut):
                return k
    return len(edges)


def oracle_is_bipartite(g: Graph) -> bool:
    n = g.order
    edges = list(g.edges())
    return any(
        all(sides >> u & 1 != sides >> v & 1 for u, v in edges)
        for sides in range(1 << n)
    )


def oracle_matching_number(g: Graph) -> int:
    edges = list(g.edges())
    best = 0
    for k in range(len(edges), 0, -1):
        for subset in combinations(edges, k):
            vertices = [v for e in subset for v in e]
            if len(set(vertices)) == len(vertices):
                return k
    return best


def oracle_triangle_count(g: Graph) -> int:
    return sum(
        1
        for a, b, c in combinations(range(g.order), 3)
        if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)
    )


def oracle_subgraph_embeddings(pattern: Graph, target: Graph, induced: bool):
    """All injective maps preserving edges (and non-edges when induced)."""
    p, t = pattern.order, target.order
    found = []
    for image in permutations(range(t), p):
        good = True
        for u in range(p):
            for v in range(u + 1, p):
                pe = pattern.has_edge(u, v)
                te = target.has_edge(image[u], image[v])
                if pe and not te or (induced and not pe and te):
                    good = False
                    break
            if not good:
                break
        if good:
            found.append(image)
    return found


def oracle_is_eulerian(g: Graph) -> bool:
    if any(d % 2 for d in g.degrees()):
        return False
    dist = all_pairs_shortest(g)
    active = [v for v in range(g.order) if g.degrees()[v] > 0]
    return all(dist[u][v] < float("inf") for u in active for v in active)


def oracle_is_claw_free(g: Graph) -> bool:
    n = g.order
    for center in range(n):
        leaves = [v for v in range(n) if g.has_edge(center, v)]
        for trio in combinations(leaves, 3):
            if not any(g.has_edge(a, b) for a, b in combinations(trio, 2)):
                return False
    return True
