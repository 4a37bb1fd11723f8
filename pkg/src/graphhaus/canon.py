"""Canonical labelling, canonical keys, isomorphism tests, group order.

The canonical form of a graph is the relabelling whose upper-triangle
adjacency bits (in graph6 column order) are lexicographically smallest among
the leaves of an individualization-refinement search tree. The search prunes
with equitable-partition refinement, partial-string comparison against the
best leaf, and orbits of discovered automorphisms; the automorphism group
order falls out of the collected generators via Schreier-Sims.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .graphs import Graph, from_graph6, relabel, to_graph6
from .timing import Deadline, as_deadline

ALGORITHM_VERSION = 1


@dataclass(frozen=True)
class CanonicalKey:
    """graph6 text of the canonically relabelled graph plus algorithm tag."""

    key: str
    algorithm_version: int

    def decode(self) -> Graph:
        return from_graph6(self.key)


@dataclass(frozen=True)
class CanonResult:
    canonical_graph: Graph
    relabelling: Tuple[int, ...]  # old vertex -> new label
    automorphism_group_order: int


@dataclass(frozen=True)
class StabilityMismatch:
    stored_key: str
    recomputed_key: str


@dataclass
class StabilityReport:
    checked: int = 0
    mismatches: List[StabilityMismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _refine(rows: Sequence[int], cells: List[List[int]], splitters: Iterable[int]) -> List[List[int]]:
    """Equitable refinement: split cells by neighbor counts until stable.

    ``splitters`` seeds the worklist with cell masks; every sub-cell created
    is enqueued as a new splitter. Sub-cells are ordered by ascending count,
    which keeps the whole evolution label-invariant.
    """
    queue = deque(splitters)
    while queue:
        wmask = queue.popleft()
        i = 0
        while i < len(cells):
            cell = cells[i]
            if len(cell) > 1:
                groups: dict = {}
                for v in cell:
                    d = (rows[v] & wmask).bit_count()
                    g = groups.get(d)
                    if g is None:
                        groups[d] = [v]
                    else:
                        g.append(v)
                if len(groups) > 1:
                    subs = [groups[d] for d in sorted(groups)]
                    cells[i : i + 1] = subs
                    for sub in subs:
                        m = 0
                        for v in sub:
                            m |= 1 << v
                        queue.append(m)
                    i += len(subs)
                    continue
            i += 1
    return cells


class _Search:
    """One canonical-form search over the individualization-refinement tree."""

    def __init__(self, g: Graph, deadline: Deadline, prefer_largest: bool):
        self.rows = g.rows
        self.n = g.order
        self.nbits = g.order * (g.order - 1) // 2
        self.deadline = deadline
        self.prefer_largest = prefer_largest
        self.zeta: Optional[int] = None
        self.zeta_label: List[int] = []
        self.rho: Optional[int] = None
        self.rho_perm: List[int] = []
        self.rho_label: List[int] = []
        self.generators: List[Tuple[int, ...]] = []
        self._gen_seen: set = set()

    def run(self) -> None:
        cells = _refine(
            self.rows,
            [list(range(self.n))],
            [(1 << self.n) - 1],
        )
        self._node(cells, [], 0, 0)

    def _better(self, a: int, b: int) -> bool:
        return a > b if self.prefer_largest else a < b

    def _node(self, cells: List[List[int]], base: List[int], partial: int, npref: int) -> None:
        self.deadline.check()
        rows = self.rows
        # grow the singleton prefix; leaf bits accumulate in column order
        k = npref
        while k < len(cells) and len(cells[k]) == 1:
            row = rows[cells[k][0]]
            for i in range(k):
                partial = partial << 1 | (row >> cells[i][0] & 1)
            k += 1
        pbits = k * (k - 1) // 2
        if self.zeta is not None:
            shift = self.nbits - pbits
            eq_zeta = partial == self.zeta >> shift
            rho_prefix = self.rho >> shift
            if partial != rho_prefix and not self._better(partial, rho_prefix) and not eq_zeta:
                return  # cannot improve on the best leaf nor reveal an automorphism
        if k == len(cells):
            self._leaf(partial, [c[0] for c in cells])
            return
        sizes = [len(c) for c in cells[k:] if len(c) > 1]
        target_size = min(sizes)
        ti = next(i for i in range(k, len(cells)) if len(cells[i]) == target_size)
        tried: List[int] = []
        for v in sorted(cells[ti]):
            if tried and self._in_known_orbit(v, tried, base):
                continue
            tried.append(v)
            child = [list(c) for c in cells[:ti]]
            child.append([v])
            rest = [u for u in cells[ti] if u != v]
            child.append(rest)
            child.extend(list(c) for c in cells[ti + 1 :])
            rest_mask = 0
            for u in rest:
                rest_mask |= 1 << u
            _refine(rows, child, [1 << v, rest_mask])
            self._node(child, base + [v], partial, k)

    def _leaf(self, bits: int, perm: List[int]) -> None:
        label = [0] * self.n
        for pos, v in enumerate(perm):
            label[v] = pos
        if self.zeta is None:
            self.zeta = self.rho = bits
            self.zeta_label = self.rho_label = label
            self.rho_perm = perm
            return
        if bits == self.zeta:
            self._add_generator(perm, self.zeta_label)
        elif bits == self.rho:
            self._add_generator(perm, self.rho_label)
        if self._better(bits, self.rho):
            self.rho = bits
            self.rho_perm = perm
            self.rho_label = label

    def _add_generator(self, perm: List[int], ref_label: List[int]) -> None:
        gamma = tuple(perm[ref_label[v]] for v in range(self.n))
        if gamma not in self._gen_seen and any(gamma[v] != v for v in range(self.n)):
            self._gen_seen.add(gamma)
            self.generators.append(gamma)

    def _in_known_orbit(self, v: int, tried: List[int], base: List[int]) -> bool:
        applicable = [
            g for g in self.generators if all(g[b] == b for b in base)
        ]
        if not applicable:
            return False
        orbit = set(tried)
        frontier = list(tried)
        while frontier:
            x = frontier.pop()
            for g in applicable:
                y = g[x]
                if y == v:
                    return True
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        return False


def _compose(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    """Permutation applying b first, then a."""
    return tuple(a[x] for x in b)


def _invert(a: Tuple[int, ...]) -> Tuple[int, ...]:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def permutation_group_order(generators: Iterable[Sequence[int]], n: int) -> int:
    """Order of the permutation group generated by ``generators``.

    Deterministic Schreier-Sims: sift generators into a stabilizer chain,
    then close over Schreier generators until every one sifts to identity.
    """
    identity = tuple(range(n))
    strong: List[Tuple[int, ...]] = []
    base: List[int] = []

    def gens_at(level: int) -> List[Tuple[int, ...]]:
        prefix = base[:level]
        return [g for g in strong if all(g[b] == b for b in prefix)]

    def transversal(level: int) -> dict:
        b = base[level]
        tv = {b: identity}
        frontier = [b]
        gl = gens_at(level)
        while frontier:
            x = frontier.pop()
            tx = tv[x]
            for s in gl:
                y = s[x]
                if y not in tv:
                    tv[y] = _compose(s, tx)
                    frontier.append(y)
        return tv

    def sift_and_add(g: Tuple[int, ...]) -> bool:
        h = g
        level = 0
        while h != identity:
            if level == len(base):
                base.append(next(p for p in range(n) if h[p] != p))
            tv = transversal(level)
            x = h[base[level]]
            if x not in tv:
                strong.append(h)
                return True
            h = _compose(_invert(tv[x]), h)
            level += 1
        return False

    for g in generators:
        sift_and_add(tuple(g))

    changed = True
    while changed:
        changed = False
        for level in range(len(base) - 1, -1, -1):
            tv = transversal(level)
            gl = gens_at(level)
            b = base[level]
            for u in list(tv.values()):
                for s in gl:
                    x = s[u[b]]
                    schreier = _compose(_invert(tv[x]), _compose(s, u))
                    if schreier != identity and sift_and_add(schreier):
                        changed = True
    order = 1
    for level in range(len(base)):
        order *= len(transversal(level))
    return order


class Canonicalizer:
    """Canonical-form engine pinned to one algorithm version.

    ``tie_break`` selects which end of the leaf ordering is canonical;
    production uses "smallest". The "largest" variant exists so stability
    audits can be exercised against a deliberately different canonicalizer.
    """

    def __init__(self, algorithm_version: int = ALGORITHM_VERSION, tie_break: str = "smallest"):
        if tie_break not in ("smallest", "largest"):
            raise ValueError(f"unknown tie_break {tie_break!r}")
        self.algorithm_version = algorithm_version
        self.tie_break = tie_break

    def canonical_form(self, g: Graph, deadline=None) -> CanonResult:
        """Search the full tree; raises DeadlineExceeded if the deadline fires."""
        search = _Search(g, as_deadline(deadline), self.tie_break == "largest")
        search.run()
        label = tuple(search.rho_label)
        return CanonResult(
            canonical_graph=relabel(g, label),
            relabelling=label,
            automorphism_group_order=permutation_group_order(search.generators, g.order),
        )

    def canonical_key(self, g: Graph) -> CanonicalKey:
        # storage-path canonicalization runs without a deadline
        result = self.canonical_form(g)
        return CanonicalKey(to_graph6(result.canonical_graph), self.algorithm_version)

    def are_isomorphic(self, g: Graph, h: Graph) -> bool:
        if g.order != h.order or g.num_edges() != h.num_edges():
            return False
        return self.canonical_key(g).key == self.canonical_key(h).key

    def verify_canonical_stability(self, records: Iterable[Tuple[object, Graph]]) -> StabilityReport:
        """Recompute every stored key with this canonicalizer; report mismatches."""
        report = StabilityReport()
        for stored, graph in records:
            stored_key = stored.key if isinstance(stored, CanonicalKey) else str(stored)
            recomputed = self.canonical_key(graph).key
            report.checked += 1
            if recomputed != stored_key:
                report.mismatches.append(StabilityMismatch(stored_key, recomputed))
        return report


_DEFAULT = Canonicalizer()


def canonical_form(g: Graph, deadline=None) -> CanonResult:
    return _DEFAULT.canonical_form(g, deadline)


def canonical_key(g: Graph) -> CanonicalKey:
    return _DEFAULT.canonical_key(g)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return _DEFAULT.are_isomorphic(g, h)


def verify_canonical_stability(records: Iterable[Tuple[object, Graph]]) -> StabilityReport:
    return _DEFAULT.verify_canonical_stability(records)
