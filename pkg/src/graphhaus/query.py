"""Search-constraint model and the incremental, time-budgeted executor.

Constraints combine conjunctively. Non-subgraph constraints resolve through
the store's indexed lookups; a subgraph constraint then scans the surviving
candidates from small graphs to large under the query's global time budget,
so a timeout still returns every match gathered so far.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Protocol, Sequence, Set, Tuple, Union

from . import formula as formula_mod
from . import invariants, subiso
from .graphs import Graph
from .timing import Clock, Deadline

MIN_BUDGET_SECONDS = 5.0
MAX_BUDGET_SECONDS = 120.0
DEFAULT_BUDGET_SECONDS = 30.0


class BudgetOutOfRange(Exception):
    pass


class InvalidConstraint(Exception):
    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message)
        self.position = position


Number = Union[int, Fraction]


@dataclass(frozen=True)
class InvariantRange:
    invariant: str
    min: Optional[Number] = None
    max: Optional[Number] = None


@dataclass(frozen=True)
class InvariantExact:
    invariant: str
    value: Number


@dataclass(frozen=True)
class InvariantParity:
    invariant: str
    parity: str  # "even" | "odd"


@dataclass(frozen=True)
class BooleanClass:
    invariant: str
    mode: str  # "include" | "exclude"


@dataclass(frozen=True)
class InterestingMark:
    invariant: str


@dataclass(frozen=True)
class TextSearch:
    text: str
    scope: str = "both"  # "name" | "comment" | "both"


@dataclass(frozen=True)
class Formula:
    source: str

    def ast(self):
        return formula_mod.parse_formula(self.source)


@dataclass(frozen=True)
class Subgraph:
    pattern: Graph
    mode: str = "induced"  # "induced" | "subgraph"
    operation: str = "include"  # "include" | "exclude"


Constraint = Union[
    InvariantRange,
    InvariantExact,
    InvariantParity,
    BooleanClass,
    InterestingMark,
    TextSearch,
    Formula,
    Subgraph,
]


@dataclass
class SearchQuery:
    constraints: List[Constraint] = field(default_factory=list)
    time_budget: float = DEFAULT_BUDGET_SECONDS


@dataclass
class SearchResult:
    ids: List[int]  # ascending (graph order, id)
    complete: bool


class SearchableStore(Protocol):
    """Store surface the executor needs; implemented by store.Store."""

    def graph_summaries(self) -> List[Tuple[int, int]]: ...  # (id, order) sorted
    def match_range(self, invariant: str, lo: Optional[Fraction], hi: Optional[Fraction]) -> Set[int]: ...
    def match_exact(self, invariant: str, value: Fraction) -> Set[int]: ...
    def match_parity(self, invariant: str, parity: str) -> Set[int]: ...
    def match_boolean(self, invariant: str, include: bool) -> Set[int]: ...
    def match_interesting(self, invariant: str) -> Set[int]: ...
    def match_text(self, text: str, scope: str) -> Set[int]: ...
    def invariant_values(self, graph_id: int) -> dict: ...
    def graph_by_id(self, graph_id: int) -> Graph: ...


def _numeric_descriptor(invariant: str) -> invariants.InvariantDescriptor:
    try:
        desc = invariants.descriptor(invariant)
    except invariants.UnknownInvariant:
        raise InvalidConstraint(f"unknown invariant {invariant!r}") from None
    if desc.kind is invariants.Kind.BOOLEAN:
        raise InvalidConstraint(f"{invariant} is boolean; use a class constraint")
    return desc


def validate_query(query: SearchQuery) -> None:
    if not MIN_BUDGET_SECONDS <= query.time_budget <= MAX_BUDGET_SECONDS:
        raise BudgetOutOfRange(
            f"time budget must be within {MIN_BUDGET_SECONDS:g}..{MAX_BUDGET_SECONDS:g} s"
        )
    for c in query.constraints:
        if isinstance(c, (InvariantRange, InvariantExact)):
            _numeric_descriptor(c.invariant)
            if isinstance(c, InvariantRange) and c.min is None and c.max is None:
                raise InvalidConstraint("range constraint needs a bound")
        elif isinstance(c, InvariantParity):
            desc = _numeric_descriptor(c.invariant)
            if desc.kind is not invariants.Kind.INTEGER:
                raise InvalidConstraint(f"parity needs an integer invariant, not {c.invariant}")
            if c.parity not in ("even", "odd"):
                raise InvalidConstraint(f"parity must be even or odd, not {c.parity!r}")
        elif isinstance(c, BooleanClass):
            try:
                desc = invariants.descriptor(c.invariant)
            except invariants.UnknownInvariant:
                raise InvalidConstraint(f"unknown invariant {c.invariant!r}") from None
            if desc.kind is not invariants.Kind.BOOLEAN:
                raise InvalidConstraint(f"{c.invariant} is not a boolean invariant")
            if c.mode not in ("include", "exclude"):
                raise InvalidConstraint(f"bad class mode {c.mode!r}")
        elif isinstance(c, InterestingMark):
            try:
                invariants.descriptor(c.invariant)
            except invariants.UnknownInvariant:
                raise InvalidConstraint(f"unknown invariant {c.invariant!r}") from None
        elif isinstance(c, TextSearch):
            if c.scope not in ("name", "comment", "both"):
                raise InvalidConstraint(f"bad text scope {c.scope!r}")
            if not c.text:
                raise InvalidConstraint("text search needs a non-empty needle")
        elif isinstance(c, Formula):
            try:
                c.ast()
            except formula_mod.FormulaSyntaxError as exc:
                raise InvalidConstraint(str(exc), position=exc.position) from None
            except (formula_mod.NonNumericalInvariant, invariants.UnknownInvariant) as exc:
                raise InvalidConstraint(str(exc)) from None
        elif isinstance(c, Subgraph):
            if c.mode not in ("induced", "subgraph"):
                raise InvalidConstraint(f"bad subgraph mode {c.mode!r}")
            if c.operation not in ("include", "exclude"):
                raise InvalidConstraint(f"bad subgraph operation {c.operation!r}")
        else:
            raise InvalidConstraint(f"unknown constraint type {type(c).__name__}")


def _as_fraction(value: Number) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def execute_search(query: SearchQuery, store: SearchableStore, clock: Clock = time.monotonic) -> SearchResult:
    """Run a validated search; the clock is injectable for budget tests."""
    validate_query(query)
    deadline = Deadline(query.time_budget, clock=clock)

    summaries = store.graph_summaries()  # already (order, id) ascending
    candidates: Set[int] = {gid for gid, _ in summaries}
    formulas: List[Formula] = []
    subgraphs: List[Subgraph] = []

    for c in query.constraints:
        if isinstance(c, InvariantRange):
            lo = None if c.min is None else _as_fraction(c.min)
            hi = None if c.max is None else _as_fraction(c.max)
            candidates &= store.match_range(c.invariant, lo, hi)
        elif isinstance(c, InvariantExact):
            candidates &= store.match_exact(c.invariant, _as_fraction(c.value))
        elif isinstance(c, InvariantParity):
            candidates &= store.match_parity(c.invariant, c.parity)
        elif isinstance(c, BooleanClass):
            candidates &= store.match_boolean(c.invariant, c.mode == "include")
        elif isinstance(c, InterestingMark):
            candidates &= store.match_interesting(c.invariant)
        elif isinstance(c, TextSearch):
            candidates &= store.match_text(c.text, c.scope)
        elif isinstance(c, Formula):
            formulas.append(c)
        elif isinstance(c, Subgraph):
            subgraphs.append(c)

    if formulas:
        asts = [f.ast() for f in formulas]
        surviving = set()
        for gid in candidates:
            values = store.invariant_values(gid)
            if all(formula_mod.eval_formula(ast, values) is True for ast in asts):
                surviving.add(gid)
        candidates = surviving

    ordered = [gid for gid, _ in summaries if gid in candidates]
    if not subgraphs:
        return SearchResult(ordered, complete=True)

    matched: List[int] = []
    complete = True
    for gid in ordered:
        if deadline.expired():
            complete = False
            break
        target = store.graph_by_id(gid)
        keep = True
        for c in subgraphs:
            # cheap necessary conditions before VF2
            if c.pattern.order > target.order or (
                c.mode == "subgraph" and c.pattern.num_edges() > target.num_edges()
            ):
                answer = "no"
            else:
                answer = subiso.contains(c.pattern, target, c.mode, deadline)
            if answer == "unknown":
                complete = False
                keep = False
                break
            if (answer == "yes") != (c.operation == "include"):
                keep = False
                break
        if keep:
            matched.append(gid)
    return SearchResult(matched, complete)
