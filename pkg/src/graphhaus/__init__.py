"""graphhaus: a self-hostable database service for interesting graphs.

Duplicate-free storage via canonical forms, deadline-bounded invariant
computation on a multilevel-feedback-queue scheduler, and search by
invariant constraints, formulas, text, and time-budgeted subgraph
isomorphism.
"""

from .canon import (
    CanonResult,
    CanonicalKey,
    Canonicalizer,
    are_isomorphic,
    canonical_form,
    canonical_key,
    verify_canonical_stability,
)
from .graphs import (
    Embedding,
    Graph,
    complement,
    from_adjacency_matrix,
    from_edge_list,
    from_graph6,
    line_graph,
    new_graph,
    spring_layout,
    to_adjacency_matrix,
    to_edge_list,
    to_graph6,
)
from .invariants import InvariantDescriptor, InvariantValue, Status, compute, registry
from .query import SearchQuery, SearchResult, execute_search
from .store import Store
from .subiso import MatchOutcome, MatchStatus, contains, find_embedding
from .timing import Deadline, DeadlineExceeded

__version__ = "0.1.0"

__all__ = [
    "CanonResult",
    "CanonicalKey",
    "Canonicalizer",
    "Deadline",
    "DeadlineExceeded",
    "Embedding",
    "Graph",
    "InvariantDescriptor",
    "InvariantValue",
    "MatchOutcome",
    "MatchStatus",
    "SearchQuery",
    "SearchResult",
    "Status",
    "Store",
    "are_isomorphic",
    "canonical_form",
    "canonical_key",
    "complement",
    "compute",
    "contains",
    "execute_search",
    "find_embedding",
    "from_adjacency_matrix",
    "from_edge_list",
    "from_graph6",
    "line_graph",
    "new_graph",
    "registry",
    "spring_layout",
    "to_adjacency_matrix",
    "to_edge_list",
    "to_graph6",
    "verify_canonical_stability",
]
