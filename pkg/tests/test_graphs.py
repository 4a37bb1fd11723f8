from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphhaus import graphs
from graphhaus.graphs import (
    Graph,
    LoopRejected,
    MalformedHeader,
    NonzeroDiagonal,
    NonzeroPadding,
    NotSquare,
    NotSymmetric,
    OrderOutOfRange,
    ParseError,
    TrailingData,
    TruncatedBody,
    VertexOutOfRange,
    complement,
    from_adjacency_matrix,
    from_edge_list,
    from_graph6,
    line_graph,
    new_graph,
    spring_layout,
    to_graph6,
)


def graph6_oracle(order: int, edges: set[tuple[int, int]]) -> str:
    """Manual bit-packing per the format definition, independent of the codec."""
    if order <= 62:
        header = chr(order + 63)
    else:
        header = "~" + "".join(
            chr(((order >> s) & 63) + 63) for s in (12, 6, 0)
        )
    bits = ""
    for j in range(1, order):
        for i in range(j):
            bits += "1" if (i, j) in edges or (j, i) in edges else "0"
    bits += "0" * (-len(bits) % 6)
    body = "".join(chr(int(bits[k : k + 6], 2) + 63) for k in range(0, len(bits), 6))
    return header + body


def random_graph(rng, order: int, p: float = 0.5) -> Graph:
    edges = [
        (u, v)
        for u in range(order)
        for v in range(u + 1, order)
        if rng.random() < p
    ]
    return new_graph(order, edges)


def petersen() -> Graph:
    # Kneser K(5,2): 2-subsets of {0..4}, adjacent iff disjoint
    from itertools import combinations

    subsets = list(combinations(range(5), 2))
    edges = [
        (a, b)
        for a in range(10)
        for b in range(a + 1, 10)
        if not set(subsets[a]) & set(subsets[b])
    ]
    return new_graph(10, edges)


class TestNewGraph:
    def test_path_on_three(self):
        g = new_graph(3, [(0, 1), (1, 2)])
        assert g.num_edges() == 2
        assert g.has_edge(0, 1) and g.has_edge(1, 2) and not g.has_edge(0, 2)

    def test_null_graph_rejected(self):
        with pytest.raises(OrderOutOfRange):
            new_graph(0, [])

    def test_order_cap(self):
        with pytest.raises(OrderOutOfRange):
            new_graph(251, [])
        new_graph(250, [])  # boundary is allowed

    def test_loop_rejected(self):
        with pytest.raises(LoopRejected):
            new_graph(2, [(0, 0)])

    def test_vertex_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            new_graph(2, [(0, 2)])

    def test_duplicate_edges_collapse(self):
        g = new_graph(2, [(0, 1), (1, 0), (0, 1)])
        assert g.num_edges() == 1


class TestGraph6:
    def test_k2_fixed_vector(self):
        assert to_graph6(new_graph(2, [(0, 1)])) == "A_"

    def test_single_vertex(self):
        assert to_graph6(new_graph(1, [])) == "@"

    def test_k3_fixed_vector(self):
        assert to_graph6(new_graph(3, [(0, 1), (0, 2), (1, 2)])) == "Bw"

    def test_decode_two_isolated(self):
        g = from_graph6("A?")
        assert g.order == 2 and g.num_edges() == 0

    def test_decode_k3(self):
        assert from_graph6("Bw") == new_graph(3, [(0, 1), (0, 2), (1, 2)])

    def test_long_header_order_63(self):
        g = from_graph6(graph6_oracle(63, set()))
        assert g.order == 63
        assert to_graph6(g)[:4] == "~??~"

    def test_matches_oracle_on_samples(self):
        import random

        rng = random.Random(7)
        for order in [1, 2, 3, 5, 10, 62, 63, 100, 250]:
            g = random_graph(rng, order, 0.3)
            assert to_graph6(g) == graph6_oracle(order, set(g.edges()))

    def test_malformed_header(self):
        with pytest.raises(MalformedHeader):
            from_graph6("")
        with pytest.raises(MalformedHeader):
            from_graph6("~?")

    def test_order_out_of_range(self):
        with pytest.raises(OrderOutOfRange):
            from_graph6("?")  # order 0
        with pytest.raises(OrderOutOfRange):
            from_graph6(graph6_oracle(251, set()))

    def test_truncated_body(self):
        with pytest.raises(TruncatedBody):
            from_graph6("B")

    def test_trailing_data(self):
        with pytest.raises(TrailingData):
            from_graph6("Bw?")

    def test_nonzero_padding(self):
        # K2 body has 1 data bit + 5 padding bits; force a padding bit on
        bad = "A" + chr(((0b100000 | 1) + 63))
        with pytest.raises(NonzeroPadding):
            from_graph6(bad)

    def test_invalid_byte(self):
        with pytest.raises(graphs.InvalidByte):
            from_graph6("B!")
        with pytest.raises(graphs.InvalidByte):
            from_graph6("B\x7f")

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_round_trip_property(self, data):
        order = data.draw(st.integers(min_value=1, max_value=250))
        seed = data.draw(st.integers(min_value=0, max_value=2**30))
        import random

        g = random_graph(random.Random(seed), order, 0.4)
        assert from_graph6(to_graph6(g)) == g


class TestAdjacencyMatrix:
    def test_k2(self):
        assert from_adjacency_matrix("0 1\n1 0") == new_graph(2, [(0, 1)])

    def test_whitespace_optional(self):
        assert from_adjacency_matrix("01\n10") == new_graph(2, [(0, 1)])

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            from_adjacency_matrix("0 1\n0 0")

    def test_nonzero_diagonal(self):
        with pytest.raises(NonzeroDiagonal):
            from_adjacency_matrix("1")

    def test_not_square(self):
        with pytest.raises(NotSquare):
            from_adjacency_matrix("0 1 0\n1 0 0")

    def test_empty_rejected(self):
        with pytest.raises(OrderOutOfRange):
            from_adjacency_matrix("")

    def test_bad_character(self):
        with pytest.raises(ParseError):
            from_adjacency_matrix("0 2\n2 0")

    def test_round_trip(self):
        import random

        g = random_graph(random.Random(3), 9, 0.5)
        assert from_adjacency_matrix(graphs.to_adjacency_matrix(g)) == g


class TestEdgeList:
    def test_path(self):
        g = from_edge_list("0 1\n1 2")
        assert g == new_graph(3, [(0, 1), (1, 2)])

    def test_declared_order(self):
        g = from_edge_list("n=4\n0 1")
        assert g.order == 4 and g.num_edges() == 1

    def test_loop_rejected(self):
        with pytest.raises(LoopRejected):
            from_edge_list("0 0")

    def test_parse_error(self):
        with pytest.raises(ParseError):
            from_edge_list("0 1 2")
        with pytest.raises(ParseError):
            from_edge_list("a b")

    def test_empty_rejected(self):
        with pytest.raises(OrderOutOfRange):
            from_edge_list("")

    def test_round_trip(self):
        import random

        g = random_graph(random.Random(5), 12, 0.3)
        assert from_edge_list(graphs.to_edge_list(g)) == g


class TestDerivedGraphs:
    def test_complement_k3(self):
        g = complement(new_graph(3, [(0, 1), (0, 2), (1, 2)]))
        assert g.num_edges() == 0

    def test_complement_involution(self):
        import random

        for seed in range(5):
            g = random_graph(random.Random(seed), 11, 0.5)
            assert complement(complement(g)) == g

    def test_line_graph_p3(self):
        lg = line_graph(new_graph(3, [(0, 1), (1, 2)]))
        assert lg.order == 2 and lg.num_edges() == 1

    def test_line_graph_k3(self):
        lg = line_graph(new_graph(3, [(0, 1), (0, 2), (1, 2)]))
        assert lg.order == 3 and lg.num_edges() == 3

    def test_line_graph_petersen(self):
        lg = line_graph(petersen())
        assert lg.order == 15 and lg.num_edges() == 30
        assert all(lg.degree(v) == 4 for v in range(15))

    def test_line_graph_of_edgeless_rejected(self):
        with pytest.raises(OrderOutOfRange):
            line_graph(new_graph(3, []))

    def test_line_graph_too_many_edges(self):
        # K23 has 253 > 250 edges
        k23 = new_graph(23, [(u, v) for u in range(23) for v in range(u + 1, 23)])
        with pytest.raises(OrderOutOfRange):
            line_graph(k23)


class TestSpringLayout:
    def test_deterministic(self):
        g = petersen()
        assert spring_layout(g, 30, seed=4) == spring_layout(g, 30, seed=4)

    def test_single_vertex_centered(self):
        emb = spring_layout(new_graph(1, []))
        assert emb.positions == ((0.5, 0.5),)

    def test_k2_separated(self):
        emb = spring_layout(new_graph(2, [(0, 1)]))
        (x0, y0), (x1, y1) = emb.positions
        assert (x0 - x1) ** 2 + (y0 - y1) ** 2 > 0

    def test_positions_in_unit_square(self):
        import random

        for seed in range(3):
            g = random_graph(random.Random(seed), 17, 0.2)
            emb = spring_layout(g, 40, seed=seed)
            assert len(emb.positions) == g.order
            for x, y in emb.positions:
                assert 0.0 <= x <= 1.0 and 0.0 <= y <= 1.0

    def test_iterations_validated(self):
        with pytest.raises(ValueError):
            spring_layout(new_graph(2, []), iterations=0)


class TestCodecMutationRejection:
    def test_every_corrupting_mutation_rejected(self):
        import random

        rng = random.Random(2024)
        for trial in range(50):
            g = random_graph(rng, rng.randint(2, 40), 0.5)
            text = to_graph6(g)
            # truncation
            with pytest.raises(graphs.GraphError):
                from_graph6(text[:-1])
            # appended byte
            with pytest.raises(graphs.GraphError):
                from_graph6(text + "?")
            # a forced nonzero padding bit, when padding exists
            nbits = g.order * (g.order - 1) // 2
            pad = -nbits % 6
            if pad:
                group = ord(text[-1]) - 63
                flipped = chr((group | 1) + 63)
                with pytest.raises(NonzeroPadding):
                    from_graph6(text[:-1] + flipped)
            # out-of-alphabet byte
            with pytest.raises(graphs.InvalidByte):
                from_graph6(text[:-1] + "\x1f")
