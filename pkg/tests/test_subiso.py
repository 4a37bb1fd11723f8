from __future__ import annotations

import random

import oracles
from graphhaus.graphs import new_graph
from graphhaus.subiso import (
    MatchStatus,
    contains,
    find_embedding,
    verify_embedding,
)
from helpers import (
    all_labelled_graphs,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    petersen_graph,
    random_graph,
    star_graph,
)


class TestFindEmbedding:
    def test_no_triangle_in_petersen(self):
        out = find_embedding(complete_graph(3), petersen_graph(), "subgraph", 5)
        assert out.status is MatchStatus.NOT_FOUND

    def test_p3_induced_in_c5(self):
        out = find_embedding(path_graph(3), cycle_graph(5), "induced", 5)
        assert out.status is MatchStatus.FOUND
        assert verify_embedding(path_graph(3), cycle_graph(5), out.mapping, "induced")

    def test_c5_induced_in_petersen(self):
        out = find_embedding(cycle_graph(5), petersen_graph(), "induced", 5)
        assert out.status is MatchStatus.FOUND
        assert verify_embedding(cycle_graph(5), petersen_graph(), out.mapping, "induced")
        assert oracles.oracle_subgraph_embeddings(cycle_graph(5), petersen_graph(), True)

    def test_pattern_larger_than_target(self):
        out = find_embedding(complete_graph(4), complete_graph(3), "subgraph", 5)
        assert out.status is MatchStatus.NOT_FOUND

    def test_p4_subgraph_but_not_induced_in_c4(self):
        out = find_embedding(path_graph(4), cycle_graph(4), "subgraph", 5)
        assert out.status is MatchStatus.FOUND
        out = find_embedding(path_graph(4), cycle_graph(4), "induced", 5)
        assert out.status is MatchStatus.NOT_FOUND

    def test_disconnected_pattern(self):
        two_isolated = empty_graph(2)
        out = find_embedding(two_isolated, path_graph(3), "induced", 5)
        assert out.status is MatchStatus.FOUND
        assert not path_graph(3).has_edge(*out.mapping)

    def test_claw_detection(self):
        claw = star_graph(3)
        assert find_embedding(claw, star_graph(5), "induced", 5).status is MatchStatus.FOUND
        assert find_embedding(claw, cycle_graph(6), "induced", 5).status is MatchStatus.NOT_FOUND
        # K4 contains claws as subgraphs but not induced
        assert find_embedding(claw, complete_graph(4), "subgraph", 5).status is MatchStatus.FOUND
        assert find_embedding(claw, complete_graph(4), "induced", 5).status is MatchStatus.NOT_FOUND

    def test_completeness_against_brute_force(self):
        rng = random.Random(17)
        patterns = list(all_labelled_graphs(3)) + [
            random_graph(rng, 4, p) for p in (0.2, 0.5, 0.8) for _ in range(6)
        ]
        targets = [random_graph(rng, rng.randint(1, 6), rng.random()) for _ in range(25)]
        for pattern in patterns:
            for target in targets:
                for mode in ("induced", "subgraph"):
                    expected = bool(
                        oracles.oracle_subgraph_embeddings(pattern, target, mode == "induced")
                    ) if pattern.order <= target.order else False
                    out = find_embedding(pattern, target, mode, 10)
                    assert out.status is not MatchStatus.TIMED_OUT
                    got = out.status is MatchStatus.FOUND
                    assert got == expected, (pattern, target, mode)
                    if got:
                        assert verify_embedding(pattern, target, out.mapping, mode)

    def test_induced_implies_subgraph(self):
        rng = random.Random(23)
        for _ in range(40):
            pattern = random_graph(rng, rng.randint(1, 4), 0.5)
            target = random_graph(rng, rng.randint(4, 7), 0.5)
            if find_embedding(pattern, target, "induced", 10).status is MatchStatus.FOUND:
                assert contains(pattern, target, "subgraph", 10) == "yes"


class TestContains:
    def test_k1_in_anything(self):
        assert contains(complete_graph(1), petersen_graph(), "subgraph", 5) == "yes"

    def test_pattern_larger(self):
        assert contains(complete_graph(4), complete_graph(3), "subgraph", 5) == "no"

    def test_hard_instance_times_out(self):
        # independent set of 18 in G(40, 0.5): none exists; exhaustion is hopeless
        rng = random.Random(1)
        target = random_graph(rng, 40, 0.5)
        assert contains(empty_graph(18), target, "induced", 0.001) == "unknown"
