from __future__ import annotations

import random

import pytest
from fastapi.testclient import TestClient

from graphhaus.api import create_app
from graphhaus.graphs import relabel, to_adjacency_matrix, to_graph6
from graphhaus.invariants import InvariantValue
from graphhaus.scheduler import MlfqScheduler, SchedulerConfig
from graphhaus.store import MetaEntry, MetaList, Store
from helpers import complete_graph, cycle_graph, petersen_classic, petersen_graph


class FakeClock:
    def __init__(self):
        self.now = 1000.0

    def __call__(self):
        return self.now

    def advance(self, dt):
        self.now += dt


@pytest.fixture
def env(tmp_path):
    store = Store(tmp_path / "api.db")
    store.create_user("alice", "alice-pw", "alice@example.org")
    store.create_user("bob", "bob-pw")
    clock = FakeClock()
    app = create_app(store, rate_limit_seconds=10.0, clock=clock)
    client = TestClient(app)
    yield store, client, clock
    store.close()


def login(client, user="alice", password="alice-pw") -> dict:
    response = client.post("/api/login", json={"login": user, "password": password})
    assert response.status_code == 200, response.text
    return {"Authorization": f"Bearer {response.json()['token']}"}


def submit(client, headers, clock, fmt, data, comment="interesting because tests", **kw):
    clock.advance(60)  # stay clear of the submission throttle
    return client.post(
        "/api/graphs",
        json={"format": fmt, "data": data, "comment": comment, **kw},
        headers=headers,
    )


class TestAuth:
    def test_register_login_flow(self, env):
        _, client, _ = env
        response = client.post("/api/register", json={"login": "carol", "password": "pw"})
        assert response.status_code == 201
        assert client.post("/api/register", json={"login": "carol", "password": "x"}).status_code == 409
        assert client.post("/api/login", json={"login": "carol", "password": "pw"}).status_code == 200
        assert client.post("/api/login", json={"login": "carol", "password": "no"}).status_code == 401

    def test_legacy_account_gets_423_until_reset(self, env):
        store, client, _ = env
        store.mark_legacy_scheme("alice")
        response = client.post("/api/login", json={"login": "alice", "password": "alice-pw"})
        assert response.status_code == 423
        token = client.post("/api/password-reset", json={"login": "alice"}).json()["reset_token"]
        done = client.post(
            "/api/password-reset",
            json={"login": "alice", "token": token, "new_password": "fresh-pw"},
        )
        assert done.status_code == 200
        assert client.post("/api/login", json={"login": "alice", "password": "fresh-pw"}).status_code == 200

    def test_mutations_require_session(self, env):
        _, client, _ = env
        response = client.post(
            "/api/graphs", json={"format": "graph6", "data": "Bw", "comment": "x"}
        )
        assert response.status_code == 401


class TestSubmission:
    def test_submit_and_dedup_end_to_end(self, env):
        store, client, clock = env
        headers = login(client)
        first = submit(client, headers, clock, "graph6", to_graph6(petersen_graph()))
        assert first.status_code == 201, first.text
        gid = first.json()["id"]
        # same graph, different labelling, different format
        shuffled = relabel(petersen_classic(), random.Random(5).sample(range(10), 10))
        second = submit(client, headers, clock, "adjacency_matrix", to_adjacency_matrix(shuffled))
        assert second.status_code == 409
        assert second.json()["existing_id"] == gid

    def test_missing_comment(self, env):
        _, client, clock = env
        headers = login(client)
        response = submit(client, headers, clock, "graph6", "Bw", comment="   ")
        assert response.status_code == 400

    def test_bad_format_and_bad_data(self, env):
        _, client, clock = env
        headers = login(client)
        assert submit(client, headers, clock, "dot", "graph {}").status_code == 400
        assert submit(client, headers, clock, "graph6", "B").status_code == 400

    def test_order_cap_enforced(self, env):
        _, client, clock = env
        headers = login(client)
        response = submit(client, headers, clock, "edge_list", "n=251\n0 1")
        assert response.status_code == 400
        assert "OrderOutOfRange" in response.json()["error"]

    def test_rate_limit(self, env):
        _, client, clock = env
        headers = login(client)
        assert submit(client, headers, clock, "graph6", "Bw").status_code == 201
        quick = client.post(
            "/api/graphs",
            json={"format": "graph6", "data": "A_", "comment": "too fast"},
            headers=headers,
        )
        assert quick.status_code == 429
        clock.advance(11)
        again = client.post(
            "/api/graphs",
            json={"format": "graph6", "data": "A_", "comment": "after cooldown"},
            headers=headers,
        )
        assert again.status_code == 201

    def test_duplicate_does_not_consume_rate_budget(self, env):
        _, client, clock = env
        headers = login(client)
        assert submit(client, headers, clock, "graph6", "Bw").status_code == 201
        clock.advance(11)
        assert client.post(
            "/api/graphs", json={"format": "graph6", "data": "Bw", "comment": "dup"},
            headers=headers,
        ).status_code == 409
        # the 409 was side-effect free: an immediate fresh submission still passes
        assert client.post(
            "/api/graphs", json={"format": "graph6", "data": "A_", "comment": "new"},
            headers=headers,
        ).status_code == 201


class TestRecordView:
    def test_full_view_with_statuses(self, env):
        store, client, clock = env
        headers = login(client)
        gid = submit(
            client, headers, clock, "graph6", to_graph6(petersen_graph()),
            name="Petersen graph", interesting_invariants=["girth"],
        ).json()["id"]
        store.set_invariant_value(gid, "girth", InvariantValue.computed(5))
        store.set_invariant_value(gid, "chromatic_number", InvariantValue.timed_out())
        view = client.get(f"/api/graphs/{gid}").json()
        assert view["name"] == "Petersen graph"
        assert view["order"] == 10 and view["edges"] == 15
        assert set(view["formats"]) == {"graph6", "adjacency_matrix", "edge_list"}
        by_inv = {v["invariant"]: v for v in view["invariant_values"]}
        assert by_inv["girth"] == {"invariant": "girth", "status": "computed", "value": 5}
        assert by_inv["chromatic_number"]["status"] == "timed_out"
        assert by_inv["chromatic_number"]["value"] is None
        assert by_inv["diameter"]["status"] == "pending"
        assert view["interesting_marks"] == ["girth"]

    def test_unknown_id(self, env):
        _, client, _ = env
        assert client.get("/api/graphs/999").status_code == 404

    def test_rational_value_is_exact_on_the_wire(self, env):
        store, client, clock = env
        headers = login(client)
        gid = submit(client, headers, clock, "graph6", to_graph6(cycle_graph(3))).json()["id"]
        from fractions import Fraction

        store.set_invariant_value(gid, "average_degree", InvariantValue.computed(Fraction(7, 3)))
        view = client.get(f"/api/graphs/{gid}").json()
        by_inv = {v["invariant"]: v for v in view["invariant_values"]}
        assert by_inv["average_degree"]["value"] == "7/3"


class TestSearchEndpoint:
    @pytest.fixture
    def seeded(self, env):
        store, client, clock = env
        headers = login(client)
        self_ids = {}
        for name, g in [("C5", cycle_graph(5)), ("K4", complete_graph(4)), ("Petersen", petersen_graph())]:
            gid = submit(client, headers, clock, "graph6", to_graph6(g), name=name).json()["id"]
            from graphhaus import invariants as inv_mod

            for desc in inv_mod.registry():
                store.set_invariant_value(gid, desc.id, inv_mod.compute(desc.id, g, 60))
            self_ids[name] = gid
        return store, client, clock, self_ids

    def test_formula_only_query_complete(self, seeded):
        _, client, _, ids = seeded
        response = client.post(
            "/api/graphs/search",
            json={"constraints": [{"type": "formula",
                                   "formula": "automorphism_group_order >= number_of_vertices"}]},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["complete"] is True
        assert set(body["ids"]) == set(ids.values())

    def test_parity_constraint(self, seeded):
        _, client, _, ids = seeded
        response = client.post(
            "/api/graphs/search",
            json={"constraints": [{"type": "invariant_parity",
                                   "invariant": "number_of_vertices", "parity": "odd"}]},
        )
        assert response.json()["ids"] == [ids["C5"]]

    def test_subgraph_constraint(self, seeded):
        _, client, _, ids = seeded
        response = client.post(
            "/api/graphs/search",
            json={
                "constraints": [
                    {"type": "subgraph", "pattern": to_graph6(cycle_graph(5)),
                     "mode": "induced", "operation": "include"}
                ],
                "time_budget_seconds": 10,
            },
        )
        body = response.json()
        assert set(body["ids"]) == {ids["C5"], ids["Petersen"]}

    def test_malformed_formula_gives_400_with_position(self, seeded):
        _, client, _, _ = seeded
        response = client.post(
            "/api/graphs/search",
            json={"constraints": [{"type": "formula", "formula": "girth >"}]},
        )
        assert response.status_code == 400
        assert "position" in response.json()

    def test_budget_out_of_range(self, seeded):
        _, client, _, _ = seeded
        response = client.post(
            "/api/graphs/search",
            json={"constraints": [], "time_budget_seconds": 0.5},
        )
        assert response.status_code == 400

    def test_unknown_constraint_type(self, seeded):
        _, client, _, _ = seeded
        response = client.post(
            "/api/graphs/search", json={"constraints": [{"type": "regex", "text": ".*"}]}
        )
        assert response.status_code == 400


class TestAppendEndpoints:
    @pytest.fixture
    def with_graph(self, env):
        store, client, clock = env
        headers = login(client)
        gid = submit(client, headers, clock, "graph6", to_graph6(cycle_graph(5))).json()["id"]
        return store, client, clock, headers, gid

    def test_add_comment(self, with_graph):
        _, client, _, headers, gid = with_graph
        assert client.post(f"/api/graphs/{gid}/comments", json={"body": "nice"},
                           headers=headers).status_code == 201
        assert client.post("/api/graphs/999/comments", json={"body": "x"},
                           headers=headers).status_code == 404

    def test_embedding_positions_only(self, with_graph):
        _, client, _, headers, gid = with_graph
        good = client.post(
            f"/api/graphs/{gid}/embeddings",
            json={"positions": [[0.1, 0.2], [0.3, 0.4], [0.5, 0.6], [0.7, 0.8], [0.9, 0.1]]},
            headers=headers,
        )
        assert good.status_code == 201

    def test_embedding_with_edges_rejected_by_schema(self, with_graph):
        _, client, _, headers, gid = with_graph
        sneaky = client.post(
            f"/api/graphs/{gid}/embeddings",
            json={
                "positions": [[0.1, 0.2], [0.3, 0.4], [0.5, 0.6], [0.7, 0.8], [0.9, 0.1]],
                "edges": [[0, 1]],
            },
            headers=headers,
        )
        assert sneaky.status_code == 400

    def test_embedding_count_mismatch(self, with_graph):
        _, client, _, headers, gid = with_graph
        response = client.post(
            f"/api/graphs/{gid}/embeddings",
            json={"positions": [[0.1, 0.2]]},
            headers=headers,
        )
        assert response.status_code == 400

    def test_mark_interesting(self, with_graph):
        _, client, _, headers, gid = with_graph
        assert client.post(f"/api/graphs/{gid}/interesting", json={"invariant": "girth"},
                           headers=headers).status_code == 201
        assert client.post(f"/api/graphs/{gid}/interesting", json={"invariant": "genus"},
                           headers=headers).status_code == 400


class TestRegistryAndMeta:
    def test_invariants_listing_has_kind_tags(self, env):
        _, client, _ = env
        listing = client.get("/api/invariants").json()
        by_id = {d["id"]: d for d in listing}
        assert by_id["is_bipartite"]["kind"] == "boolean"
        assert by_id["average_degree"]["kind"] == "rational"
        assert "genus" not in by_id

    def test_meta_family(self, env):
        store, client, _ = env
        store.upsert_meta_list(
            MetaList("cubic", "cubic graphs", [MetaEntry(4, 1, "c4.g6"), MetaEntry(40, None)])
        )
        body = client.get("/api/meta/cubic").json()
        assert body["entries"][0] == {"order": 4, "count": 1, "file_ref": "c4.g6"}
        assert body["entries"][1]["count"] is None
        assert client.get("/api/meta/snarks").status_code == 404


class TestLegacyUrls:
    def test_redirect_preserves_id(self, env):
        store, client, clock = env
        headers = login(client)
        submit(client, headers, clock, "graph6", to_graph6(petersen_graph())).json()
        response = client.get("/ViewGraphInfo.action?id=660", follow_redirects=False)
        assert response.status_code == 301
        assert response.headers["location"] == "/graphs/660"

    def test_non_numeric_id(self, env):
        _, client, _ = env
        assert client.get("/ViewGraphInfo.action?id=abc").status_code == 400

    def test_anonymized_graph_still_resolves(self, env):
        store, client, clock = env
        headers = login(client, "bob", "bob-pw")
        gid = submit(client, headers, clock, "graph6", "Bw").json()["id"]
        store.delete_user(store._user_id("bob"))
        assert client.get(f"/api/graphs/{gid}").json()["uploader"] == "anonymous"
        page = client.get(f"/ViewGraphInfo.action?id={gid}", follow_redirects=True)
        assert page.status_code == 200

    def test_graph_page_serves_html(self, env):
        store, client, clock = env
        headers = login(client)
        gid = submit(client, headers, clock, "graph6", "Bw", name="triangle").json()["id"]
        page = client.get(f"/graphs/{gid}")
        assert page.status_code == 200
        assert "text/html" in page.headers["content-type"]
        assert "triangle" in page.text

    def test_health(self, env):
        _, client, _ = env
        assert client.get("/api/health").json()["status"] == "ok"


class TestSchedulerIntegration:
    def test_submission_triggers_computation(self, tmp_path):
        store = Store(tmp_path / "sched.db")
        store.create_user("alice", "alice-pw")
        from graphhaus import invariants as inv_mod

        scheduler = MlfqScheduler(
            SchedulerConfig(levels=(5.0, 30.0, 300.0), worker_count=1),
            compute=lambda gid, inv, dl: inv_mod.compute(inv, store.graph_by_id(gid), dl),
            sink=store.set_invariant_value,
        )
        scheduler.start()
        clock = FakeClock()
        app = create_app(store, scheduler=scheduler, clock=clock)
        client = TestClient(app)
        headers = login(client)
        clock.advance(60)
        gid = client.post(
            "/api/graphs",
            json={"format": "graph6", "data": to_graph6(petersen_graph()), "comment": "x"},
            headers=headers,
        ).json()["id"]
        assert scheduler.wait_idle(timeout=60)
        scheduler.shutdown()
        values = store.invariant_values(gid)
        assert values["girth"].value == 5
        assert values["automorphism_group_order"].value == 120
        assert all(v.status.value in ("computed", "undefined") for v in values.values())
        store.close()


class TestSessionInvariants:
    def test_disabled_account_token_stops_authorizing(self, env):
        store, client, clock = env
        headers = login(client)
        assert submit(client, headers, clock, "graph6", "Bw").status_code == 201
        # the account is retired mid-session (e.g. a hash-scheme migration)
        store.mark_legacy_scheme("alice")
        store._conn.execute("UPDATE users SET disabled = 1 WHERE login = 'alice'")
        store._conn.commit()
        clock.advance(60)
        response = client.post(
            "/api/graphs",
            json={"format": "graph6", "data": "A_", "comment": "should fail"},
            headers=headers,
        )
        assert response.status_code == 401

    def test_expired_token_rejected(self, env):
        _, client, clock = env
        headers = login(client)
        clock.advance(31 * 24 * 3600)  # past the 30-day expiry
        response = client.post(
            "/api/graphs",
            json={"format": "graph6", "data": "Bw", "comment": "stale session"},
            headers=headers,
        )
        assert response.status_code == 401
