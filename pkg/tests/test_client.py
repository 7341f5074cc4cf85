"""Client behaviour over real loopback HTTP."""

import pytest

from msastix import build_target, build_threat_actor, assemble_campaign
from msastix.errors import (
    AuthFailedError,
    LocalValidationFailedError,
    NetworkError,
    ServerError,
)
from msastix.taxii import (
    ClientIdentity,
    Collection,
    CollectionStore,
    ServerThread,
    TaxiiApp,
    TaxiiClient,
)

COLL_ID = "7f9ab1c2-0000-4000-8000-000000000003"
RO_COLL = "7f9ab1c2-0000-4000-8000-00000000000c"


@pytest.fixture
def server():
    store = CollectionStore([
        Collection(id=COLL_ID, title="msa feed"),
        Collection(id=RO_COLL, title="read-only", can_write=False),
    ])
    app = TaxiiApp(store, [ClientIdentity("tok-amber", "amber")])
    with ServerThread(app) as running:
        yield running


def targets(n, prefix="c"):
    return [build_target(f"org-{prefix}{i}", key=f"{prefix}{i}")
            for i in range(n)]


class TestPull:
    def test_five_objects_page_size_two_is_three_requests(self, server):
        client = TaxiiClient(server.url, "tok-amber")
        client.push(COLL_ID, targets(5))
        before = server.app.request_count
        bundle = client.pull(COLL_ID, page_size=2)
        assert len(bundle.objects) == 5
        assert server.app.request_count - before == 3

    def test_empty_collection_empty_bundle(self, server):
        client = TaxiiClient(server.url, "tok-amber")
        bundle = client.pull(COLL_ID)
        assert bundle.objects == ()

    def test_bad_token(self, server):
        client = TaxiiClient(server.url, "wrong")
        with pytest.raises(AuthFailedError):
            client.pull(COLL_ID)

    def test_incremental_resume(self, server):
        client = TaxiiClient(server.url, "tok-amber")
        client.push(COLL_ID, targets(3, "a"))
        first = client.pull(COLL_ID)
        assert len(first.objects) == 3
        marker = client.high_water(COLL_ID)
        assert marker is not None
        client.push(COLL_ID, targets(2, "b"))
        second = client.pull(COLL_ID, added_after=marker)
        assert len(second.objects) == 2
        pulled_ids = {o.id for o in second.objects}
        assert pulled_ids.isdisjoint({o.id for o in first.objects})

    def test_unreachable_server(self):
        client = TaxiiClient("http://127.0.0.1:9", "tok", timeout=0.5)
        with pytest.raises(NetworkError):
            client.pull(COLL_ID)


class TestPush:
    def test_round_trip_object_equality(self, server):
        client = TaxiiClient(server.url, "tok-amber")
        objs = targets(4, "rt")
        status = client.push(COLL_ID, objs)
        assert status == {"success_count": 4, "failures": []}
        pulled = client.pull(COLL_ID)
        assert sorted(pulled.objects, key=lambda o: o.id) == \
            sorted(objs, key=lambda o: o.id)

    def test_dangling_bundle_refused_without_network(self, server):
        actor = build_threat_actor("A", "team", 1, "x")
        diamond, rels = assemble_campaign(actor=actor)
        client = TaxiiClient(server.url, "tok-amber")
        before = server.app.request_count
        with pytest.raises(LocalValidationFailedError) as exc_info:
            client.push(COLL_ID, [diamond, *rels])  # actor object omitted
        assert server.app.request_count == before
        assert any(f.code == "DANGLING_REF" for f in exc_info.value.findings)

    def test_server_403_maps_to_server_error(self, server):
        client = TaxiiClient(server.url, "tok-amber")
        with pytest.raises(ServerError) as exc_info:
            client.push(RO_COLL, targets(1, "x"))
        assert exc_info.value.status == 403

    def test_push_idempotent(self, server):
        client = TaxiiClient(server.url, "tok-amber")
        objs = targets(2, "idem")
        client.push(COLL_ID, objs)
        status = client.push(COLL_ID, objs)
        assert status == {"success_count": 2, "failures": []}
        assert len(client.pull(COLL_ID).objects) == 2

    def test_discovery_roundtrip(self, server):
        client = TaxiiClient(server.url, "tok-amber")
        doc = client.discovery()
        assert doc["api_roots"] == ["/api/"]
        collections = client.collections()
        assert {c["id"] for c in collections} == {COLL_ID, RO_COLL}
