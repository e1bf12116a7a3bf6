from __future__ import annotations

from datetime import date

import pytest
from fastapi.testclient import TestClient

from mailweave.service import create_app
from mailweave.temporal import Record, TemporalBound, assert_fact, retract_fact
from mailweave.warehouse import Warehouse

from conftest import FIXTURES, add_report_fixture, populate_corpus_warehouse

import oracles


@pytest.fixture(scope="module")
def corpus_client(tmp_path_factory):
    root = tmp_path_factory.mktemp("wh-api")
    wh = populate_corpus_warehouse(root)
    add_report_fixture(wh)
    _add_john_doe(wh)
    return TestClient(create_app(root))


def _add_john_doe(wh: Warehouse):
    record = Record(record_id="john-doe", schema="person")
    assert_fact(record, "name", "Doe", date(2001, 1, 1), TemporalBound.running(),
                asserted_at=date(2004, 6, 6))
    first = assert_fact(record, "function", "XML Corp. CEO", date(2001, 1, 1),
                        TemporalBound.at(date(2003, 12, 31)), asserted_at=date(2004, 6, 6))
    assert_fact(record, "function", "XML Corp. CEO", date(2004, 6, 6),
                TemporalBound.running(), asserted_at=date(2004, 6, 6))
    retract_fact(record, "function", first, TemporalBound.at(date(2003, 11, 30)), date(2005, 4, 10))
    wh.put_record(record)


def test_query_count_empty_warehouse(tmp_path):
    client = TestClient(create_app(tmp_path / "wh"))
    response = client.post("/query", json={"dsl": "FROM messages COUNT"})
    assert response.status_code == 200
    assert response.json()["rows"] == [["count", 0]]


def test_query_dsl_body(corpus_client):
    response = corpus_client.post("/query", json={"dsl": "FROM messages COUNT"})
    assert response.json()["rows"] == [["count", 18]]


def test_query_object_body(corpus_client):
    response = corpus_client.post("/query", json={
        "source": "messages",
        "group_by": "sender.person",
        "aggregate": "count",
        "order": ["count", "desc"],
        "limit": 1,
    })
    body = response.json()
    assert body["rows"] == [["doe@a.com", 5]]
    assert body["total_row_count"] == 8


def test_query_syntax_error_body(corpus_client):
    response = corpus_client.post("/query", json={"dsl": "FROM messages GROUP BY"})
    assert response.status_code == 400
    body = response.json()
    assert body["code"] == "syntax_error"
    assert body["location"] == {"line": 1, "column": len("FROM messages GROUP BY") + 1}


def test_person_snapshot_fig_shape(corpus_client):
    response = corpus_client.get("/persons/john-doe", params={"asof": "2002-06-01"})
    assert response.status_code == 200
    body = response.json()
    assert body["schema"] == "person"
    assert body["fields"]["function"] == ["XML Corp. CEO"]
    assert body["fields"]["name"] == ["Doe"]


def test_person_snapshot_respects_tx(corpus_client):
    before = corpus_client.get("/persons/john-doe",
                               params={"asof": "2003-12-15", "tx": "2004-12-31"}).json()
    after = corpus_client.get("/persons/john-doe",
                              params={"asof": "2003-12-15", "tx": "2005-04-10"}).json()
    assert before["fields"].get("function") == ["XML Corp. CEO"]
    assert after["fields"].get("function") is None


def test_person_snapshot_404(corpus_client):
    response = corpus_client.get("/persons/nobody")
    assert response.status_code == 404
    assert response.json()["code"] == "not_found"


def test_social_graph_endpoint(corpus_client):
    response = corpus_client.get("/graphs/social")
    body = response.json()
    assert not body["directed"]
    edges = {(e["source"], e["target"]): e["weight"] for e in body["edges"]}
    assert edges == oracles.brute_force_social_edges()
    labels = {n["id"]: n["label"] for n in body["nodes"]}
    assert labels["doe@a.com"] == "John Doe"


def test_answering_graph_endpoint(corpus_client):
    response = corpus_client.get("/graphs/answering", params={"person": "doe@a.com"})
    body = response.json()
    assert body["directed"]
    edges = {(e["source"], e["target"]): e["weight"] for e in body["edges"]}
    assert edges == oracles.ANSWERING_DOE
    missing = corpus_client.get("/graphs/answering")
    assert missing.status_code == 400


def test_coauthors_graph_endpoint(corpus_client):
    body = corpus_client.get("/graphs/coauthors").json()
    edges = {(e["source"], e["target"]): e["weight"] for e in body["edges"]}
    assert edges == {("ibm", "oracle"): 2, ("Unknown", "oracle"): 1}


def test_tables_endpoints(corpus_client):
    posts = corpus_client.get("/tables/posts-per-person").json()
    assert posts["rows"][0] == ["doe@a.com", 5]
    posters = corpus_client.get("/tables/posters-per-domain").json()
    assert dict(map(tuple, posters["rows"])) == oracles.tally_posters_per_domain()
    reports = corpus_client.get("/tables/report-institutions").json()
    assert reports["columns"][0] == "institution"
    unknown = corpus_client.get("/tables/not-a-table")
    assert unknown.status_code == 404


def test_get_endpoints_are_stable(corpus_client):
    for path in ("/tables/posts-per-person", "/graphs/social", "/persons/john-doe?asof=2002-06-01"):
        assert corpus_client.get(path).content == corpus_client.get(path).content


def test_ingest_upload_and_409(tmp_path):
    root = tmp_path / "wh"
    client = TestClient(create_app(root))
    with (FIXTURES / "list-a.mbox").open("rb") as fh:
        response = client.post(
            "/ingest",
            files={"file": ("list-a.mbox", fh, "application/mbox")},
            data={"list_id": "xsl"},
        )
    assert response.status_code == 200
    body = response.json()
    assert body["accepted"] == 10
    assert body["skipped"] == 1
    assert body["duplicates_dropped"] == 1

    count = client.post("/query", json={"dsl": "FROM messages COUNT"}).json()
    assert count["rows"] == [["count", 10]]

    lock = Warehouse(root).write_lock
    lock.acquire()
    try:
        with (FIXTURES / "list-b.jsonl").open("rb") as fh:
            busy = client.post(
                "/ingest",
                files={"file": ("list-b.jsonl", fh, "application/x-ndjson")},
                data={"list_id": "xmlschema"},
            )
        assert busy.status_code == 409
        assert busy.json()["code"] == "ingest_busy"
    finally:
        lock.release()


def test_export_endpoint(corpus_client):
    response = corpus_client.get("/export", params={"kind": "social", "format": "graphml"})
    assert response.status_code == 200
    assert "attachment" in response.headers["content-disposition"]
    nodes, edges, _ = oracles.parse_graphml(response.text)
    assert edges == oracles.brute_force_social_edges()

    csv_response = corpus_client.get("/export", params={"kind": "posts-per-person", "format": "csv"})
    assert csv_response.text.splitlines()[0] == "person,posts"
