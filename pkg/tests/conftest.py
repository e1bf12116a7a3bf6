from __future__ import annotations

from datetime import date
from pathlib import Path

import pytest

from mailweave import store
from mailweave.identity import resolve_persons
from mailweave.ingest import clean_messages, parse_mbox
from mailweave.temporal import TemporalBound, assert_fact
from mailweave.warehouse import Warehouse

FIXTURES = Path(__file__).parent.parent / "fixtures"

RESOLVE_DAY = date(2002, 5, 1)


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1].replace("test_acceptance_", "")
        print(f"\nACCEPTANCE {report.outcome.upper()}: {name}", flush=True)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_messages():
    with (FIXTURES / "corpus.mbox").open("rb") as fh:
        parsed, report = parse_mbox(fh, "xquery")
    assert report.skipped == 0
    cleaned, _ = clean_messages(parsed)
    return cleaned


@pytest.fixture(scope="session")
def corpus_persons(corpus_messages):
    return resolve_persons(corpus_messages)


def populate_corpus_warehouse(root: Path) -> Warehouse:
    wh = Warehouse(root)
    with (FIXTURES / "corpus.mbox").open("rb") as fh:
        parsed, _ = parse_mbox(fh, "xquery")
    cleaned, _ = clean_messages(parsed)
    store.store_messages(wh, cleaned)
    store.store_persons(wh, resolve_persons(cleaned), cleaned, RESOLVE_DAY)
    return wh


@pytest.fixture(scope="session")
def corpus_warehouse(tmp_path_factory) -> Warehouse:
    """Read-only warehouse holding the fixture corpus and its persons."""
    return populate_corpus_warehouse(tmp_path_factory.mktemp("wh-corpus"))


def add_report_fixture(wh: Warehouse) -> None:
    """Three reports, four authors, one affiliation change between pubs."""
    from mailweave.identity import Institution, InstitutionKind
    from mailweave.temporal import Record

    for inst_id, name in (("ibm", "IBM"), ("oracle", "Oracle")):
        store.store_institutions(
            wh,
            [Institution(institution_id=inst_id, name=name, kind=InstitutionKind.CORP)],
            date(2003, 1, 1),
        )
    authors = {
        "alice@ibm.com": [("ibm", date(2000, 1, 1), date(2003, 6, 30)), ("oracle", date(2003, 7, 1), None)],
        "bob@oracle.com": [("oracle", date(2000, 1, 1), None)],
        "caro@ibm.com": [("ibm", date(2000, 1, 1), None)],
        "dan@example.org": [],
    }
    for person_id, spans in authors.items():
        record = Record(record_id=person_id, schema="person")
        for inst, start, end in spans:
            assert_fact(
                record,
                "affiliation",
                inst,
                start,
                TemporalBound.at(end) if end else TemporalBound.running(),
                asserted_at=date(2003, 12, 1),
            )
        if not spans:
            assert_fact(
                record,
                "address",
                person_id,
                date(2000, 1, 1),
                TemporalBound.running(),
                asserted_at=date(2003, 12, 1),
            )
        wh.put_record(record)
    reports = [
        ("rep-xquery-10", "XQuery 1.0", "REC", date(2003, 1, 15), ["alice@ibm.com", "bob@oracle.com"]),
        ("rep-xquery-req", "XQuery Requirements", "DRAFT", date(2003, 9, 1), ["alice@ibm.com", "caro@ibm.com"]),
        ("rep-full-text", "Full-Text Use Cases", "WG_NOTE", date(2003, 10, 1), ["bob@oracle.com", "dan@example.org"]),
    ]
    for report_id, title, maturity, pub, people in reports:
        wh.put_record(store.build_report_record(report_id, title, maturity, pub, people))


@pytest.fixture()
def report_warehouse(tmp_path) -> Warehouse:
    wh = Warehouse(tmp_path / "wh-reports")
    add_report_fixture(wh)
    return wh
