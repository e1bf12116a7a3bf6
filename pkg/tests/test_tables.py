from __future__ import annotations

from mailweave.identity import load_registry
from mailweave.tables import (
    ResultTable,
    posts_per_domain,
    posts_per_institution,
    posts_per_person,
    posters_per_domain,
    report_institution_table,
)
from mailweave.warehouse import Warehouse

import oracles


def test_empty_warehouse_tables(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    assert posts_per_person(wh).rows == []
    assert posters_per_domain(wh).rows == []
    assert report_institution_table(wh).rows == []


def test_posts_per_person_matches_oracle(corpus_warehouse):
    table = posts_per_person(corpus_warehouse)
    assert dict(table.rows) == oracles.tally_posts_per_person()
    counts = [c for _, c in table.rows]
    assert counts == sorted(counts, reverse=True)
    assert table.rows[0] == ("doe@a.com", 5)  # top poster, aliases merged


def test_posts_per_person_tie_break(corpus_warehouse):
    rows = posts_per_person(corpus_warehouse).rows
    twos = [k for k, c in rows if c == 2]
    assert twos == sorted(twos)


def test_posts_per_domain_matches_oracle(corpus_warehouse):
    assert dict(posts_per_domain(corpus_warehouse).rows) == oracles.tally_posts_per_domain()


def test_posters_per_domain_matches_oracle(corpus_warehouse):
    assert dict(posters_per_domain(corpus_warehouse).rows) == oracles.tally_posters_per_domain()


def test_posters_never_exceed_posts(corpus_warehouse):
    posts = dict(posts_per_domain(corpus_warehouse).rows)
    posters = dict(posters_per_domain(corpus_warehouse).rows)
    assert set(posters) == set(posts)
    for domain, count in posters.items():
        assert count <= posts[domain]


def test_conservation(corpus_warehouse, corpus_messages):
    total = len(corpus_messages)
    assert sum(c for _, c in posts_per_person(corpus_warehouse).rows) == total
    assert sum(c for _, c in posts_per_domain(corpus_warehouse).rows) == total


def test_posts_per_institution_merges_by_suffix(corpus_warehouse, fixtures_dir):
    from mailweave.identity import Institution, InstitutionKind

    registry = [Institution("aco", "A Corp", InstitutionKind.CORP, frozenset({"a.com"}))]
    table = posts_per_institution(corpus_warehouse, registry)
    rows = dict(table.rows)
    assert rows["aco"] == 5
    assert "a.com" not in rows
    assert sum(rows.values()) == 18


def test_report_table_fixture(report_warehouse):
    table = report_institution_table(report_warehouse)
    assert table.columns == ["institution", "type", "individuals", "rec", "wg_note", "draft"]
    rows = {r[0]: r for r in table.rows}
    # the moved author (alice) counts once under each institution
    assert rows["IBM"] == ("IBM", "Corp", 2, 1, 0, 1)
    assert rows["Oracle"] == ("Oracle", "Corp", 2, 1, 1, 1)
    assert rows["Unknown"] == ("Unknown", "NA", 1, 0, 1, 0)
    # ordering: recommendations first, then notes, drafts, individuals
    assert [r[0] for r in table.rows] == ["Oracle", "IBM", "Unknown"]


def test_result_table_renderings():
    table = ResultTable(columns=["who", "posts"], rows=[("a, b", 2), ('say "hi"', 1)])
    csv_text = table.as_csv()
    assert csv_text.splitlines()[0] == "who,posts"
    assert '"a, b",2' in csv_text
    assert '"say ""hi""",1' in csv_text
    assert table.as_text().splitlines()[0].startswith("who")
    records = table.as_records().splitlines()
    assert records[0] == '{"posts": 2, "who": "a, b"}'
    assert table.total_row_count == 2
