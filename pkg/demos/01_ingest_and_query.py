"""Walkthrough: archive files to activity tables.

Builds a throwaway warehouse from the checked-in fixtures, resolves
senders into persons, and reproduces the three activity tables (posts
per person, posts per institution, posters per domain) both through the
dedicated operations and through the query language.

Run from the repository root:  python demos/01_ingest_and_query.py
"""

import tempfile
from datetime import date
from pathlib import Path

from mailweave import (
    Warehouse,
    clean_messages,
    execute,
    load_registry,
    parse_mbox,
    parse_query,
    posts_per_institution,
    posts_per_person,
    posters_per_domain,
    resolve_persons,
)
from mailweave import store

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

with tempfile.TemporaryDirectory() as tmp:
    wh = Warehouse(Path(tmp) / "warehouse")

    # 1. Parse and clean the archive. Malformed messages are skipped and
    #    accounted for, never fatal.
    with (FIXTURES / "corpus.mbox").open("rb") as fh:
        messages, report = parse_mbox(fh, "xquery")
    messages, clean_report = clean_messages(messages)
    print("ingest report:")
    print(report.after_clean(clean_report).as_table())

    # 2. Store messages, then group addresses into persons. jdoe@a.com and
    #    doe@a.com sign with the same display name on the same domain, so
    #    they merge into one poster.
    store.store_messages(wh, messages)
    persons = resolve_persons(messages)
    store.store_persons(wh, persons, messages, date(2002, 5, 1))
    print(f"\n{len(messages)} messages by {len(persons)} persons")

    # 3. The activity tables.
    print("\nposts per person:")
    print(posts_per_person(wh).as_text())

    registry = load_registry(FIXTURES / "registry.jsonl")
    print("\nposts per institution (fixture registry):")
    print(posts_per_institution(wh, registry).as_text())

    print("\ndistinct posters per domain:")
    print(posters_per_domain(wh).as_text())

    # 4. The same numbers through the query language.
    spec = parse_query("FROM messages GROUP BY sender.person COUNT ORDER BY count DESC LIMIT 3")
    print("\ntop three posters via the DSL:")
    print(execute(spec, wh).as_text())
