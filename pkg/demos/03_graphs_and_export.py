"""Walkthrough: threads, social graphs, answering profiles, exports.

Reconstructs discussion threads from reply headers (with subject-line
fallback), derives the co-participation graph and one poster's answering
profile, and writes them in formats external network tools read.

Run from the repository root:  python demos/03_graphs_and_export.py
"""

import tempfile
from datetime import date
from pathlib import Path

from mailweave import (
    ExportTarget,
    Warehouse,
    answering_profile,
    build_threads,
    clean_messages,
    export_graph,
    parse_mbox,
    resolve_persons,
    social_graph,
)
from mailweave import store

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

with tempfile.TemporaryDirectory() as tmp:
    wh = Warehouse(Path(tmp) / "warehouse")
    with (FIXTURES / "corpus.mbox").open("rb") as fh:
        messages, _ = parse_mbox(fh, "xquery")
    messages, _ = clean_messages(messages)
    store.store_messages(wh, messages)
    persons = resolve_persons(messages)
    store.store_persons(wh, persons, messages, date(2002, 5, 1))

    # Threads partition the corpus: In-Reply-To first, then References,
    # then same-subject joins within a 90-day window.
    resolution = store.address_to_person(persons)
    threads = build_threads(messages, resolution)
    print("threads (root, size, participants):")
    for t in threads:
        print(f"  {t.thread_id}  {t.size}  {sorted(t.participants)}")

    # Who shares threads with whom, weighted by how often.
    graph = social_graph(threads)
    print("\nco-participation edges:")
    for a, b, w in graph.sorted_edges():
        print(f"  {a} -- {b}  [{w}]")

    # Whom does the top poster answer? Self-replies are excluded, and the
    # alias jdoe@a.com counts as the same person.
    profile = answering_profile(wh, "doe@a.com")
    print("\nanswering profile of doe@a.com:")
    for a, b, w in profile.sorted_edges():
        print(f"  {a} -> {b}  [{w}]")

    out = Path(tmp)
    export_graph(graph, ExportTarget(format="graphml", path=out / "social.graphml"))
    export_graph(graph, ExportTarget(format="pajek", path=out / "social.net"))
    export_graph(profile, ExportTarget(format="dot", path=out / "answering.dot"))
    print("\nwrote social.graphml, social.net, answering.dot")
    print("(checked-in copies live under docs/samples/)")
