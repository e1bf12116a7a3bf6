"""Aggregate tables over the warehouse: activity counts and authorship.

All orderings are total (ties broken by key ascending) so repeated runs
over the same warehouse bytes produce identical tables.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable

from mailweave.addresses import domain_of
from mailweave.identity import Institution, InstitutionKind, map_institution
from mailweave.store import address_to_person, load_institutions, load_messages, load_persons
from mailweave.temporal import snapshot_asof
from mailweave.warehouse import Warehouse


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    total_row_count: int = 0

    def __post_init__(self):
        if self.total_row_count == 0:
            self.total_row_count = len(self.rows)

    def as_text(self) -> str:
        widths = [len(c) for c in self.columns]
        str_rows = [[str(v) for v in row] for row in self.rows]
        for row in str_rows:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], len(cell))
        lines = ["  ".join(c.ljust(widths[i]) for i, c in enumerate(self.columns)).rstrip()]
        for row in str_rows:
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        return "\n".join(lines)

    def as_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue()

    def as_records(self) -> str:
        lines = [json.dumps(dict(zip(self.columns, row)), sort_keys=True) for row in self.rows]
        return "\n".join(lines) + ("\n" if lines else "")


def _count_table(counter: Counter, columns: list[str]) -> ResultTable:
    rows = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return ResultTable(columns=columns, rows=[(k, v) for k, v in rows])


def posts_per_person(wh: Warehouse) -> ResultTable:
    """Message count per resolved person, descending."""
    resolution = address_to_person(load_persons(wh))
    counts = Counter(
        resolution.get(m.sender.key, m.sender.key) for m in load_messages(wh)
    )
    return _count_table(counts, ["person", "posts"])


def posts_per_domain(wh: Warehouse) -> ResultTable:
    counts = Counter(domain_of(m.sender) for m in load_messages(wh))
    return _count_table(counts, ["domain", "posts"])


def posts_per_institution(wh: Warehouse, registry: Iterable[Institution]) -> ResultTable:
    """Message count per owning institution."""
    registry = list(registry)
    counts: Counter = Counter()
    for msg in load_messages(wh):
        counts[map_institution(domain_of(msg.sender), registry).institution_id] += 1
    return _count_table(counts, ["institution", "posts"])


def posters_per_domain(wh: Warehouse) -> ResultTable:
    """Distinct resolved posters per domain.

    A person posting from several domains counts once per domain posted
    from.
    """
    resolution = address_to_person(load_persons(wh))
    per_domain: dict[str, set[str]] = defaultdict(set)
    for msg in load_messages(wh):
        person = resolution.get(msg.sender.key, msg.sender.key)
        per_domain[domain_of(msg.sender)].add(person)
    counts = Counter({d: len(people) for d, people in per_domain.items()})
    return _count_table(counts, ["domain", "posters"])


def report_institution_table(wh: Warehouse) -> ResultTable:
    """Authorship by institution.

    Each author is attributed to their affiliation as of the report's
    publication date; authors with an empty affiliation snapshot count
    under "Unknown". Columns: institution, type, distinct individuals,
    and report counts per maturity level.
    """
    individuals: dict[str, set[str]] = defaultdict(set)
    maturity_counts: dict[str, Counter] = defaultdict(Counter)

    for report in wh.list_records("report"):
        pub = date.fromisoformat(report.fields["pub_date"][0].value)
        maturity = report.fields["maturity"][0].value
        report_insts: set[str] = set()
        for tv in report.fields.get("author", []):
            insts = ["Unknown"]
            if wh.has_record(tv.value):
                view = snapshot_asof(wh.get_record(tv.value), pub)
                insts = view.get("affiliation", []) or ["Unknown"]
            for inst in insts:
                individuals[inst].add(tv.value)
                report_insts.add(inst)
        for inst in report_insts:
            maturity_counts[inst][maturity] += 1

    kind_by_id = {i.institution_id: i.kind for i in load_institutions(wh)}
    name_by_id = {i.institution_id: i.name for i in load_institutions(wh)}

    rows = []
    for inst in individuals:
        counts = maturity_counts[inst]
        kind = kind_by_id.get(inst, InstitutionKind.NA)
        rows.append(
            (
                name_by_id.get(inst, inst),
                kind.value,
                len(individuals[inst]),
                counts.get("REC", 0),
                counts.get("WG_NOTE", 0),
                counts.get("DRAFT", 0),
            )
        )
    rows.sort(key=lambda r: (-r[3], -r[4], -r[5], -r[2], r[0]))
    return ResultTable(
        columns=["institution", "type", "individuals", "rec", "wg_note", "draft"],
        rows=rows,
    )
