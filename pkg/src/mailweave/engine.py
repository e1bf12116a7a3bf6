"""Evaluate a QuerySpec against warehouse snapshots.

Temporal fields are read through as-of snapshots: valid date defaults to
today, transaction date to latest knowledge. Records whose snapshot is
empty at the chosen dates do not exist for the query. Evaluation is pure
with respect to the warehouse bytes whenever both dates are explicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timezone
from typing import Iterable

from mailweave.dsl import Predicate, QuerySpec
from mailweave.identity import Institution, map_institution
from mailweave.store import address_to_person, load_persons
from mailweave.tables import ResultTable
from mailweave.temporal import Record, snapshot_asof
from mailweave.warehouse import Warehouse

# Identity column and display columns per source for non-aggregate queries.
ID_COLUMN = {
    "messages": "message_id",
    "persons": "person_id",
    "institutions": "institution_id",
    "reports": "report_id",
}

ROW_COLUMNS = {
    "messages": ["message_id", "sent_at", "sender", "subject"],
    "persons": ["person_id", "name"],
    "institutions": ["institution_id", "name", "kind"],
    "reports": ["report_id", "maturity", "pub_date", "title"],
}


@dataclass
class _Row:
    entity_id: str
    view: dict[str, list[str]]
    derived: dict[str, list[str]]

    def values(self, path: str) -> list[str]:
        if path in self.derived:
            return self.derived[path]
        return self.view.get(path, [])


def _schema_of(source: str) -> str:
    return {"messages": "email", "persons": "person", "institutions": "institution", "reports": "report"}[source]


def _derive_message(row: _Row, resolution: dict[str, str], registry: list[Institution]) -> None:
    senders = row.view.get("sender", [])
    row.derived["sender.person"] = [resolution.get(s, s) for s in senders]
    domains = [s.rpartition("@")[2] for s in senders]
    row.derived["sender.domain"] = domains
    row.derived["sender.institution"] = [
        map_institution(d, registry).institution_id for d in domains
    ]


def _rows(
    wh: Warehouse,
    spec: QuerySpec,
    registry: list[Institution],
) -> Iterable[_Row]:
    valid = spec.asof_valid or date.today()
    tx = spec.asof_transaction
    resolution = address_to_person(load_persons(wh)) if spec.source == "messages" else {}
    records: list[Record] = wh.list_records(_schema_of(spec.source))
    if spec.source == "institutions" and registry:
        stored = {r.record_id for r in records}
        for inst in registry:
            if inst.institution_id not in stored:
                yield _Row(
                    entity_id=inst.institution_id,
                    view={"name": [inst.name], "kind": [inst.kind.value], "domain": sorted(inst.domains)},
                    derived={"institution_id": [inst.institution_id]},
                )
    for record in records:
        view = snapshot_asof(record, valid, tx)
        if not view:
            continue
        row = _Row(entity_id=record.record_id, view=view, derived={})
        row.derived[ID_COLUMN[spec.source]] = [record.record_id]
        if spec.source == "messages":
            _derive_message(row, resolution, registry)
        yield row


def _as_datetime(value: str) -> datetime | None:
    try:
        parsed = datetime.fromisoformat(value)
    except ValueError:
        return None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def _matches(row: _Row, pred: Predicate) -> bool:
    values = row.values(pred.path)
    lit = pred.literal
    if isinstance(lit, date):
        midnight = datetime(lit.year, lit.month, lit.day, tzinfo=timezone.utc)
        parsed = [v for v in (_as_datetime(x) for x in values) if v is not None]
        if pred.op == "=":
            return any(v.date() == lit for v in parsed)
        if pred.op == "!=":
            return not any(v.date() == lit for v in parsed)
        if pred.op == "<":
            return any(v < midnight for v in parsed)
        if pred.op == "<=":
            return any(v.date() <= lit for v in parsed)
        if pred.op == ">":
            return any(v.date() > lit for v in parsed)
        if pred.op == ">=":
            return any(v >= midnight for v in parsed)
        return False
    text = str(lit)
    if pred.op == "=":
        return text in values
    if pred.op == "!=":
        return text not in values
    if pred.op == "contains":
        return any(text in v for v in values)
    if pred.op == "<":
        return any(v < text for v in values)
    if pred.op == "<=":
        return any(v <= text for v in values)
    if pred.op == ">":
        return any(v > text for v in values)
    if pred.op == ">=":
        return any(v >= text for v in values)
    return False


def _aggregate(spec: QuerySpec, rows: list[_Row]) -> ResultTable:
    if spec.group_by is None:
        if spec.aggregate == "count":
            value = len(rows)
        else:
            distinct: set[str] = set()
            for row in rows:
                distinct.update(row.values(spec.distinct_path or ""))
            value = len(distinct)
        return ResultTable(columns=["key", "count"], rows=[("count", value)])

    groups: dict[str, list[_Row]] = {}
    for row in rows:
        for key in set(row.values(spec.group_by)):
            groups.setdefault(key, []).append(row)

    out = []
    for key, members in groups.items():
        if spec.aggregate == "count":
            out.append((key, len(members)))
        else:
            distinct = set()
            for row in members:
                distinct.update(row.values(spec.distinct_path or ""))
            out.append((key, len(distinct)))
    out.sort(key=lambda kv: kv[0])
    if spec.order:
        key_name, direction = spec.order
        if key_name == "count":
            out.sort(key=lambda kv: (-kv[1], kv[0]) if direction == "desc" else (kv[1], kv[0]))
        else:
            out.sort(key=lambda kv: kv[0], reverse=direction == "desc")
    total = len(out)
    if spec.limit is not None:
        out = out[: spec.limit]
    return ResultTable(columns=[spec.group_by, "count"], rows=out, total_row_count=total)


def _select_rows(spec: QuerySpec, rows: list[_Row]) -> ResultTable:
    columns = ROW_COLUMNS[spec.source]

    def cell(row: _Row, col: str) -> str:
        values = row.values(col)
        return values[0] if values else ""

    data = [tuple(cell(r, c) for c in columns) for r in rows]
    data.sort(key=lambda t: t[0])
    if spec.order:
        key_name, direction = spec.order
        if key_name in columns:
            idx = columns.index(key_name)
            data.sort(key=lambda t: (t[idx], t[0]), reverse=direction == "desc")
    total = len(data)
    if spec.limit is not None:
        data = data[: spec.limit]
    return ResultTable(columns=columns, rows=data, total_row_count=total)


def execute(
    spec: QuerySpec,
    wh: Warehouse,
    registry: Iterable[Institution] | None = None,
) -> ResultTable:
    """Run a parsed query; exact aggregation, total deterministic order."""
    registry = list(registry or [])
    rows = [row for row in _rows(wh, spec, registry)
            if all(_matches(row, p) for p in spec.predicates)]
    if spec.aggregate is not None:
        return _aggregate(spec, rows)
    return _select_rows(spec, rows)
