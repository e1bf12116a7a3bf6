"""Bitemporal annotations: every stored value carries interval metadata.

A value's history is a list of annotations. Corrections never edit an
interval in place: a retraction appends a corrected annotation and marks
the old one superseded, linking the two, so the warehouse can answer
"what did we believe on date T" as well as "what was true on date V".

As-of semantics are closed-closed on valid time: a snapshot taken at
exactly an interval's start or dated end includes the value. A running
end behaves as +infinity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable

from mailweave.errors import (
    IntervalError,
    RecordSchemaError,
    SupersededError,
    UnknownAnnotationError,
)

VALID = "valid"
TRANSACTION = "transaction"

SCHEMAS = ("person", "institution", "email", "report")

STATUS_ACTIVE = "active"
STATUS_SUPERSEDED = "superseded"

_ANNOTATION_NUM_RE = re.compile(r"^a(\d+)$")


@dataclass(frozen=True)
class TemporalBound:
    """Either a calendar day or the open "running" end."""

    kind: str  # "date" | "running"
    date: date | None = None

    def __post_init__(self):
        if self.kind == "date" and self.date is None:
            raise IntervalError("dated bound needs a date")
        if self.kind == "running" and self.date is not None:
            raise IntervalError("running bound carries no date")
        if self.kind not in ("date", "running"):
            raise IntervalError(f"unknown bound kind {self.kind!r}")

    @classmethod
    def at(cls, day: date) -> "TemporalBound":
        return cls(kind="date", date=day)

    @classmethod
    def running(cls) -> "TemporalBound":
        return cls(kind="running")

    @property
    def is_running(self) -> bool:
        return self.kind == "running"


@dataclass
class TemporalAnnotation:
    """One interval assertion: what holds, since when we said so."""

    annotation_id: str
    start: date
    end: TemporalBound
    event_type: str
    asserted_at: date
    status: str = STATUS_ACTIVE
    superseded_by: str | None = None
    source: str | None = None

    def __post_init__(self):
        if not self.end.is_running and self.end.date < self.start:
            raise IntervalError(f"interval ends {self.end.date} before start {self.start}")
        if (self.status == STATUS_SUPERSEDED) != (self.superseded_by is not None):
            raise RecordSchemaError("status superseded iff superseded_by present")

    def contains(self, valid_date: date) -> bool:
        if valid_date < self.start:
            return False
        return self.end.is_running or valid_date <= self.end.date


@dataclass
class TemporalValue:
    """A stored value with its non-empty annotation history."""

    value: str
    annotations: list[TemporalAnnotation] = field(default_factory=list)


@dataclass
class Record:
    """One warehouse document: a keyed map of temporalized fields."""

    record_id: str
    schema: str
    fields: dict[str, list[TemporalValue]] = field(default_factory=dict)

    def __post_init__(self):
        if self.schema not in SCHEMAS:
            raise RecordSchemaError(f"unknown schema {self.schema!r}")


def validate_record(record: Record) -> None:
    """Enforce the structural invariants every stored record must satisfy."""
    if record.schema not in SCHEMAS:
        raise RecordSchemaError(f"unknown schema {record.schema!r}")
    if not record.record_id:
        raise RecordSchemaError("record_id must be non-empty")
    for name, values in record.fields.items():
        for tv in values:
            if not tv.annotations:
                raise RecordSchemaError(f"value {tv.value!r} in field {name!r} has no annotations")
            ids = [a.annotation_id for a in tv.annotations]
            if len(ids) != len(set(ids)):
                raise RecordSchemaError(f"duplicate annotation ids in field {name!r}")
            for ann in tv.annotations:
                if ann.superseded_by is not None and ann.superseded_by not in ids:
                    raise RecordSchemaError(
                        f"dangling superseded_by {ann.superseded_by!r} in field {name!r}"
                    )


def next_annotation_id(record: Record) -> str:
    """Deterministic per-record id: one past the highest existing number."""
    highest = 0
    for values in record.fields.values():
        for tv in values:
            for ann in tv.annotations:
                m = _ANNOTATION_NUM_RE.match(ann.annotation_id)
                if m:
                    highest = max(highest, int(m.group(1)))
    return f"a{highest + 1}"


def assert_fact(
    record: Record,
    field_name: str,
    value: str,
    start: date,
    end: TemporalBound,
    event_type: str = VALID,
    asserted_at: date | None = None,
    source: str | None = None,
) -> str:
    """Attach a new active annotation for (field, value).

    If the value already exists in the field the annotation joins its
    history; otherwise a new TemporalValue is created.
    """
    if not end.is_running and end.date < start:
        raise IntervalError(f"interval ends {end.date} before start {start}")
    if asserted_at is None:
        asserted_at = date.today()
    ann = TemporalAnnotation(
        annotation_id=next_annotation_id(record),
        start=start,
        end=end,
        event_type=event_type,
        asserted_at=asserted_at,
        source=source,
    )
    values = record.fields.setdefault(field_name, [])
    for tv in values:
        if tv.value == value:
            tv.annotations.append(ann)
            return ann.annotation_id
    values.append(TemporalValue(value=value, annotations=[ann]))
    return ann.annotation_id


def _find_annotation(record: Record, field_name: str, annotation_id: str) -> tuple[TemporalValue, TemporalAnnotation]:
    for tv in record.fields.get(field_name, []):
        for ann in tv.annotations:
            if ann.annotation_id == annotation_id:
                return tv, ann
    raise UnknownAnnotationError(f"no annotation {annotation_id!r} on field {field_name!r}")


def retract_fact(
    record: Record,
    field_name: str,
    target_annotation_id: str,
    corrected_end: TemporalBound,
    asserted_at: date,
) -> str:
    """Correct an interval without losing history.

    A new annotation takes over with the target's start and the corrected
    end; the target is marked superseded and keeps its interval data, so
    earlier states of knowledge stay reconstructable.
    """
    tv, target = _find_annotation(record, field_name, target_annotation_id)
    if target.status != STATUS_ACTIVE:
        raise SupersededError(f"annotation {target_annotation_id!r} already superseded")
    if not corrected_end.is_running and corrected_end.date < target.start:
        raise IntervalError(f"corrected end {corrected_end.date} before start {target.start}")
    replacement = TemporalAnnotation(
        annotation_id=next_annotation_id(record),
        start=target.start,
        end=corrected_end,
        event_type=target.event_type,
        asserted_at=asserted_at,
        source=target.source,
    )
    tv.annotations.append(replacement)
    target.status = STATUS_SUPERSEDED
    target.superseded_by = replacement.annotation_id
    return replacement.annotation_id


def _active_as_of(ann: TemporalAnnotation, by_id: dict[str, TemporalAnnotation], tx: date) -> bool:
    # Supersession takes effect at the superseder's transaction date.
    if ann.superseded_by is None:
        return True
    superseder = by_id.get(ann.superseded_by)
    return superseder is None or superseder.asserted_at > tx


def snapshot_asof(
    record: Record,
    valid_date: date,
    transaction_date: date | None = None,
) -> dict[str, list[str]]:
    """Plain view of the record at a valid date and a knowledge date.

    A value appears when some annotation with event type "valid" was
    asserted by the transaction date, had not been superseded by then,
    and its valid interval contains valid_date. transaction_date omitted
    means latest knowledge.
    """
    tx = transaction_date if transaction_date is not None else date.max
    view: dict[str, list[str]] = {}
    for field_name, values in record.fields.items():
        hits: list[str] = []
        for tv in values:
            by_id = {a.annotation_id: a for a in tv.annotations}
            for ann in tv.annotations:
                if ann.event_type != VALID:
                    continue
                if ann.asserted_at > tx:
                    continue
                if not _active_as_of(ann, by_id, tx):
                    continue
                if ann.contains(valid_date):
                    hits.append(tv.value)
                    break
        if hits:
            view[field_name] = hits
    return view


def annotations_of(record: Record, field_name: str) -> Iterable[TemporalAnnotation]:
    for tv in record.fields.get(field_name, []):
        yield from tv.annotations
