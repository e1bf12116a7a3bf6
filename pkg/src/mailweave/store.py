"""Builders and loaders between domain objects and warehouse records.

Observation facts derive their temporal annotations from the data
itself: an email is annotated from its send date onward, and a person's
address memberships start at the first message seen from that address.
That keeps warehouse bytes a pure function of the corpus.
"""

from __future__ import annotations

from datetime import date, datetime, timezone
from typing import Iterable

from mailweave.addresses import RawAddress
from mailweave.identity import Institution, InstitutionKind, Person
from mailweave.ingest import EmailMessage
from mailweave.temporal import Record, TemporalAnnotation, TemporalBound, TemporalValue
from mailweave.warehouse import Warehouse

MATURITIES = ("REC", "WG_NOTE", "DRAFT")


def _observed(value: str, start: date, asserted_at: date, seq: int) -> TemporalValue:
    return TemporalValue(
        value=value,
        annotations=[
            TemporalAnnotation(
                annotation_id=f"a{seq}",
                start=start,
                end=TemporalBound.running(),
                event_type="valid",
                asserted_at=asserted_at,
            )
        ],
    )


class _Seq:
    def __init__(self):
        self.n = 0

    def __call__(self, value: str, start: date, asserted_at: date) -> TemporalValue:
        self.n += 1
        return _observed(value, start, asserted_at, self.n)


def build_email_record(msg: EmailMessage) -> Record:
    day = msg.sent_at.date()
    tv = _Seq()
    fields: dict[str, list[TemporalValue]] = {
        "list_id": [tv(msg.list_id, day, day)],
        "sender": [tv(msg.sender.key, day, day)],
        "subject": [tv(msg.subject_raw, day, day)],
        "subject_key": [tv(msg.subject_key, day, day)],
        "sent_at": [tv(msg.sent_at.isoformat(), day, day)],
        "body": [tv(msg.body_text, day, day)],
    }
    if msg.sender.display_name:
        fields["sender_name"] = [tv(msg.sender.display_name, day, day)]
    if msg.recipients:
        seen: list[str] = []
        for r in msg.recipients:
            if r.key not in seen:
                seen.append(r.key)
        fields["recipient"] = [tv(k, day, day) for k in seen]
    if msg.in_reply_to:
        fields["in_reply_to"] = [tv(msg.in_reply_to, day, day)]
    if msg.references:
        fields["reference"] = [tv(ref, day, day) for ref in msg.references]
    return Record(record_id=msg.message_id, schema="email", fields=fields)


def _plain_values(record: Record, field: str) -> list[str]:
    return [tv.value for tv in record.fields.get(field, [])]


def email_record_to_message(record: Record) -> EmailMessage:
    """Rebuild an EmailMessage; local-part case is the stored folded key."""

    def one(field: str, default: str = "") -> str:
        values = _plain_values(record, field)
        return values[0] if values else default

    def addr(key: str, display: str | None = None) -> RawAddress:
        local, _, domain = key.rpartition("@")
        return RawAddress(display_name=display, local_part=local, domain=domain)

    irt = _plain_values(record, "in_reply_to")
    return EmailMessage(
        message_id=record.record_id,
        list_id=one("list_id"),
        sender=addr(one("sender"), one("sender_name") or None),
        recipients=[addr(k) for k in _plain_values(record, "recipient")],
        subject_raw=one("subject"),
        subject_key=one("subject_key"),
        sent_at=datetime.fromisoformat(one("sent_at")).astimezone(timezone.utc),
        in_reply_to=irt[0] if irt else None,
        references=_plain_values(record, "reference"),
        body_text=one("body"),
    )


def build_person_record(
    person: Person,
    first_seen: dict[str, date],
    asserted_at: date,
) -> Record:
    """Person record whose address facts start at their first sighting."""
    tv = _Seq()
    earliest = min(first_seen.get(k, asserted_at) for k in person.addresses)
    fields: dict[str, list[TemporalValue]] = {
        "address": [
            tv(key, first_seen.get(key, asserted_at), asserted_at)
            for key in sorted(person.addresses)
        ],
    }
    if person.canonical_name:
        fields["name"] = [tv(person.canonical_name, earliest, asserted_at)]
    return Record(record_id=person.person_id, schema="person", fields=fields)


def person_record_to_person(record: Record) -> Person:
    names = _plain_values(record, "name")
    return Person(
        person_id=record.record_id,
        addresses=frozenset(_plain_values(record, "address")) or frozenset({record.record_id}),
        canonical_name=names[0] if names else None,
    )


def build_institution_record(inst: Institution, asserted_at: date) -> Record:
    tv = _Seq()
    fields: dict[str, list[TemporalValue]] = {
        "name": [tv(inst.name, asserted_at, asserted_at)],
        "kind": [tv(inst.kind.value, asserted_at, asserted_at)],
    }
    if inst.domains:
        fields["domain"] = [tv(d, asserted_at, asserted_at) for d in sorted(inst.domains)]
    return Record(record_id=inst.institution_id, schema="institution", fields=fields)


def institution_record_to_institution(record: Record) -> Institution:
    kinds = _plain_values(record, "kind")
    names = _plain_values(record, "name")
    return Institution(
        institution_id=record.record_id,
        name=names[0] if names else record.record_id,
        kind=InstitutionKind(kinds[0]) if kinds else InstitutionKind.NA,
        domains=frozenset(_plain_values(record, "domain")),
    )


def build_report_record(
    report_id: str,
    title: str,
    maturity: str,
    pub_date: date,
    author_person_ids: Iterable[str],
) -> Record:
    if maturity not in MATURITIES:
        raise ValueError(f"maturity must be one of {MATURITIES}")
    tv = _Seq()
    return Record(
        record_id=report_id,
        schema="report",
        fields={
            "title": [tv(title, pub_date, pub_date)],
            "maturity": [tv(maturity, pub_date, pub_date)],
            "pub_date": [tv(pub_date.isoformat(), pub_date, pub_date)],
            "author": [tv(pid, pub_date, pub_date) for pid in author_person_ids],
        },
    )


def store_messages(wh: Warehouse, messages: Iterable[EmailMessage]) -> int:
    count = 0
    for msg in messages:
        wh.put_record(build_email_record(msg))
        count += 1
    return count


def load_messages(wh: Warehouse) -> list[EmailMessage]:
    messages = [email_record_to_message(r) for r in wh.list_records("email")]
    return sorted(messages, key=lambda m: (m.sent_at, m.message_id))


def store_persons(
    wh: Warehouse,
    persons: Iterable[Person],
    messages: Iterable[EmailMessage],
    asserted_at: date | None = None,
) -> int:
    first_seen: dict[str, date] = {}
    latest = None
    for msg in messages:
        day = msg.sent_at.date()
        key = msg.sender.key
        if key not in first_seen or day < first_seen[key]:
            first_seen[key] = day
        latest = day if latest is None else max(latest, day)
    if asserted_at is None:
        asserted_at = latest or date.today()
    count = 0
    for person in persons:
        wh.put_record(build_person_record(person, first_seen, asserted_at))
        count += 1
    return count


def load_persons(wh: Warehouse) -> list[Person]:
    return [person_record_to_person(r) for r in wh.list_records("person")]


def store_institutions(wh: Warehouse, registry: Iterable[Institution], asserted_at: date) -> int:
    count = 0
    for inst in registry:
        wh.put_record(build_institution_record(inst, asserted_at))
        count += 1
    return count


def load_institutions(wh: Warehouse) -> list[Institution]:
    return [institution_record_to_institution(r) for r in wh.list_records("institution")]


def address_to_person(persons: Iterable[Person]) -> dict[str, str]:
    """Address key to person id; the resolution map analytics group by."""
    mapping: dict[str, str] = {}
    for person in persons:
        for key in person.addresses:
            mapping[key] = person.person_id
    return mapping
