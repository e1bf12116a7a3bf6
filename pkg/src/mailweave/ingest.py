"""Archive ingestion: mbox and line-record parsing plus corpus cleaning.

Malformed individual messages never abort a run; they are skipped and
accounted for in the IngestReport, so that
accepted + skipped + duplicates_dropped always equals the number of raw
blocks seen.
"""

from __future__ import annotations

import email
import email.policy
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.message import EmailMessage as StdEmailMessage
from email.utils import getaddresses, parsedate_to_datetime
from typing import BinaryIO, Iterable, Iterator, TextIO

from mailweave.addresses import RawAddress, normalize_address
from mailweave.errors import AddressError, IngestError

MSGID_RE = re.compile(r"<([^<>]+)>")

# Leading reply/forward markers; list tags like "[xquery]" are handled
# separately because they are stripped only as a leading token.
REPLY_PREFIX_RE = re.compile(r"^(re|fwd|fw)\s*:\s*", re.IGNORECASE)
LIST_TAG_RE = re.compile(r"^\[[^\[\]]*\]\s*")


@dataclass
class EmailMessage:
    """One cleaned list posting; the unit all analytics count."""

    message_id: str
    list_id: str
    sender: RawAddress
    recipients: list[RawAddress]
    subject_raw: str
    subject_key: str
    sent_at: datetime
    in_reply_to: str | None
    references: list[str]
    body_text: str


@dataclass
class IngestReport:
    """Bookkeeping for one parse or clean pass."""

    accepted: int = 0
    skipped: int = 0
    skip_reasons: list[tuple[int, str]] = field(default_factory=list)
    duplicates_dropped: int = 0

    @property
    def total_seen(self) -> int:
        return self.accepted + self.skipped + self.duplicates_dropped

    def merge(self, other: "IngestReport") -> "IngestReport":
        return IngestReport(
            accepted=self.accepted + other.accepted,
            skipped=self.skipped + other.skipped,
            skip_reasons=self.skip_reasons + other.skip_reasons,
            duplicates_dropped=self.duplicates_dropped + other.duplicates_dropped,
        )

    def after_clean(self, clean_report: "IngestReport") -> "IngestReport":
        """Fold a clean_messages report into this parse report so the
        block-conservation invariant keeps holding."""
        return IngestReport(
            accepted=clean_report.accepted,
            skipped=self.skipped,
            skip_reasons=self.skip_reasons,
            duplicates_dropped=self.duplicates_dropped + clean_report.duplicates_dropped,
        )

    def as_table(self) -> str:
        lines = [
            f"accepted            {self.accepted}",
            f"skipped             {self.skipped}",
            f"duplicates_dropped  {self.duplicates_dropped}",
        ]
        for offset, reason in self.skip_reasons:
            lines.append(f"  skip @{offset}: {reason}")
        return "\n".join(lines)

    def as_record(self) -> str:
        return json.dumps(
            {
                "accepted": self.accepted,
                "skipped": self.skipped,
                "duplicates_dropped": self.duplicates_dropped,
                "skip_reasons": [[o, r] for o, r in self.skip_reasons],
            },
            sort_keys=True,
        )


def subject_key_of(subject: str) -> str:
    """Normalize a subject for threading and dedup comparisons.

    Case-folds, then iteratively strips leading "re:"/"fwd:"/"fw:" markers
    and leading bracketed list tags. Mid-subject brackets are preserved.
    """
    text = subject.casefold().strip()
    while True:
        stripped = REPLY_PREFIX_RE.sub("", text, count=1)
        stripped = LIST_TAG_RE.sub("", stripped, count=1)
        stripped = stripped.strip()
        if stripped == text:
            return text
        text = stripped


def _msgid_list(value: str | None) -> list[str]:
    """Extract message ids from a References-style header, order preserved."""
    if not value:
        return []
    return [m.group(1).strip() for m in MSGID_RE.finditer(value)]


def _parse_date(value: str) -> datetime:
    """RFC 5322 date to an aware UTC datetime at second granularity."""
    parsed = parsedate_to_datetime(value)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc).replace(microsecond=0)


def _first_text_body(msg: StdEmailMessage) -> str:
    """Best-effort first text part; no multipart flattening beyond that."""
    try:
        part = msg.get_body(preferencelist=("plain", "html"))
        if part is not None:
            return part.get_content()
        if not msg.is_multipart():
            payload = msg.get_payload(decode=True)
            if payload is not None:
                return payload.decode("utf-8", errors="replace")
    except Exception:
        pass
    return ""


def _message_from_block(block: bytes, list_id: str) -> EmailMessage:
    """Convert one raw RFC 5322 message to an EmailMessage.

    Raises ValueError with a short reason for any defect that makes the
    message unusable for analytics.
    """
    msg = email.message_from_bytes(block, policy=email.policy.default)

    raw_id = msg.get("Message-ID")
    ids = _msgid_list(raw_id) if raw_id else []
    if not ids:
        raise ValueError("missing Message-ID")
    message_id = ids[0]

    date_header = msg.get("Date")
    if not date_header:
        raise ValueError("missing Date")
    try:
        sent_at = _parse_date(str(date_header))
    except Exception:
        raise ValueError(f"unparseable Date {str(date_header)!r}")

    from_header = msg.get("From")
    if not from_header:
        raise ValueError("missing From")
    try:
        sender = normalize_address(str(from_header))
    except AddressError as exc:
        raise ValueError(str(exc))

    recipients = []
    pairs = getaddresses(
        [str(v) for hdr in ("To", "Cc") for v in msg.get_all(hdr, [])]
    )
    for name, addr in pairs:
        try:
            recipients.append(normalize_address(f"{name} <{addr}>" if name else addr))
        except AddressError:
            continue

    subject_raw = str(msg.get("Subject", ""))
    irt_ids = _msgid_list(msg.get("In-Reply-To"))
    references = _msgid_list(msg.get("References"))

    return EmailMessage(
        message_id=message_id,
        list_id=list_id,
        sender=sender,
        recipients=recipients,
        subject_raw=subject_raw,
        subject_key=subject_key_of(subject_raw),
        sent_at=sent_at,
        in_reply_to=irt_ids[0] if irt_ids else None,
        references=references,
        body_text=_first_text_body(msg),
    )


def _iter_mbox_blocks(stream: BinaryIO) -> Iterator[tuple[int, bytes]]:
    """Yield (byte offset, raw message bytes) per RFC 4155 "From " separator."""
    offset = 0
    block_start: int | None = None
    lines: list[bytes] = []
    for line in stream:
        if line.startswith(b"From "):
            if block_start is not None:
                yield block_start, b"".join(lines)
            block_start = offset
            lines = []
        elif block_start is not None:
            # ">From" unstuffing per RFC 4155
            lines.append(line[1:] if line.startswith(b">From ") else line)
        offset += len(line)
    if block_start is not None:
        yield block_start, b"".join(lines)


def parse_mbox(stream: BinaryIO, list_id: str) -> tuple[list[EmailMessage], IngestReport]:
    """Parse an RFC 4155 mbox byte stream into EmailMessages.

    Each well-formed message becomes one EmailMessage with RFC 2047
    headers decoded and the Date normalized to UTC. Malformed messages
    are recorded in the report with their byte offset and skipped.
    """
    if not list_id:
        raise IngestError("list_id must be non-empty")
    messages: list[EmailMessage] = []
    report = IngestReport()
    try:
        blocks = list(_iter_mbox_blocks(stream))
    except (OSError, ValueError) as exc:
        raise IngestError(f"unreadable mbox stream: {exc}")
    for offset, block in blocks:
        try:
            messages.append(_message_from_block(block, list_id))
            report.accepted += 1
        except ValueError as exc:
            report.skipped += 1
            report.skip_reasons.append((offset, str(exc)))
    return messages, report


def _message_from_record(rec: dict, list_id: str) -> EmailMessage:
    for required in ("message_id", "from", "date"):
        if not rec.get(required):
            raise ValueError(f"missing field {required!r}")
    try:
        sent_at = datetime.fromisoformat(str(rec["date"]))
    except ValueError:
        raise ValueError(f"unparseable date {rec['date']!r}")
    if sent_at.tzinfo is None:
        sent_at = sent_at.replace(tzinfo=timezone.utc)
    sent_at = sent_at.astimezone(timezone.utc).replace(microsecond=0)
    try:
        sender = normalize_address(str(rec["from"]))
    except AddressError as exc:
        raise ValueError(str(exc))
    recipients = []
    for to in rec.get("to", []):
        try:
            recipients.append(normalize_address(str(to)))
        except AddressError:
            continue
    subject_raw = str(rec.get("subject", ""))
    message_id = str(rec["message_id"]).strip().strip("<>")
    if not message_id:
        raise ValueError("empty message_id")
    in_reply_to = rec.get("in_reply_to")
    return EmailMessage(
        message_id=message_id,
        list_id=str(rec.get("list_id") or list_id),
        sender=sender,
        recipients=recipients,
        subject_raw=subject_raw,
        subject_key=subject_key_of(subject_raw),
        sent_at=sent_at,
        in_reply_to=str(in_reply_to).strip().strip("<>") if in_reply_to else None,
        references=[str(r).strip().strip("<>") for r in rec.get("references", [])],
        body_text=str(rec.get("body", "")),
    )


def parse_message_records(stream: TextIO, list_id: str) -> tuple[list[EmailMessage], IngestReport]:
    """Parse a line-record stream (one JSON object per line).

    Same contract as parse_mbox; skip reasons carry the 1-based line
    number instead of a byte offset.
    """
    if not list_id:
        raise IngestError("list_id must be non-empty")
    messages: list[EmailMessage] = []
    report = IngestReport()
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("record is not an object")
            messages.append(_message_from_record(rec, list_id))
            report.accepted += 1
        except (ValueError, TypeError, KeyError) as exc:
            report.skipped += 1
            report.skip_reasons.append((lineno, str(exc)))
    return messages, report


def clean_messages(messages: Iterable[EmailMessage]) -> tuple[list[EmailMessage], IngestReport]:
    """Drop duplicate message ids (first wins) and refresh subject keys.

    Output order is input order; the function is total and idempotent.
    """
    seen: set[str] = set()
    out: list[EmailMessage] = []
    report = IngestReport()
    for msg in messages:
        if msg.message_id in seen:
            report.duplicates_dropped += 1
            continue
        seen.add(msg.message_id)
        msg.subject_key = subject_key_of(msg.subject_raw)
        out.append(msg)
        report.accepted += 1
    return out, report
