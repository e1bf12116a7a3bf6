"""Reply-graph reconstruction: every message lands in exactly one thread.

Parent resolution order: In-Reply-To when that id is in the corpus, then
the last resolvable References entry, then the earliest earlier message
with the same subject key on the same list inside a 90-day window.
Messages whose links all point outside the corpus root new threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta
from typing import Iterable, Mapping

from mailweave.ingest import EmailMessage

DEFAULT_SUBJECT_WINDOW_DAYS = 90


@dataclass
class Thread:
    thread_id: str  # root message id
    message_ids: list[str]  # chronological
    participants: frozenset[str]  # resolved person ids

    @property
    def size(self) -> int:
        return len(self.message_ids)


def _chronological(messages: Iterable[EmailMessage]) -> list[EmailMessage]:
    return sorted(messages, key=lambda m: (m.sent_at, m.message_id))


def resolve_parents(
    messages: Iterable[EmailMessage],
    subject_window_days: int = DEFAULT_SUBJECT_WINDOW_DAYS,
) -> dict[str, str | None]:
    """Parent message id (or None for roots) for every message."""
    ordered = _chronological(messages)
    corpus = {m.message_id for m in ordered}
    window = timedelta(days=subject_window_days)

    by_subject: dict[tuple[str, str], list[EmailMessage]] = {}
    parents: dict[str, str | None] = {}

    for msg in ordered:
        parent: str | None = None
        if msg.in_reply_to and msg.in_reply_to in corpus and msg.in_reply_to != msg.message_id:
            parent = msg.in_reply_to
        else:
            for ref in reversed(msg.references):
                if ref in corpus and ref != msg.message_id:
                    parent = ref
                    break
        if parent is None and msg.subject_key:
            candidates = by_subject.get((msg.list_id, msg.subject_key), [])
            for earlier in candidates:  # already chronological; first hit is earliest
                if msg.sent_at - earlier.sent_at <= window:
                    parent = earlier.message_id
                    break
        parents[msg.message_id] = parent
        if msg.subject_key:
            by_subject.setdefault((msg.list_id, msg.subject_key), []).append(msg)

    _break_cycles(parents, ordered)
    return parents


def _break_cycles(parents: dict[str, str | None], ordered: list[EmailMessage]) -> None:
    # Malformed archives can close a reply loop; drop the earliest link.
    position = {m.message_id: i for i, m in enumerate(ordered)}
    for start in list(parents):
        seen = {start}
        node = parents[start]
        while node is not None:
            if node in seen:
                earliest = min(seen | {node}, key=position.__getitem__)
                parents[earliest] = None
                break
            seen.add(node)
            node = parents.get(node)


def build_threads(
    messages: Iterable[EmailMessage],
    resolution: Mapping[str, str] | None = None,
    subject_window_days: int = DEFAULT_SUBJECT_WINDOW_DAYS,
) -> list[Thread]:
    """Partition a cleaned corpus into threads.

    ``resolution`` maps sender address keys to person ids; unmapped keys
    stand for themselves.
    """
    ordered = _chronological(messages)
    if not ordered:
        return []
    resolution = resolution or {}
    parents = resolve_parents(ordered, subject_window_days)

    def root_of(mid: str) -> str:
        while parents[mid] is not None:
            mid = parents[mid]  # type: ignore[assignment]
        return mid

    members: dict[str, list[EmailMessage]] = {}
    for msg in ordered:
        members.setdefault(root_of(msg.message_id), []).append(msg)

    threads = []
    for root, msgs in members.items():  # chronological by first message
        participants = frozenset(
            resolution.get(m.sender.key, m.sender.key) for m in msgs
        )
        threads.append(
            Thread(
                thread_id=root,
                message_ids=[m.message_id for m in msgs],
                participants=participants,
            )
        )
    return threads
