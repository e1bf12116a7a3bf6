from __future__ import annotations

import io
from datetime import datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mailweave.errors import IngestError
from mailweave.ingest import (
    clean_messages,
    parse_mbox,
    parse_message_records,
    subject_key_of,
)

import oracles

SINGLE_MESSAGE = b"""From doe@a.com Tue Apr  2 08:00:00 2002
Message-ID: <only@lists.example.org>
From: John Doe <doe@a.com>
To: talk@xquery.example.org
Subject: Re: [xquery] hello
Date: Tue, 2 Apr 2002 10:00:00 +0200

Body line.
"""


def test_empty_stream():
    messages, report = parse_mbox(io.BytesIO(b""), "xquery")
    assert messages == []
    assert report.accepted == 0
    assert report.total_seen == 0


def test_single_message_utc_normalization():
    messages, report = parse_mbox(io.BytesIO(SINGLE_MESSAGE), "xquery")
    assert report.accepted == 1
    msg = messages[0]
    assert msg.sent_at == datetime(2002, 4, 2, 8, 0, 0, tzinfo=timezone.utc)
    assert msg.message_id == "only@lists.example.org"
    assert msg.subject_key == "hello"
    assert msg.sender.key == "doe@a.com"


def test_list_id_required():
    with pytest.raises(IngestError):
        parse_mbox(io.BytesIO(b""), "")


def test_fixture_list_a_counts(fixtures_dir):
    blocks, with_id, without_id = oracles.mbox_block_counts(fixtures_dir / "list-a.mbox")
    with (fixtures_dir / "list-a.mbox").open("rb") as fh:
        messages, report = parse_mbox(fh, "xsl")
    assert (blocks, with_id, without_id) == (12, 11, 1)
    assert report.accepted == with_id == 11
    assert report.skipped == without_id == 1
    assert report.skip_reasons[0][1] == "missing Message-ID"
    assert report.total_seen == blocks


def test_fixture_list_a_clean(fixtures_dir):
    with (fixtures_dir / "list-a.mbox").open("rb") as fh:
        messages, _ = parse_mbox(fh, "xsl")
    cleaned, report = clean_messages(messages)
    assert len(cleaned) == len({m.message_id for m in messages}) == 10
    assert report.duplicates_dropped == 1
    assert report.accepted == 10


def test_rfc2047_subject_and_two_digit_year(fixtures_dir):
    with (fixtures_dir / "list-a.mbox").open("rb") as fh:
        messages, _ = parse_mbox(fh, "xsl")
    by_id = {m.message_id: m for m in messages}
    assert by_id["a3@lists.example.org"].subject_raw == "Café styles"
    assert by_id["a4@lists.example.org"].sent_at.year == 2002


def test_message_records_empty():
    messages, report = parse_message_records(io.StringIO(""), "xmlschema")
    assert messages == []
    assert report.accepted == 0


def test_message_records_identity_mapping():
    line = (
        '{"message_id": "<r1@x>", "list_id": "other", "from": "A B <a@b.c>",'
        ' "to": ["c@d.e"], "subject": "Re: hi", "date": "2002-07-01T09:00:00+00:00",'
        ' "in_reply_to": "r0@x", "references": ["r0@x"], "body": "text"}'
    )
    messages, report = parse_message_records(io.StringIO(line + "\n"), "xmlschema")
    assert report.accepted == 1
    msg = messages[0]
    assert msg.message_id == "r1@x"
    assert msg.list_id == "other"  # record's own list id wins
    assert msg.sender.key == "a@b.c"
    assert [r.key for r in msg.recipients] == ["c@d.e"]
    assert msg.subject_key == "hi"
    assert msg.in_reply_to == "r0@x"
    assert msg.references == ["r0@x"]
    assert msg.body_text == "text"


def test_fixture_list_b_counts(fixtures_dir):
    good, bad = oracles.jsonl_date_counts(fixtures_dir / "list-b.jsonl")
    with (fixtures_dir / "list-b.jsonl").open("r", encoding="utf-8") as fh:
        messages, report = parse_message_records(fh, "xmlschema")
    assert (good, bad) == (7, 1)
    assert report.accepted == good == 7
    assert report.skipped == bad == 1
    assert report.skip_reasons[0][0] == 4  # line number of the bad date


def test_subject_key_stripping():
    assert subject_key_of("Re: [xsl] RE: Fwd: Grouping") == "grouping"
    assert subject_key_of("  [xquery] Topic  ") == "topic"
    assert subject_key_of("Update [urgent] now") == "update [urgent] now"
    assert subject_key_of("fw:fwd:re: deep") == "deep"


@given(st.text(max_size=80))
def test_subject_key_reply_invariance(subject):
    assert subject_key_of("Re: " + subject) == subject_key_of(subject)


def test_clean_empty():
    assert clean_messages([]) == ([], clean_messages([])[1])


def test_clean_idempotent(corpus_messages):
    once, _ = clean_messages(corpus_messages)
    twice, report = clean_messages(once)
    assert twice == once
    assert report.duplicates_dropped == 0


def test_parse_deterministic(fixtures_dir):
    def run():
        with (fixtures_dir / "corpus.mbox").open("rb") as fh:
            messages, _ = parse_mbox(fh, "xquery")
        return [
            (m.message_id, m.sender.key, m.sent_at.isoformat(), m.subject_key, tuple(m.references))
            for m in messages
        ]

    assert run() == run()


def test_conservation(fixtures_dir):
    with (fixtures_dir / "list-a.mbox").open("rb") as fh:
        messages, report = parse_mbox(fh, "xsl")
    assert len(messages) == report.accepted
    cleaned, clean_report = clean_messages(messages)
    assert clean_report.accepted + clean_report.duplicates_dropped == len(messages)
