"""Keyed record storage: one XML document per record plus an index file.

Layout: ``{root}/{schema}/{encoded record id}.xml`` with ``{root}/index``
mapping ids to files. Writes replace whole files atomically and update
the index last, so readers always see a consistent warehouse. A lock
file serializes writers (single-writer, multi-reader).
"""

from __future__ import annotations

import os
import tempfile
from datetime import date
from pathlib import Path
from urllib.parse import quote, unquote

from filelock import FileLock

from mailweave.errors import UnknownRecordError
from mailweave.temporal import (
    Record,
    SCHEMAS,
    TemporalBound,
    assert_fact,
    retract_fact,
    snapshot_asof,
)
from mailweave.xmlio import parse_record, serialize_record

_SAFE_FILENAME_CHARS = "@._-+"


def _encode_id(record_id: str) -> str:
    return quote(record_id, safe=_SAFE_FILENAME_CHARS)


def _decode_id(name: str) -> str:
    return unquote(name)


class Warehouse:
    """A directory of temporalized records, opened read-write."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._index_path = self.root / "index"
        self._index: dict[str, str] = {}
        self._load_index()

    @property
    def write_lock(self) -> FileLock:
        return FileLock(str(self.root / ".lock"))

    def _load_index(self) -> None:
        self._index.clear()
        if self._index_path.exists():
            for line in self._index_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                schema, encoded = line.split("\t", 1)
                self._index[_decode_id(encoded)] = schema
        # Self-heal: records written before a crash cut the index update.
        for schema_dir in self.root.iterdir():
            if schema_dir.is_dir() and schema_dir.name in SCHEMAS:
                for doc in schema_dir.glob("*.xml"):
                    self._index.setdefault(_decode_id(doc.stem), schema_dir.name)

    def _write_index(self) -> None:
        lines = [f"{schema}\t{_encode_id(rid)}" for rid, schema in sorted(self._index.items())]
        self._atomic_write(self._index_path, "\n".join(lines) + "\n" if lines else "")

    def _atomic_write(self, path: Path, text: str) -> None:
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _record_path(self, schema: str, record_id: str) -> Path:
        return self.root / schema / (_encode_id(record_id) + ".xml")

    def put_record(self, record: Record) -> None:
        """Store (or replace) a record; atomic per record, index last."""
        path = self._record_path(record.schema, record.record_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        self._atomic_write(path, serialize_record(record))
        self._index[record.record_id] = record.schema
        self._write_index()

    def get_record(self, record_id: str) -> Record:
        schema = self._index.get(record_id)
        if schema is None:
            raise UnknownRecordError(f"no record {record_id!r}")
        return parse_record(self._record_path(schema, record_id).read_text(encoding="utf-8"))

    def has_record(self, record_id: str) -> bool:
        return record_id in self._index

    def list_ids(self, schema: str | None = None) -> list[str]:
        return sorted(rid for rid, s in self._index.items() if schema is None or s == schema)

    def list_records(self, schema: str | None = None) -> list[Record]:
        return [self.get_record(rid) for rid in self.list_ids(schema)]

    # Temporal operations addressed by record id.

    def assert_fact(
        self,
        record_id: str,
        field: str,
        value: str,
        start: date,
        end: TemporalBound,
        event_type: str = "valid",
        asserted_at: date | None = None,
        source: str | None = None,
    ) -> str:
        record = self.get_record(record_id)
        ann_id = assert_fact(record, field, value, start, end, event_type, asserted_at, source)
        self.put_record(record)
        return ann_id

    def retract_fact(
        self,
        record_id: str,
        field: str,
        target_annotation_id: str,
        corrected_end: TemporalBound,
        asserted_at: date,
    ) -> str:
        record = self.get_record(record_id)
        ann_id = retract_fact(record, field, target_annotation_id, corrected_end, asserted_at)
        self.put_record(record)
        return ann_id

    def snapshot_asof(
        self,
        record_id: str,
        valid_date: date,
        transaction_date: date | None = None,
    ) -> dict[str, list[str]]:
        return snapshot_asof(self.get_record(record_id), valid_date, transaction_date)
