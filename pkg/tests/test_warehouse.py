from __future__ import annotations

from datetime import date

import pytest

from mailweave.errors import UnknownRecordError
from mailweave.temporal import Record, TemporalBound
from mailweave.warehouse import Warehouse

D = date.fromisoformat


def make_record(record_id="john-doe", schema="person") -> Record:
    record = Record(record_id=record_id, schema=schema)
    from mailweave.temporal import assert_fact

    assert_fact(record, "name", "Doe", D("2001-01-01"), TemporalBound.running(),
                asserted_at=D("2004-06-06"))
    return record


def test_put_then_get_roundtrip(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    record = make_record()
    wh.put_record(record)
    assert wh.get_record("john-doe") == record


def test_get_unknown_raises(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    with pytest.raises(UnknownRecordError):
        wh.get_record("missing")


def test_layout_on_disk(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    wh.put_record(make_record())
    assert (tmp_path / "wh" / "person" / "john-doe.xml").exists()
    assert (tmp_path / "wh" / "index").read_text().strip() == "person\tjohn-doe"


def test_awkward_ids_encoded(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    awkward = "we/ird id?@x.com"
    wh.put_record(make_record(record_id=awkward))
    reopened = Warehouse(tmp_path / "wh")
    assert reopened.get_record(awkward).record_id == awkward
    assert not (tmp_path / "wh" / "person" / awkward).exists()


def test_list_records_filters_by_schema(corpus_warehouse):
    assert len(corpus_warehouse.list_records("person")) == 8
    assert len(corpus_warehouse.list_records("email")) == 18
    assert len(corpus_warehouse.list_records()) == 26


def test_reopen_sees_same_records(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    wh.put_record(make_record())
    wh.put_record(make_record("acme", "institution"))
    again = Warehouse(tmp_path / "wh")
    assert again.list_ids() == ["acme", "john-doe"]
    assert again.list_ids("institution") == ["acme"]


def test_index_self_heals(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    wh.put_record(make_record())
    (tmp_path / "wh" / "index").unlink()
    healed = Warehouse(tmp_path / "wh")
    assert healed.list_ids() == ["john-doe"]


def test_warehouse_level_temporal_ops(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    wh.put_record(Record(record_id="p1", schema="person"))
    first = wh.assert_fact("p1", "function", "CEO", D("2001-01-01"),
                           TemporalBound.at(D("2003-12-31")), asserted_at=D("2004-06-06"))
    wh.retract_fact("p1", "function", first, TemporalBound.at(D("2003-11-30")), D("2005-04-10"))
    assert wh.snapshot_asof("p1", D("2002-06-01")) == {"function": ["CEO"]}
    assert wh.snapshot_asof("p1", D("2003-12-15"), D("2004-12-31")) == {"function": ["CEO"]}
    assert wh.snapshot_asof("p1", D("2003-12-15"), D("2005-04-10")) == {}


def test_assert_on_unknown_record(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    with pytest.raises(UnknownRecordError):
        wh.assert_fact("ghost", "f", "v", D("2001-01-01"), TemporalBound.running())


def test_serialization_byte_stable_across_reopen(tmp_path):
    wh = Warehouse(tmp_path / "wh")
    for i in range(3):
        wh.put_record(make_record(f"p{i}"))
    paths = sorted((tmp_path / "wh" / "person").glob("*.xml"))
    before = [p.read_bytes() for p in paths]
    again = Warehouse(tmp_path / "wh")
    for i in range(3):
        again.put_record(again.get_record(f"p{i}"))
    assert [p.read_bytes() for p in paths] == before
