"""Walkthrough: bitemporal facts, a correction, and what each date knew.

John Doe ran XML Corp. We record his CEO interval, learn later that he
actually left a month earlier, and then ask the warehouse what it
believed at different points in time. The correction never erases the
original interval; it supersedes it, so old states of knowledge remain
answerable.

Run from the repository root:  python demos/02_temporal_story.py
"""

import tempfile
from datetime import date
from pathlib import Path

from mailweave import Record, TemporalBound, Warehouse

with tempfile.TemporaryDirectory() as tmp:
    wh = Warehouse(Path(tmp) / "warehouse")
    wh.put_record(Record(record_id="john-doe", schema="person"))

    # 2004-06-06: we are told John was CEO from 2001 through 2003, and
    # again (a second stint) from mid-2004 with no known end.
    first = wh.assert_fact(
        "john-doe", "function", "XML Corp. CEO",
        start=date(2001, 1, 1), end=TemporalBound.at(date(2003, 12, 31)),
        asserted_at=date(2004, 6, 6),
    )
    wh.assert_fact(
        "john-doe", "function", "XML Corp. CEO",
        start=date(2004, 6, 6), end=TemporalBound.running(),
        asserted_at=date(2004, 6, 6),
    )

    # 2005-04-10: contradictory information arrives; he left on
    # 2003-11-30. The first interval is corrected, not rewritten.
    wh.retract_fact(
        "john-doe", "function", first,
        corrected_end=TemporalBound.at(date(2003, 11, 30)),
        asserted_at=date(2005, 4, 10),
    )

    def show(valid, tx=None):
        view = wh.snapshot_asof("john-doe", valid, tx)
        knowledge = tx.isoformat() if tx else "latest"
        print(f"  was CEO on {valid}? (knowledge of {knowledge}): "
              f"{view.get('function', ['no'])[0] if view else 'no'}")

    print("after the correction:")
    show(date(2002, 6, 1))                      # mid-first-stint: yes
    show(date(2004, 7, 1))                      # second stint: yes
    show(date(2003, 12, 15))                    # the retracted tail: no

    print("replaying what we believed before the correction arrived:")
    show(date(2003, 12, 15), date(2004, 12, 31))  # still yes back then
    show(date(2003, 12, 15), date(2005, 4, 10))   # gone the day we learned

    # The full history, corrections included, lives in the record's XML.
    print("\nserialized record:")
    print((Path(tmp) / "warehouse" / "person" / "john-doe.xml").read_text())
