"""Canonical XML form for warehouse records.

Layout (documented in docs/warehouse-format.md): the root element is the
schema name with the record id as an attribute; each field element holds
value elements whose text is immediately followed by sibling
TemporalInformation elements. Newlines, carriage returns, and tabs in
value text are entity-escaped so every value stays on one physical line
and serialization is byte-stable.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from datetime import date

from mailweave.errors import RecordSchemaError
from mailweave.temporal import (
    Record,
    SCHEMAS,
    TemporalAnnotation,
    TemporalBound,
    TemporalValue,
    validate_record,
)

# Characters XML 1.0 cannot represent even as entities.
_ILLEGAL_XML_RE = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f]")

_TEXT_ENTITIES = {
    "&": "&amp;",
    "<": "&lt;",
    ">": "&gt;",
    "\n": "&#10;",
    "\r": "&#13;",
    "\t": "&#9;",
}


def _escape(text: str, *, attribute: bool = False) -> str:
    if _ILLEGAL_XML_RE.search(text):
        raise RecordSchemaError("control characters cannot be stored in XML")
    out = []
    for ch in text:
        if ch in _TEXT_ENTITIES:
            out.append(_TEXT_ENTITIES[ch])
        elif attribute and ch == '"':
            out.append("&quot;")
        else:
            out.append(ch)
    return "".join(out)


def _bound_xml(tag: str, bound: TemporalBound) -> str:
    if bound.is_running:
        return f"<{tag}><running></running></{tag}>"
    return f"<{tag}><date>{bound.date.isoformat()}</date></{tag}>"


def _annotation_xml(ann: TemporalAnnotation) -> str:
    attrs = f' id="{_escape(ann.annotation_id, attribute=True)}" status="{ann.status}"'
    if ann.superseded_by is not None:
        attrs += f' superseded-by="{_escape(ann.superseded_by, attribute=True)}"'
    parts = [
        f"<TemporalInformation{attrs}>",
        _bound_xml("start", TemporalBound.at(ann.start)),
        _bound_xml("end", ann.end),
        f"<type>{_escape(ann.event_type)}</type>",
        f"<asserted-at>{ann.asserted_at.isoformat()}</asserted-at>",
    ]
    if ann.source is not None:
        parts.append(f"<source>{_escape(ann.source)}</source>")
    parts.append("</TemporalInformation>")
    return "".join(parts)


def serialize_record(record: Record) -> str:
    """Render a record to its canonical XML text.

    Fields are written in sorted name order; value and annotation order
    is preserved. Equal records always produce identical bytes.
    """
    validate_record(record)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<{record.schema} id="{_escape(record.record_id, attribute=True)}">',
    ]
    for name in sorted(record.fields):
        lines.append(f'  <field name="{_escape(name, attribute=True)}">')
        for tv in record.fields[name]:
            body = _escape(tv.value) + "".join(_annotation_xml(a) for a in tv.annotations)
            lines.append(f"    <value>{body}</value>")
        lines.append("  </field>")
    lines.append(f"</{record.schema}>")
    return "\n".join(lines) + "\n"


def _parse_bound(el: ET.Element, tag: str) -> TemporalBound:
    children = list(el)
    if len(children) != 1:
        raise RecordSchemaError(f"{tag} must contain exactly one child")
    child = children[0]
    if child.tag == "running":
        return TemporalBound.running()
    if child.tag == "date":
        try:
            return TemporalBound.at(date.fromisoformat((child.text or "").strip()))
        except ValueError:
            raise RecordSchemaError(f"bad date {child.text!r} in {tag}")
    raise RecordSchemaError(f"unknown element {child.tag!r} in {tag}")


def _parse_annotation(el: ET.Element) -> TemporalAnnotation:
    ann_id = el.get("id")
    status = el.get("status")
    if not ann_id or status not in ("active", "superseded"):
        raise RecordSchemaError("TemporalInformation needs id and a valid status")
    start = end = event_type = asserted_at = None
    source = None
    for child in el:
        if child.tag == "start":
            start = _parse_bound(child, "start")
        elif child.tag == "end":
            end = _parse_bound(child, "end")
        elif child.tag == "type":
            event_type = child.text or ""
        elif child.tag == "asserted-at":
            try:
                asserted_at = date.fromisoformat((child.text or "").strip())
            except ValueError:
                raise RecordSchemaError(f"bad asserted-at {child.text!r}")
        elif child.tag == "source":
            source = child.text or ""
        else:
            raise RecordSchemaError(f"unknown element {child.tag!r} in TemporalInformation")
    if start is None or end is None or event_type is None or asserted_at is None:
        raise RecordSchemaError("TemporalInformation missing start/end/type/asserted-at")
    if start.is_running:
        raise RecordSchemaError("start bound must be a date")
    return TemporalAnnotation(
        annotation_id=ann_id,
        start=start.date,
        end=end,
        event_type=event_type,
        asserted_at=asserted_at,
        status=status,
        superseded_by=el.get("superseded-by"),
        source=source,
    )


def parse_record(text: str) -> Record:
    """Parse canonical XML back into a Record; inverse of serialize_record."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise RecordSchemaError(f"malformed XML: {exc}")
    if root.tag not in SCHEMAS:
        raise RecordSchemaError(f"unknown root element {root.tag!r}")
    record_id = root.get("id")
    if not record_id:
        raise RecordSchemaError("root element missing id attribute")
    fields: dict[str, list[TemporalValue]] = {}
    for field_el in root:
        if field_el.tag != "field":
            raise RecordSchemaError(f"unknown element {field_el.tag!r} under root")
        name = field_el.get("name")
        if name is None:
            raise RecordSchemaError("field element missing name attribute")
        values = fields.setdefault(name, [])
        for value_el in field_el:
            if value_el.tag != "value":
                raise RecordSchemaError(f"unknown element {value_el.tag!r} under field")
            annotations = []
            for ann_el in value_el:
                if ann_el.tag != "TemporalInformation":
                    raise RecordSchemaError(f"unknown element {ann_el.tag!r} under value")
                annotations.append(_parse_annotation(ann_el))
            values.append(TemporalValue(value=value_el.text or "", annotations=annotations))
    record = Record(record_id=record_id, schema=root.tag, fields=fields)
    validate_record(record)
    return record
