"""HTTP API over the warehouse for the web UI and other clients.

All GET endpoints are read-only and return byte-identical bodies for a
fixed warehouse. Ingest takes the warehouse write lock; a second
concurrent ingest gets 409 instead of waiting.
"""

from __future__ import annotations

import io
from datetime import date
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from filelock import Timeout

from mailweave import store
from mailweave.dsl import FIELD_TYPES, QuerySpec, Predicate, parse_query
from mailweave.engine import execute
from mailweave.errors import (
    MailweaveError,
    QueryError,
    QuerySyntaxError,
    UnknownRecordError,
)
from mailweave.export import ExportTarget, export_graph, export_table
from mailweave.graphs import SocialGraph, answering_profile, coauthor_institution_graph, social_graph
from mailweave.identity import Institution
from mailweave.ingest import clean_messages, parse_mbox, parse_message_records
from mailweave.tables import (
    ResultTable,
    posts_per_domain,
    posts_per_institution,
    posts_per_person,
    posters_per_domain,
    report_institution_table,
)
from mailweave.threads import build_threads
from mailweave.warehouse import Warehouse

TABLE_BUILDERS = {
    "posts-per-person": lambda wh, registry: posts_per_person(wh),
    "posts-per-domain": lambda wh, registry: posts_per_domain(wh),
    "posts-per-institution": posts_per_institution,
    "posters-per-domain": lambda wh, registry: posters_per_domain(wh),
    "report-institutions": lambda wh, registry: report_institution_table(wh),
}

GRAPH_MEDIA_TYPES = {
    "graphml": "application/xml",
    "dot": "text/vnd.graphviz",
    "pajek": "text/plain",
    "csv": "text/csv",
    "jsonl": "application/x-ndjson",
}


def _error(status: int, code: str, message: str, location=None) -> JSONResponse:
    body = {"code": code, "message": message}
    if location is not None:
        body["location"] = location
    return JSONResponse(status_code=status, content=body)


def _table_body(table: ResultTable) -> dict:
    return {
        "columns": table.columns,
        "rows": [list(row) for row in table.rows],
        "total_row_count": table.total_row_count,
    }


def _graph_body(graph: SocialGraph) -> dict:
    return {
        "directed": graph.directed,
        "nodes": [{"id": n, "label": graph.label_of(n)} for n in graph.sorted_nodes()],
        "edges": [
            {"source": a, "target": b, "weight": w} for a, b, w in graph.sorted_edges()
        ],
    }


def _parse_day(value: str | None):
    return date.fromisoformat(value) if value else None


def create_app(
    warehouse_path: str | Path,
    registry: list[Institution] | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="mailweave", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = registry or []
    root = Path(warehouse_path)

    def warehouse() -> Warehouse:
        # Re-open per request so readers always see the latest index.
        return Warehouse(root)

    @app.exception_handler(MailweaveError)
    async def handle_domain_error(request: Request, exc: MailweaveError):
        if isinstance(exc, QuerySyntaxError):
            return _error(400, "syntax_error", str(exc), {"line": exc.line, "column": exc.column})
        if isinstance(exc, QueryError):
            return _error(400, "query_error", str(exc))
        if isinstance(exc, UnknownRecordError):
            return _error(404, "not_found", str(exc))
        return _error(400, "data_error", str(exc))

    @app.exception_handler(OSError)
    async def handle_io_error(request: Request, exc: OSError):
        return _error(500, "io_error", str(exc))

    @app.post("/query")
    async def run_query(payload: dict):
        if "dsl" in payload:
            spec = parse_query(str(payload["dsl"]))
        else:
            spec = _spec_from_object(payload)
        return _table_body(execute(spec, warehouse(), registry))

    @app.get("/persons/{person_id}")
    async def person_snapshot(person_id: str, asof: str | None = None, tx: str | None = None):
        wh = warehouse()
        valid = _parse_day(asof) or date.today()
        view = wh.snapshot_asof(person_id, valid, _parse_day(tx))
        return {"record_id": person_id, "schema": "person", "fields": view}

    @app.get("/graphs/{kind}")
    async def graphs(
        kind: str,
        level: str = "person",
        person: str | None = None,
    ):
        wh = warehouse()
        if kind == "social":
            graph = _social(wh, level, registry)
        elif kind == "answering":
            if not person:
                return _error(400, "missing_parameter", "answering profiles need ?person=")
            if not wh.has_record(person):
                return _error(404, "not_found", f"no record {person!r}")
            graph = answering_profile(wh, person)
        elif kind == "coauthors":
            graph = coauthor_institution_graph(wh)
        else:
            return _error(404, "not_found", f"unknown graph kind {kind!r}")
        return _graph_body(graph)

    @app.get("/tables/{kind}")
    async def tables(kind: str):
        builder = TABLE_BUILDERS.get(kind)
        if builder is None:
            return _error(404, "not_found", f"unknown table kind {kind!r}")
        return _table_body(builder(warehouse(), registry))

    @app.post("/ingest")
    async def ingest(file: UploadFile = File(...), list_id: str = Form(...)):
        wh = warehouse()
        lock = wh.write_lock
        try:
            lock.acquire(timeout=0)
        except Timeout:
            return _error(409, "ingest_busy", "another ingest is in progress")
        try:
            raw = await file.read()
            name = (file.filename or "").lower()
            if name.endswith((".jsonl", ".ndjson", ".json")):
                messages, report = parse_message_records(
                    io.StringIO(raw.decode("utf-8", errors="replace")), list_id
                )
            else:
                messages, report = parse_mbox(io.BytesIO(raw), list_id)
            cleaned, clean_report = clean_messages(messages)
            report = report.after_clean(clean_report)
            store.store_messages(wh, cleaned)
        finally:
            lock.release()
        return {
            "accepted": report.accepted,
            "skipped": report.skipped,
            "duplicates_dropped": report.duplicates_dropped,
            "skip_reasons": [[offset, reason] for offset, reason in report.skip_reasons],
        }

    @app.get("/export")
    async def export(kind: str, format: str, level: str = "person", person: str | None = None):
        import tempfile

        wh = warehouse()
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / f"{kind}.{format}"
            if kind in ("social", "answering", "coauthors"):
                if kind == "social":
                    graph = _social(wh, level, registry)
                elif kind == "coauthors":
                    graph = coauthor_institution_graph(wh)
                else:
                    if not person:
                        return _error(400, "missing_parameter", "answering export needs &person=")
                    graph = answering_profile(wh, person)
                export_graph(graph, ExportTarget(format=format, path=out))
            elif kind in TABLE_BUILDERS:
                export_table(TABLE_BUILDERS[kind](wh, registry), ExportTarget(format=format, path=out))
            else:
                return _error(404, "not_found", f"unknown export kind {kind!r}")
            text = out.read_text(encoding="utf-8")
        return PlainTextResponse(
            text,
            media_type=GRAPH_MEDIA_TYPES.get(format, "text/plain"),
            headers={"Content-Disposition": f'attachment; filename="{kind}.{format}"'},
        )

    dist = Path(frontend_dir) if frontend_dir else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        app.mount("/", StaticFiles(directory=str(dist), html=True), name="ui")

    return app


def _social(wh: Warehouse, level: str, registry) -> SocialGraph:
    messages = store.load_messages(wh)
    persons = store.load_persons(wh)
    resolution = store.address_to_person(persons)
    threads = build_threads(messages, resolution)
    graph = social_graph(threads, level, messages=messages, registry=registry)
    if level == "person":
        for p in persons:
            if p.canonical_name:
                graph.labels.setdefault(p.person_id, p.canonical_name)
    return graph


def _spec_from_object(payload: dict) -> QuerySpec:
    source = payload.get("source")
    if source not in FIELD_TYPES:
        raise QueryError(f"unknown source {source!r}")
    predicates = []
    for raw in payload.get("predicates", []):
        literal = raw.get("literal")
        if isinstance(literal, str):
            try:
                literal = date.fromisoformat(literal)
            except ValueError:
                pass
        predicates.append(Predicate(path=raw["path"], op=raw["op"], literal=literal))
    order = payload.get("order")
    return QuerySpec(
        source=source,
        predicates=predicates,
        asof_valid=_parse_day(payload.get("asof_valid")),
        asof_transaction=_parse_day(payload.get("asof_transaction")),
        group_by=payload.get("group_by"),
        aggregate=payload.get("aggregate"),
        distinct_path=payload.get("distinct_path"),
        order=(order[0], order[1]) if order else None,
        limit=payload.get("limit"),
    )
