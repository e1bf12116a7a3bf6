"""Command line pipeline: ingest, resolve, query, graph, export, serve.

Exit codes: 0 success, 1 usage, 2 data error, 3 io failure. All output
is deterministic given the warehouse bytes and the arguments.
"""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from mailweave import store
from mailweave.dsl import parse_query
from mailweave.engine import execute
from mailweave.errors import (
    ExportError,
    IngestError,
    MailweaveError,
)
from mailweave.export import ExportTarget, export_graph, export_table
from mailweave.graphs import answering_profile, coauthor_institution_graph, social_graph
from mailweave.identity import ResolutionRules, load_registry, resolve_persons
from mailweave.ingest import IngestReport, clean_messages, parse_mbox, parse_message_records
from mailweave.tables import (
    posts_per_domain,
    posts_per_institution,
    posts_per_person,
    posters_per_domain,
    report_institution_table,
)
from mailweave.threads import build_threads
from mailweave.warehouse import Warehouse

GRAPH_KINDS = ("social", "answering", "coauthors")
TABLE_KINDS = (
    "posts-per-person",
    "posts-per-domain",
    "posts-per-institution",
    "posters-per-domain",
    "report-institutions",
)


def _parse_files(files: tuple[str, ...], list_id: str):
    messages = []
    report = IngestReport()
    for name in files:
        path = Path(name)
        suffix = path.suffix.lower()
        if suffix in (".jsonl", ".ndjson", ".json"):
            with path.open("r", encoding="utf-8") as fh:
                parsed, file_report = parse_message_records(fh, list_id)
        else:
            with path.open("rb") as fh:
                parsed, file_report = parse_mbox(fh, list_id)
        messages.extend(parsed)
        report = report.merge(file_report)
    cleaned, clean_report = clean_messages(messages)
    return cleaned, report.after_clean(clean_report)


def _load_rules(value: str | None) -> ResolutionRules:
    if not value:
        return ResolutionRules()
    if Path(value).exists():
        cfg = json.loads(Path(value).read_text(encoding="utf-8"))
        return ResolutionRules(
            rules=tuple(cfg.get("rules", ["exact_address", "name_and_domain"])),
            fold_case=cfg.get("fold_case", True),
            strip_diacritics=cfg.get("strip_diacritics", True),
            sort_tokens=cfg.get("sort_tokens", True),
        )
    return ResolutionRules.from_names(v.strip() for v in value.split(","))


@click.group()
@click.option(
    "--warehouse",
    envvar="MAILWEAVE_WAREHOUSE",
    type=click.Path(file_okay=False),
    help="Warehouse directory (env MAILWEAVE_WAREHOUSE).",
)
@click.option("--registry", type=click.Path(exists=True, dir_okay=False), help="Institution registry file.")
@click.option("--rules", help="Resolution rules: comma-separated names or a config file path.")
@click.option("-v", "--verbose", count=True)
@click.pass_context
def cli(ctx, warehouse, registry, rules, verbose):
    """Temporal mailing-list warehouse and analytics."""
    ctx.ensure_object(dict)
    ctx.obj["warehouse"] = warehouse
    ctx.obj["registry"] = load_registry(registry) if registry else []
    ctx.obj["rules"] = _load_rules(rules)
    ctx.obj["verbose"] = verbose


def _open_warehouse(ctx) -> Warehouse:
    path = ctx.obj.get("warehouse")
    if not path:
        raise click.UsageError("a warehouse is required; pass --warehouse or set MAILWEAVE_WAREHOUSE")
    return Warehouse(path)


@cli.command("parse-check")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--list", "list_id", required=True, help="Mailing list id.")
def cmd_parse_check(files, list_id):
    """Parse archives and print the ingest report without storing."""
    _, report = _parse_files(files, list_id)
    click.echo(report.as_table())


@cli.command("ingest")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--list", "list_id", required=True, help="Mailing list id.")
@click.pass_context
def cmd_ingest(ctx, files, list_id):
    """Parse archives, clean them, and store the messages."""
    wh = _open_warehouse(ctx)
    messages, report = _parse_files(files, list_id)
    with wh.write_lock:
        store.store_messages(wh, messages)
    click.echo(report.as_table())


@cli.command("resolve")
@click.option("--asserted-at", type=click.DateTime(["%Y-%m-%d"]), default=None,
              help="Transaction date for the person facts (default: last message date).")
@click.pass_context
def cmd_resolve(ctx, asserted_at):
    """Resolve sender addresses into persons and store them."""
    wh = _open_warehouse(ctx)
    messages = store.load_messages(wh)
    persons = resolve_persons(messages, ctx.obj["rules"])
    day = asserted_at.date() if asserted_at else None
    with wh.write_lock:
        count = store.store_persons(wh, persons, messages, day)
        if ctx.obj["registry"]:
            store.store_institutions(wh, ctx.obj["registry"], day or date.today())
    click.echo(f"resolved {count} persons from {len(messages)} messages")


@cli.command("query")
@click.argument("text")
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "jsonl"]), default="text")
@click.option("--asof", type=click.DateTime(["%Y-%m-%d"]), default=None, help="Default valid date.")
@click.option("--tx-asof", type=click.DateTime(["%Y-%m-%d"]), default=None, help="Default transaction date.")
@click.option("--limit", type=int, default=None, help="Default row limit.")
@click.pass_context
def cmd_query(ctx, text, fmt, asof, tx_asof, limit):
    """Run a DSL query and print the result table."""
    wh = _open_warehouse(ctx)
    spec = parse_query(text)
    if spec.asof_valid is None and asof:
        spec.asof_valid = asof.date()
    if spec.asof_transaction is None and tx_asof:
        spec.asof_transaction = tx_asof.date()
    if spec.limit is None and limit:
        spec.limit = limit
    table = execute(spec, wh, ctx.obj["registry"])
    if fmt == "csv":
        click.echo(table.as_csv(), nl=False)
    elif fmt == "jsonl":
        click.echo(table.as_records(), nl=False)
    elif table.columns == ["key", "count"] and len(table.rows) == 1:
        click.echo(str(table.rows[0][1]))  # bare aggregate prints the number
    else:
        click.echo(table.as_text())


def _build_graph(ctx, wh, kind, level, person):
    if kind == "social":
        messages = store.load_messages(wh)
        resolution = store.address_to_person(store.load_persons(wh))
        threads = build_threads(messages, resolution)
        graph = social_graph(threads, level, messages=messages, registry=ctx.obj["registry"])
        if level == "person":
            for p in store.load_persons(wh):
                if p.canonical_name:
                    graph.labels.setdefault(p.person_id, p.canonical_name)
        return graph
    if kind == "answering":
        if not person:
            raise click.UsageError("--person is required for answering profiles")
        return answering_profile(wh, person)
    return coauthor_institution_graph(wh)


@cli.command("graph")
@click.argument("kind", type=click.Choice(GRAPH_KINDS))
@click.option("--level", type=click.Choice(["person", "institution"]), default="person")
@click.option("--person", default=None, help="Person id for answering profiles.")
@click.option("--format", "fmt", type=click.Choice(["text", "graphml", "dot", "pajek"]), default="text")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def cmd_graph(ctx, kind, level, person, fmt, out):
    """Build a graph and print it or write it to a file."""
    wh = _open_warehouse(ctx)
    graph = _build_graph(ctx, wh, kind, level, person)
    if fmt == "text" and not out:
        for a, b, w in graph.sorted_edges():
            arrow = "->" if graph.directed else "--"
            click.echo(f"{a} {arrow} {b} [{w}]")
        return
    if not out:
        raise click.UsageError("--out is required for file formats")
    export_graph(graph, ExportTarget(format=fmt, path=out))
    click.echo(out)


@cli.command("export")
@click.argument("kind", type=click.Choice(GRAPH_KINDS + TABLE_KINDS))
@click.option("--format", "fmt", required=True,
              type=click.Choice(["graphml", "dot", "pajek", "csv", "jsonl"]))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--level", type=click.Choice(["person", "institution"]), default="person")
@click.option("--person", default=None)
@click.pass_context
def cmd_export(ctx, kind, fmt, out, level, person):
    """Export a graph or table for external tools."""
    wh = _open_warehouse(ctx)
    if kind in GRAPH_KINDS:
        graph = _build_graph(ctx, wh, kind, level, person)
        export_graph(graph, ExportTarget(format=fmt, path=out))
    else:
        tables = {
            "posts-per-person": lambda: posts_per_person(wh),
            "posts-per-domain": lambda: posts_per_domain(wh),
            "posts-per-institution": lambda: posts_per_institution(wh, ctx.obj["registry"]),
            "posters-per-domain": lambda: posters_per_domain(wh),
            "report-institutions": lambda: report_institution_table(wh),
        }
        export_table(tables[kind](), ExportTarget(format=fmt, path=out))
    click.echo(out)


@cli.command("serve")
@click.option("--port", type=int, default=8645)
@click.option("--host", default="127.0.0.1")
@click.pass_context
def cmd_serve(ctx, port, host):
    """Serve the HTTP API (and the web UI when built)."""
    import uvicorn

    from mailweave.service import create_app

    path = ctx.obj.get("warehouse")
    if not path:
        raise click.UsageError("a warehouse is required; pass --warehouse or set MAILWEAVE_WAREHOUSE")
    app = create_app(path, registry=ctx.obj["registry"])
    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except (IngestError, ExportError, OSError) as exc:
        click.echo(f"error[io]: {exc}", err=True)
        return 3
    except MailweaveError as exc:
        click.echo(f"error[data]: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
