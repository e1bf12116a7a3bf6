"""Converters to external sociology formats.

Graphs go to GraphML, DOT, or Pajek; tables to CSV (RFC 4180) or line
records. Nodes and edges are written sorted so identical inputs yield
byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from mailweave.errors import ExportError
from mailweave.graphs import SocialGraph
from mailweave.tables import ResultTable

GRAPH_FORMATS = ("graphml", "dot", "pajek")
TABLE_FORMATS = ("csv", "jsonl")


@dataclass
class ExportTarget:
    format: str
    path: str | Path
    label_field: str = "label"
    weight_attribute: str = "weight"

    def __post_init__(self):
        if self.format not in GRAPH_FORMATS + TABLE_FORMATS:
            raise ExportError(f"unknown export format {self.format!r}")


def _graphml(graph: SocialGraph, target: ExportTarget) -> str:
    kind = "directed" if graph.directed else "undirected"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        f'  <key id="d0" for="node" attr.name={quoteattr(target.label_field)} attr.type="string"/>',
        f'  <key id="d1" for="edge" attr.name={quoteattr(target.weight_attribute)} attr.type="int"/>',
        f'  <graph id="G" edgedefault="{kind}">',
    ]
    for node in graph.sorted_nodes():
        lines.append(f"    <node id={quoteattr(node)}>")
        lines.append(f"      <data key=\"d0\">{escape(graph.label_of(node))}</data>")
        lines.append("    </node>")
    for i, (a, b, w) in enumerate(graph.sorted_edges()):
        lines.append(
            f"    <edge id=\"e{i}\" source={quoteattr(a)} target={quoteattr(b)}>"
        )
        lines.append(f"      <data key=\"d1\">{w}</data>")
        lines.append("    </edge>")
    lines += ["  </graph>", "</graphml>"]
    return "\n".join(lines) + "\n"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot(graph: SocialGraph, target: ExportTarget) -> str:
    keyword, arrow = ("digraph", "->") if graph.directed else ("graph", "--")
    lines = [f"{keyword} g {{"]
    for node in graph.sorted_nodes():
        lines.append(f"  {_dot_quote(node)} [label={_dot_quote(graph.label_of(node))}];")
    for a, b, w in graph.sorted_edges():
        lines.append(f"  {_dot_quote(a)} {arrow} {_dot_quote(b)} [{target.weight_attribute}={w}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _pajek(graph: SocialGraph, target: ExportTarget) -> str:
    # Pajek has a single name slot per vertex; the node id goes there so
    # re-imports keep identity even when two actors share a display name.
    nodes = graph.sorted_nodes()
    number = {node: i + 1 for i, node in enumerate(nodes)}
    lines = [f"*Vertices {len(nodes)}"]
    for node in nodes:
        lines.append(f'{number[node]} "{node.replace(chr(34), chr(39))}"')
    lines.append("*Arcs" if graph.directed else "*Edges")
    for a, b, w in graph.sorted_edges():
        lines.append(f"{number[a]} {number[b]} {w}")
    return "\n".join(lines) + "\n"


def export_graph(graph: SocialGraph, target: ExportTarget) -> Path:
    """Write a graph file; returns the path written."""
    if target.format not in GRAPH_FORMATS:
        raise ExportError(f"{target.format!r} is not a graph format")
    if not isinstance(graph, SocialGraph):
        raise ExportError("graph export needs a SocialGraph payload")
    renderers = {"graphml": _graphml, "dot": _dot, "pajek": _pajek}
    text = renderers[target.format](graph, target)
    path = Path(target.path)
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}")
    return path


def export_table(table: ResultTable, target: ExportTarget) -> Path:
    """Write a table file (CSV with header row, or line records)."""
    if target.format not in TABLE_FORMATS:
        raise ExportError(f"{target.format!r} is not a table format")
    if not isinstance(table, ResultTable):
        raise ExportError("table export needs a ResultTable payload")
    text = table.as_csv() if target.format == "csv" else table.as_records()
    path = Path(target.path)
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}")
    return path
