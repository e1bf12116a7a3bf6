"""Participation graphs: who shares threads with whom, who answers whom.

Undirected edges are stored with endpoints in ascending order and never
as self-loops; weights count threads (co-participation) or messages
(answering profiles).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Iterable

from mailweave.addresses import domain_of
from mailweave.errors import UnknownRecordError
from mailweave.identity import Institution, map_institution
from mailweave.ingest import EmailMessage
from mailweave.store import address_to_person, load_messages, load_persons
from mailweave.temporal import snapshot_asof
from mailweave.threads import Thread, resolve_parents
from mailweave.warehouse import Warehouse


@dataclass
class SocialGraph:
    directed: bool = False
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    labels: dict[str, str] = field(default_factory=dict)

    def add_node(self, node: str, label: str | None = None) -> None:
        self.nodes.add(node)
        if label:
            self.labels[node] = label

    def add_edge(self, a: str, b: str, weight: int = 1) -> None:
        if a == b:
            return
        if not self.directed and b < a:
            a, b = b, a
        self.nodes.add(a)
        self.nodes.add(b)
        self.edges[(a, b)] = self.edges.get((a, b), 0) + weight

    def sorted_nodes(self) -> list[str]:
        return sorted(self.nodes)

    def sorted_edges(self) -> list[tuple[str, str, int]]:
        return [(a, b, w) for (a, b), w in sorted(self.edges.items())]

    def label_of(self, node: str) -> str:
        return self.labels.get(node, node)


def social_graph(
    threads: Iterable[Thread],
    level: str = "person",
    messages: Iterable[EmailMessage] | None = None,
    registry: Iterable[Institution] | None = None,
) -> SocialGraph:
    """Undirected co-participation graph over threads.

    weight(a, b) counts threads in which both a and b posted. At
    institution level, actor identity is the sender domain's owning
    institution at message time; ``messages`` is required there.
    """
    graph = SocialGraph(directed=False)
    if level == "person":
        participant_sets = [t.participants for t in threads]
    elif level == "institution":
        if messages is None:
            raise ValueError("institution-level graph needs the messages")
        registry = list(registry or [])
        by_id = {m.message_id: m for m in messages}
        participant_sets = []
        for t in threads:
            insts = set()
            for mid in t.message_ids:
                inst = map_institution(domain_of(by_id[mid].sender), registry)
                insts.add(inst.institution_id)
                graph.labels.setdefault(inst.institution_id, inst.name)
            participant_sets.append(frozenset(insts))
    else:
        raise ValueError(f"unknown graph level {level!r}")

    for participants in participant_sets:
        for node in participants:
            graph.add_node(node)
        members = sorted(participants)
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                graph.add_edge(a, b, 1)
    return graph


def answering_profile(wh: Warehouse, person_id: str) -> SocialGraph:
    """Directed graph of whom a person's messages answer.

    Edge person -> q weighs messages by the person whose resolved parent
    message was authored by q; replies to the person's own messages are
    excluded.
    """
    messages = load_messages(wh)
    resolution = address_to_person(load_persons(wh))
    by_id = {m.message_id: m for m in messages}
    parents = resolve_parents(messages)

    def owner(msg: EmailMessage) -> str:
        return resolution.get(msg.sender.key, msg.sender.key)

    graph = SocialGraph(directed=True)
    graph.add_node(person_id)
    for msg in messages:
        if owner(msg) != person_id:
            continue
        parent_id = parents.get(msg.message_id)
        if parent_id is None:
            continue
        target = owner(by_id[parent_id])
        if target == person_id:
            continue
        graph.add_edge(person_id, target, 1)
    return graph


def _report_institutions(wh: Warehouse, report) -> set[str]:
    """Institutions of a report's authors as of its publication date."""
    pub = date.fromisoformat(report.fields["pub_date"][0].value)
    insts: set[str] = set()
    for tv in report.fields.get("author", []):
        try:
            person = wh.get_record(tv.value)
        except UnknownRecordError:
            insts.add("Unknown")
            continue
        view = snapshot_asof(person, pub)
        affiliated = view.get("affiliation", [])
        if affiliated:
            insts.update(affiliated)
        else:
            insts.add("Unknown")
    return insts


def coauthor_institution_graph(wh: Warehouse) -> SocialGraph:
    """Undirected institution graph: weight(I, J) counts reports with at
    least one author affiliated with I and one with J at publication."""
    graph = SocialGraph(directed=False)
    for report in wh.list_records("report"):
        insts = sorted(_report_institutions(wh, report))
        for inst in insts:
            graph.add_node(inst)
        for i, a in enumerate(insts):
            for b in insts[i + 1 :]:
                graph.add_edge(a, b, 1)
    for inst_id in graph.nodes:
        if wh.has_record(inst_id):
            name = wh.get_record(inst_id).fields.get("name")
            if name:
                graph.labels.setdefault(inst_id, name[0].value)
    return graph
