"""Bitemporal warehouse and social-network analytics for mailing lists."""

from mailweave.addresses import RawAddress, domain_of, normalize_address
from mailweave.dsl import QuerySpec, parse_query
from mailweave.engine import execute
from mailweave.export import ExportTarget, export_graph, export_table
from mailweave.graphs import SocialGraph, answering_profile, coauthor_institution_graph, social_graph
from mailweave.identity import (
    Institution,
    InstitutionKind,
    Person,
    ResolutionRules,
    load_registry,
    map_institution,
    resolve_persons,
)
from mailweave.ingest import (
    EmailMessage,
    IngestReport,
    clean_messages,
    parse_mbox,
    parse_message_records,
    subject_key_of,
)
from mailweave.tables import (
    ResultTable,
    posts_per_domain,
    posts_per_institution,
    posts_per_person,
    posters_per_domain,
    report_institution_table,
)
from mailweave.temporal import (
    Record,
    TemporalAnnotation,
    TemporalBound,
    TemporalValue,
    assert_fact,
    retract_fact,
    snapshot_asof,
)
from mailweave.threads import Thread, build_threads, resolve_parents
from mailweave.warehouse import Warehouse
from mailweave.xmlio import parse_record, serialize_record

__version__ = "0.1.0"

__all__ = [
    "EmailMessage",
    "ExportTarget",
    "IngestReport",
    "Institution",
    "InstitutionKind",
    "Person",
    "QuerySpec",
    "RawAddress",
    "Record",
    "ResolutionRules",
    "ResultTable",
    "SocialGraph",
    "TemporalAnnotation",
    "TemporalBound",
    "TemporalValue",
    "Thread",
    "Warehouse",
    "answering_profile",
    "assert_fact",
    "build_threads",
    "clean_messages",
    "coauthor_institution_graph",
    "domain_of",
    "execute",
    "export_graph",
    "export_table",
    "load_registry",
    "map_institution",
    "normalize_address",
    "parse_mbox",
    "parse_message_records",
    "parse_query",
    "parse_record",
    "posts_per_domain",
    "posts_per_institution",
    "posts_per_person",
    "posters_per_domain",
    "report_institution_table",
    "resolve_parents",
    "resolve_persons",
    "retract_fact",
    "serialize_record",
    "snapshot_asof",
    "social_graph",
    "subject_key_of",
]
