"""Text query language: FROM source, predicates, as-of dates, grouping.

Grammar (full EBNF in docs/dsl.md):

    query  := "FROM" source clause*
    clause := "WHERE" path op literal
            | "ASOF" date ("TX" date)?
            | "GROUP" "BY" path
            | "COUNT" ("DISTINCT" path)?
            | "ORDER" "BY" key ("ASC" | "DESC")?
            | "LIMIT" int

Keywords are case-insensitive; paths and literals are not.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date

from mailweave.errors import QueryFieldError, QuerySyntaxError

SOURCES = ("messages", "persons", "institutions", "reports")

OPS = ("=", "!=", "<", "<=", ">", ">=", "contains")

# Field paths queryable per source, with the literal type they compare to.
FIELD_TYPES: dict[str, dict[str, str]] = {
    "messages": {
        "message_id": "str",
        "list_id": "str",
        "sender": "str",
        "sender.person": "str",
        "sender.domain": "str",
        "sender.institution": "str",
        "sender_name": "str",
        "subject": "str",
        "subject_key": "str",
        "sent_at": "date",
        "in_reply_to": "str",
        "reference": "str",
        "recipient": "str",
        "body": "str",
    },
    "persons": {
        "person_id": "str",
        "name": "str",
        "address": "str",
        "function": "str",
        "functions": "str",
        "affiliation": "str",
        "affiliations": "str",
    },
    "institutions": {
        "institution_id": "str",
        "name": "str",
        "kind": "str",
        "domain": "str",
    },
    "reports": {
        "report_id": "str",
        "title": "str",
        "maturity": "str",
        "pub_date": "date",
        "author": "str",
    },
}

# Accepted spellings for fields whose stored name differs.
PATH_ALIASES = {"functions": "function", "affiliations": "affiliation"}


@dataclass(frozen=True)
class Predicate:
    path: str
    op: str
    literal: str | int | date


@dataclass
class QuerySpec:
    source: str
    predicates: list[Predicate] = field(default_factory=list)
    asof_valid: date | None = None
    asof_transaction: date | None = None
    group_by: str | None = None
    aggregate: str | None = None  # "count" | "count_distinct" | None
    distinct_path: str | None = None
    order: tuple[str, str] | None = None  # (key, "asc" | "desc")
    limit: int | None = None


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<date>\d{4}-\d{2}-\d{2})
  | (?P<number>\d+)
  | (?P<string>'[^']*'|"[^"]*")
  | (?P<op><=|>=|!=|=|<|>)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*)
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "from", "where", "asof", "tx", "group", "by",
    "count", "distinct", "order", "limit", "asc", "desc", "contains",
}


@dataclass(frozen=True)
class _Token:
    kind: str  # keyword | word | string | number | date | op | eof
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        token_text = m.group()
        if kind != "ws":
            if kind == "word" and token_text.lower() in KEYWORDS:
                tokens.append(_Token("keyword", token_text.lower(), line, col))
            elif kind == "string":
                tokens.append(_Token("string", token_text[1:-1], line, col))
            else:
                tokens.append(_Token(kind, token_text, line, col))
        newlines = token_text.count("\n")
        if newlines:
            line += newlines
            col = len(token_text) - token_text.rfind("\n")
        else:
            col += len(token_text)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.i]

    def _fail(self, expected: tuple[str, ...]):
        tok = self.current
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise QuerySyntaxError(f"unexpected {what}", tok.line, tok.column, expected)

    def take_keyword(self, *names: str) -> str:
        tok = self.current
        if tok.kind == "keyword" and tok.text in names:
            self.i += 1
            return tok.text
        self._fail(tuple(n.upper() for n in names))

    def peek_keyword(self, *names: str) -> bool:
        tok = self.current
        return tok.kind == "keyword" and tok.text in names

    def take(self, kind: str, expected: tuple[str, ...]) -> _Token:
        tok = self.current
        if tok.kind != kind:
            self._fail(expected)
        self.i += 1
        return tok

    def take_path(self) -> _Token:
        return self.take("word", ("field path",))

    def take_date(self) -> date:
        tok = self.take("date", ("YYYY-MM-DD date",))
        try:
            return date.fromisoformat(tok.text)
        except ValueError:
            raise QuerySyntaxError(f"invalid date {tok.text!r}", tok.line, tok.column)


def _check_path(source: str, tok: _Token) -> str:
    path = PATH_ALIASES.get(tok.text, tok.text)
    if path not in FIELD_TYPES[source]:
        raise QueryFieldError(
            f"unknown field {tok.text!r} for source {source!r} "
            f"(line {tok.line}, column {tok.column})"
        )
    return path


def _check_literal(source: str, path: str, literal, tok: _Token):
    expected = FIELD_TYPES[source][path]
    actual = "date" if isinstance(literal, date) else ("int" if isinstance(literal, int) else "str")
    if expected != actual:
        raise QueryFieldError(
            f"field {path!r} compares to {expected} literals, got {actual} "
            f"(line {tok.line}, column {tok.column})"
        )


def parse_query(text: str) -> QuerySpec:
    """Parse DSL text into a QuerySpec.

    Raises QuerySyntaxError with position and an expected-token set, or
    QueryFieldError for an unknown path or type-mismatched literal.
    """
    if not text.strip():
        raise QuerySyntaxError("empty query", 1, 1, ("FROM",))
    p = _Parser(_tokenize(text))
    p.take_keyword("from")
    src_tok = p.current
    if src_tok.kind != "word" or src_tok.text not in SOURCES:
        p._fail(SOURCES)
    p.i += 1
    spec = QuerySpec(source=src_tok.text)

    seen: set[str] = set()

    def once(clause: str, tok: _Token):
        if clause in seen:
            raise QuerySyntaxError(f"duplicate {clause.upper()} clause", tok.line, tok.column)
        seen.add(clause)

    while p.current.kind != "eof":
        tok = p.current
        if p.peek_keyword("where"):
            p.i += 1
            path_tok = p.take_path()
            path = _check_path(spec.source, path_tok)
            op_tok = p.current
            if op_tok.kind == "op":
                op = op_tok.text
                p.i += 1
            elif p.peek_keyword("contains"):
                op = "contains"
                p.i += 1
            else:
                p._fail(OPS)
            lit_tok = p.current
            if lit_tok.kind == "string":
                literal: str | int | date = lit_tok.text
            elif lit_tok.kind == "date":
                literal = date.fromisoformat(lit_tok.text)
            elif lit_tok.kind == "number":
                literal = int(lit_tok.text)
            elif lit_tok.kind == "word":
                literal = lit_tok.text
            else:
                p._fail(("literal",))
            p.i += 1
            if op == "contains" and not isinstance(literal, str):
                raise QueryFieldError(
                    f"CONTAINS needs a string literal (line {lit_tok.line}, column {lit_tok.column})"
                )
            if op != "contains":
                _check_literal(spec.source, path, literal, lit_tok)
            spec.predicates.append(Predicate(path=path, op=op, literal=literal))
        elif p.peek_keyword("asof"):
            once("asof", tok)
            p.i += 1
            spec.asof_valid = p.take_date()
            if p.peek_keyword("tx"):
                p.i += 1
                spec.asof_transaction = p.take_date()
        elif p.peek_keyword("group"):
            once("group", tok)
            p.i += 1
            p.take_keyword("by")
            spec.group_by = _check_path(spec.source, p.take_path())
        elif p.peek_keyword("count"):
            once("count", tok)
            p.i += 1
            spec.aggregate = "count"
            if p.peek_keyword("distinct"):
                p.i += 1
                spec.aggregate = "count_distinct"
                spec.distinct_path = _check_path(spec.source, p.take_path())
        elif p.peek_keyword("order"):
            once("order", tok)
            p.i += 1
            p.take_keyword("by")
            key_tok = p.current
            if key_tok.kind == "keyword" and key_tok.text == "count":
                key = "count"
                p.i += 1
            elif key_tok.kind == "word":
                key = key_tok.text
                p.i += 1
            else:
                p._fail(("COUNT", "field path"))
            direction = "asc"
            if p.peek_keyword("asc", "desc"):
                direction = p.current.text
                p.i += 1
            spec.order = (key, direction)
        elif p.peek_keyword("limit"):
            once("limit", tok)
            p.i += 1
            num = p.take("number", ("positive integer",))
            value = int(num.text)
            if value <= 0:
                raise QuerySyntaxError("LIMIT must be positive", num.line, num.column)
            spec.limit = value
        else:
            p._fail(("WHERE", "ASOF", "GROUP", "COUNT", "ORDER", "LIMIT"))

    if spec.order is not None:
        key = spec.order[0]
        valid_keys = {"count"}
        if spec.group_by:
            valid_keys.add(spec.group_by)
        if spec.aggregate is None:
            valid_keys |= set(FIELD_TYPES[spec.source])
        if key not in valid_keys:
            raise QueryFieldError(f"cannot order by {key!r} in this query")
    return spec
