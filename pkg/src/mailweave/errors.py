"""Exception hierarchy shared across the package."""


class MailweaveError(Exception):
    """Base class for all errors raised by this package."""


class AddressError(MailweaveError):
    """A header string does not contain a usable addr-spec."""


class IngestError(MailweaveError):
    """The input stream itself is unreadable (not a per-message problem)."""


class UnknownRecordError(MailweaveError):
    """A record id was requested that is not in the warehouse."""


class UnknownAnnotationError(MailweaveError):
    """A temporal annotation id does not exist on the target field."""


class SupersededError(MailweaveError):
    """The target annotation was already superseded by a correction."""


class IntervalError(MailweaveError):
    """A temporal interval has its end before its start."""


class RecordSchemaError(MailweaveError):
    """A record or its XML form violates the warehouse schema rules."""


class ExportError(MailweaveError):
    """An export target is unusable (wrong payload kind or bad format)."""


class QueryError(MailweaveError):
    """Base class for query parsing and evaluation failures."""


class QuerySyntaxError(QueryError):
    """Syntax error in DSL text, with position and expected-token hints."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += " (expected " + " | ".join(expected) + ")"
        super().__init__(detail)


class QueryFieldError(QueryError):
    """A field path is not defined for the queried source."""
