"""Exception taxonomy shared across the engine, analytics, config, and server layers.

Every error carries a short machine-readable ``code`` (used verbatim in API
error bodies) plus an optional ``details`` dict for structured payloads such
as dependency closures or ingest diagnostics.
"""

from __future__ import annotations


class VivaError(Exception):
    code = "Error"

    def __init__(self, message: str = "", details: dict | None = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details or {}


class UnknownDataset(VivaError):
    code = "UnknownDataset"


class UnknownAttribute(VivaError):
    code = "UnknownAttribute"


class UnknownLevel(VivaError):
    code = "UnknownLevel"


class UnknownSeq(VivaError):
    code = "UnknownSeq"


class UnknownConcern(VivaError):
    code = "UnknownConcern"


class UnknownMember(VivaError):
    code = "UnknownMember"


class WrongKind(VivaError):
    code = "WrongKind"


class WrongArity(VivaError):
    code = "WrongArity"


class CrossDataset(VivaError):
    code = "CrossDataset"


class NotChartable(VivaError):
    code = "NotChartable"


class EmptyResult(VivaError):
    code = "EmptyResult"


class NameCollision(VivaError):
    code = "NameCollision"


class TooManyLevels(VivaError):
    code = "TooManyLevels"


class EmptyLog(VivaError):
    code = "EmptyLog"


class DependencyViolation(VivaError):
    code = "DependencyViolation"


class InconsistentLog(VivaError):
    code = "InconsistentLog"


class InvalidOperation(VivaError):
    """Malformed operation record: unknown kind or bad params shape."""

    code = "InvalidOperation"


class InvalidCombination(VivaError):
    code = "InvalidCombination"


class NoData(VivaError):
    code = "NoData"


class MalformedCsv(VivaError):
    code = "MalformedCsv"


class MissingColumn(VivaError):
    code = "MissingColumn"


class NoTimeAttribute(VivaError):
    code = "NoTimeAttribute"


class DuplicateName(VivaError):
    code = "DuplicateName"


class ProtectedConcern(VivaError):
    code = "ProtectedConcern"


class InvalidSpec(VivaError):
    code = "InvalidSpec"


class IoError(VivaError):
    code = "IoError"


class InvalidRange(VivaError):
    code = "InvalidRange"
