"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class ArtcError(Exception):
    exit_code = 1


class GraphParseError(ArtcError, ValueError):
    exit_code = 1

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class HypothesisError(ArtcError):
    """The graph violates the standing hypothesis (complement has isolated vertices)."""

    exit_code = 2

    def __init__(self, message: str, labels: list[str] | tuple[str, ...] = ()):
        self.labels = list(labels)
        super().__init__(message)


class PreconditionError(ArtcError, ValueError):
    exit_code = 2


class ResourceLimitError(ArtcError):
    exit_code = 3


class CheckedOverflowError(ResourceLimitError, OverflowError):
    exit_code = 3


class OracleInstabilityError(ArtcError):
    exit_code = 4


class VerificationError(ArtcError):
    exit_code = 5
