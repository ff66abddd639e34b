"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Position:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Span:
    start: Position
    end: Position

    def __str__(self) -> str:
        return str(self.start)


NOWHERE = Span(Position(0, 0), Position(0, 0))


class EffError(Exception):
    """Base class for all errors reported to the user."""

    stage = "error"

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def render(self, filename: str | None = None) -> str:
        where = ""
        if self.span is not None and self.span.start.line > 0:
            where = f"{filename or '<input>'}:{self.span.start}: "
        elif filename:
            where = f"{filename}: "
        return f"{where}{self.stage}: {self.message}"


class LexError(EffError):
    stage = "syntax error"


class ParseError(EffError):
    stage = "syntax error"

    def __init__(self, message: str, span: Span | None = None, expected: frozenset[str] = frozenset()):
        super().__init__(message, span)
        self.expected = expected


class SequencingError(EffError):
    stage = "error[sequencing]"


class TypeCheckError(EffError):
    """A typing failure. ``kind`` is one of mismatch, occurs-check,
    unknown-operation, unknown-variable, arity."""

    stage = "type error"

    def __init__(self, message: str, span: Span | None = None, kind: str = "mismatch", types: tuple = ()):
        super().__init__(message, span)
        self.kind = kind
        self.types = types


class EffRuntimeError(EffError):
    kind = "error"

    def render(self, filename: str | None = None) -> str:
        return f"runtime error: {self.kind}: {self.message}"


class IllFormedValue(EffRuntimeError):
    kind = "ill-formed value"


class UncaughtOperation(EffRuntimeError):
    kind = "uncaught operation"


class ResourceError(EffRuntimeError):
    kind = "resource"


class MatchFailure(EffRuntimeError):
    kind = "match failure"


class ArithmeticFault(EffRuntimeError):
    kind = "arithmetic"


class StackExhausted(EffRuntimeError):
    kind = "stack exhausted"


class OutOfFuel(EffRuntimeError):
    kind = "out of fuel"
