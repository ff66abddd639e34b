"""One interpreter run: parse, desugar, check and evaluate toplevel items
against a shared environment and store."""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO, Union

from . import core as C
from .deep import call_deep
from .desugar import Diagnostic, desugar_item
from .errors import EffError, SequencingError
from .runtime.printer import show_value
from .runtime.toplevel import Runtime
from .syntax import ast as A
from .syntax.parser import parse
from .typecheck import Context, Scheme, check_item, show_scheme, show_type
from .typecheck.types import Type

SEQUENCING_MODES = ("warn", "error", "silent")


@dataclass
class Outcome:
    """What a toplevel item produced, for echoing."""

    kind: str  # "value", "let" or "type"
    value: object = None
    type: Optional[str] = None
    name: Optional[str] = None

    def echo(self) -> str:
        if self.kind == "value":
            text = show_value(self.value)
            return text if self.type is None else f"{text} : {self.type}"
        if self.kind == "let":
            ty = "" if self.type is None else f" : {self.type}"
            return f"val {self.name}{ty} = {show_value(self.value)}"
        return f"type {self.name}"


class Session:
    def __init__(
        self,
        typecheck: bool = True,
        sequencing: str = "warn",
        prelude: Union[bool, str, Path, None] = True,
        stdout: Optional[TextIO] = None,
        stdin: Optional[TextIO] = None,
        diagnostics: Optional[TextIO] = None,
        fuel: Optional[int] = None,
    ):
        if sequencing not in SEQUENCING_MODES:
            raise ValueError(f"sequencing must be one of {SEQUENCING_MODES}")
        self.typecheck = typecheck
        self.sequencing = sequencing
        self.diagnostics_stream = diagnostics
        self.diagnostics: list[Diagnostic] = []
        self.ctx = Context.initial()
        self.runtime = Runtime(stdout=stdout, stdin=stdin, fuel=fuel)
        if prelude:
            from .prelude import load_prelude

            load_prelude(self, None if prelude is True else Path(prelude))

    # ------------------------------------------------------------ pipeline

    def run_source(self, source: str, filename: Optional[str] = None, echo: Optional[TextIO] = None) -> list[Outcome]:
        """Run every item of ``source`` in order; the first error propagates."""
        return call_deep(self._run_source, source, filename, echo)

    def _run_source(self, source: str, filename: Optional[str], echo: Optional[TextIO]) -> list[Outcome]:
        items = parse(source)
        outcomes = []
        for item in items:
            outcome = self.run_item(item, filename)
            outcomes.append(outcome)
            if echo is not None and outcome.kind == "value":
                echo.write(outcome.echo() + "\n")
                echo.flush()
        return outcomes

    def run_item(self, item: A.TopItem, filename: Optional[str] = None) -> Outcome:
        return call_deep(self._run_item, item, filename)

    def _run_item(self, item: A.TopItem, filename: Optional[str] = None) -> Outcome:
        core_item, diags = desugar_item(item)
        self.report(diags, filename)
        return self._run_core(core_item)

    def run_core(self, core_item) -> Outcome:
        """Check and evaluate an already desugared item."""
        return call_deep(self._run_core, core_item)

    def _run_core(self, core_item) -> Outcome:
        inferred = None
        if self.typecheck:
            inferred = check_item(self.ctx, core_item)
        elif isinstance(core_item, A.TypeDecl):
            # Declarations are still recorded so that a later checked item sees them.
            try:
                check_item(self.ctx, core_item)
            except EffError:
                pass
        result = self.runtime.run_item(core_item)
        if isinstance(core_item, A.TypeDecl):
            return Outcome("type", name=core_item.name)
        if isinstance(core_item, C.CoreComp):
            return Outcome("value", result, None if inferred is None else show_type(inferred))
        outcomes = [
            Outcome("let", v, None if inferred is None else show_scheme(inferred[n]), n)
            for n, v in result.items()
        ]
        if len(outcomes) == 1:
            return outcomes[0]
        return Outcome("let", tuple(o.value for o in outcomes), None, ", ".join(o.name for o in outcomes)) if outcomes else Outcome("let")

    def report(self, diags: list[Diagnostic], filename: Optional[str]) -> None:
        if not diags or self.sequencing == "silent":
            return
        if self.sequencing == "error":
            d = diags[0]
            raise SequencingError(d.message, d.span)
        self.diagnostics.extend(diags)
        if self.diagnostics_stream is not None:
            for d in diags:
                self.diagnostics_stream.write(d.render(filename) + "\n")

    # ------------------------------------------------------------ conveniences

    def eval(self, source: str):
        """Run ``source`` and return the value of its last toplevel item."""
        outcomes = self.run_source(source)
        return outcomes[-1].value if outcomes else None

    def type_of(self, source: str) -> str:
        """Check ``source`` without running it; return the type of its last term."""
        return call_deep(self._type_of, source)

    def _type_of(self, source: str) -> str:
        last: Optional[Type] = None
        for item in parse(source):
            core_item, _ = desugar_item(item)
            r = check_item(self.ctx, core_item)
            if isinstance(core_item, C.CoreComp):
                last = r
        return show_type(last) if last is not None else ""

    def scheme_of(self, name: str) -> str:
        scheme: Scheme = self.ctx.values[name]
        return show_scheme(scheme)


def run_string(source: str, **options) -> tuple[object, str]:
    """Evaluate ``source`` in a fresh session; return (last value, std output)."""
    out = io.StringIO()
    session = Session(stdout=out, **options)
    return session.eval(source), out.getvalue()
