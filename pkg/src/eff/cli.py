"""Command-line driver: run files or start an interactive loop."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO

from .core import render_item
from .desugar import desugar_item
from .errors import EffError, LexError, ParseError, SequencingError, TypeCheckError
from .session import SEQUENCING_MODES, Session
from .syntax.parser import parse

EXIT_OK, EXIT_RUNTIME, EXIT_TYPE, EXIT_SYNTAX = 0, 1, 2, 3


@dataclass
class RunConfig:
    files: list[str] = field(default_factory=list)
    typecheck: bool = True
    sequencing: str = "warn"
    prelude: Optional[str] = None
    print_ast: bool = False


def exit_code(exc: EffError) -> int:
    if isinstance(exc, (LexError, ParseError, SequencingError)):
        return EXIT_SYNTAX
    if isinstance(exc, TypeCheckError):
        return EXIT_TYPE
    return EXIT_RUNTIME


def make_session(config: RunConfig, stdout: TextIO, stdin: TextIO, stderr: TextIO) -> Session:
    return Session(
        typecheck=config.typecheck,
        sequencing=config.sequencing,
        prelude=config.prelude or True,
        stdout=stdout,
        stdin=stdin,
        diagnostics=stderr,
    )


def run_file(config: RunConfig, path: str, session: Optional[Session] = None,
             stdout: TextIO = None, stdin: TextIO = None, stderr: TextIO = None) -> int:
    stdout, stdin, stderr = stdout or sys.stdout, stdin or sys.stdin, stderr or sys.stderr
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        stderr.write(f"{path}: cannot read file: {exc.strerror or exc}\n")
        return EXIT_RUNTIME
    try:
        if session is None:
            session = make_session(config, stdout, stdin, stderr)
        if config.print_ast:
            for item in parse(source):
                core_item, _ = desugar_item(item)
                stdout.write(render_item(core_item) + "\n;;\n")
            return EXIT_OK
        session.run_source(source, path, echo=stdout)
    except EffError as exc:
        stdout.flush()
        stderr.write(exc.render(path) + "\n")
        return exit_code(exc)
    return EXIT_OK


def _incomplete(exc: EffError) -> bool:
    return isinstance(exc, ParseError) and exc.message.endswith("found end of input") or (
        isinstance(exc, LexError) and exc.message.startswith("unterminated")
    )


def repl(config: RunConfig, stdin: TextIO = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    interactive = stdin.isatty()
    try:
        session = make_session(config, stdout, stdin, stderr)
    except EffError as exc:
        stderr.write(exc.render() + "\n")
        return exit_code(exc)
    buffer: list[str] = []
    while True:
        if interactive:
            stdout.write("# " if not buffer else "  ")
            stdout.flush()
        line = stdin.readline()
        if not line:
            if buffer and "".join(buffer).strip():
                _repl_entry(session, "".join(buffer), stdout, stderr)
            return EXIT_OK
        buffer.append(line)
        text = "".join(buffer)
        if not text.strip():
            buffer.clear()
            continue
        try:
            items = parse(text)
        except EffError as exc:
            if _incomplete(exc):
                continue
            stderr.write(exc.render("<stdin>") + "\n")
            buffer.clear()
            continue
        buffer.clear()
        _repl_items(session, items, stdout, stderr)


def _repl_entry(session: Session, text: str, stdout: TextIO, stderr: TextIO) -> None:
    try:
        items = parse(text)
    except EffError as exc:
        stderr.write(exc.render("<stdin>") + "\n")
        return
    _repl_items(session, items, stdout, stderr)


def _repl_items(session: Session, items, stdout: TextIO, stderr: TextIO) -> None:
    for item in items:
        try:
            outcome = session.run_item(item, "<stdin>")
        except EffError as exc:
            stdout.flush()
            stderr.write(exc.render("<stdin>") + "\n")
            return
        except KeyboardInterrupt:
            stderr.write("interrupted\n")
            return
        if outcome.kind != "type":
            stdout.write(outcome.echo() + "\n")
        stdout.flush()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eff", description="Interpreter for a language with algebraic effects and handlers.")
    p.add_argument("files", nargs="*", help="source files to run in order; none starts the interactive loop")
    p.add_argument("--no-typecheck", dest="typecheck", action="store_false", help="skip type inference")
    p.add_argument("--sequencing", choices=SEQUENCING_MODES, default="warn",
                   help="how to report implicit evaluation order of hoisted computations")
    p.add_argument("--prelude", metavar="DIR", default=os.environ.get("EFF_PRELUDE"),
                   help="directory with the prelude (default: bundled; also EFF_PRELUDE)")
    p.add_argument("--ast", dest="print_ast", action="store_true", help="print the desugared program instead of running it")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(args.files, args.typecheck, args.sequencing, args.prelude, args.print_ast)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    if not config.files:
        return repl(config)
    stdout, stdin, stderr = sys.stdout, sys.stdin, sys.stderr
    try:
        session = None if config.print_ast else make_session(config, stdout, stdin, stderr)
    except EffError as exc:
        stderr.write(exc.render() + "\n")
        return exit_code(exc)
    for path in config.files:
        code = run_file(config, path, session, stdout, stdin, stderr)
        if code != EXIT_OK:
            return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
