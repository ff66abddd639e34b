from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from ..errors import LexError, Position, Span

KEYWORDS = frozenset(
    """let rec and in fun function handler handle with val finally operation
    effect end new type match if then else true false for while do done to
    downto of mod""".split()
)

# Longest first so that the alternation picks ";;" over ";" etc.
SYMBOLS = sorted(
    """;; ; -> => := :: : , ( ) [ ] | || && # @ = <> <= >= < > +. -. *. /.
    + - * / ! ^ _""".split(),
    key=len,
    reverse=True,
)


class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    INT = "int-literal"
    FLOAT = "float-literal"
    STRING = "string-literal"
    SYMBOL = "symbol"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    position: Position
    end: Position
    value: object = None

    @property
    def span(self) -> Span:
        return Span(self.position, self.end)

    def __repr__(self) -> str:
        return f"{self.kind.value}:{self.text!r}@{self.position}"


_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_'$]*|'[A-Za-z_][A-Za-z0-9_']*")
_SPACE = re.compile(r"\s+")
_NUMBER = re.compile(r"\d+(\.\d*)?([eE][+-]?\d+)?")
_SYMBOL = re.compile("|".join(re.escape(s) for s in SYMBOLS))
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "'": "'", "b": "\b"}


class _Cursor:
    def __init__(self, source: str):
        self.source = source
        self.offset = 0
        self.line = 1
        self.column = 1

    def position(self) -> Position:
        return Position(self.line, self.column)

    def advance(self, count: int) -> None:
        chunk = self.source[self.offset:self.offset + count]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.column = count - chunk.rindex("\n")
        else:
            self.column += count
        self.offset += count


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens, dropping whitespace and nested ``(* *)`` comments."""
    cur = _Cursor(source)
    src = source
    tokens: list[Token] = []
    n = len(src)
    while cur.offset < n:
        ch = src[cur.offset]
        if ch.isspace():
            cur.advance(_SPACE.match(src, cur.offset).end() - cur.offset)
            continue
        start = cur.position()
        if src.startswith("(*", cur.offset):
            _skip_comment(cur, start)
            continue
        if ch == '"':
            text, value = _read_string(cur, start)
            tokens.append(Token(TokenKind.STRING, text, start, cur.position(), value))
            continue
        if ch.isdigit():
            m = _NUMBER.match(src, cur.offset)
            text = m.group(0)
            after = src[m.end():m.end() + 1]
            if after and (after.isalnum() or after in "_.'"):
                raise LexError(f"malformed number {text + after!r}", Span(start, start))
            cur.advance(len(text))
            if m.group(1) or m.group(2):
                tokens.append(Token(TokenKind.FLOAT, text, start, cur.position(), float(text)))
            else:
                tokens.append(Token(TokenKind.INT, text, start, cur.position(), int(text)))
            continue
        m = _IDENT.match(src, cur.offset)
        if m and m.group(0) != "_":
            text = m.group(0)
            cur.advance(len(text))
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(kind, text, start, cur.position()))
            continue
        m = _SYMBOL.match(src, cur.offset)
        if m:
            text = m.group(0)
            cur.advance(len(text))
            tokens.append(Token(TokenKind.SYMBOL, text, start, cur.position()))
            continue
        raise LexError(f"illegal character {ch!r}", Span(start, start))
    return tokens


def _skip_comment(cur: _Cursor, start: Position) -> None:
    src = cur.source
    depth = 0
    while cur.offset < len(src):
        if src.startswith("(*", cur.offset):
            depth += 1
            cur.advance(2)
        elif src.startswith("*)", cur.offset):
            depth -= 1
            cur.advance(2)
            if depth == 0:
                return
        else:
            cur.advance(1)
    raise LexError("unterminated comment", Span(start, start))


def _read_string(cur: _Cursor, start: Position) -> tuple[str, str]:
    src = cur.source
    i = cur.offset + 1
    out = []
    while i < len(src):
        ch = src[i]
        if ch == '"':
            text = src[cur.offset:i + 1]
            cur.advance(i + 1 - cur.offset)
            return text, "".join(out)
        if ch == "\\":
            nxt = src[i + 1:i + 2]
            if nxt in _ESCAPES:
                out.append(_ESCAPES[nxt])
                i += 2
                continue
            if nxt.isdigit() and src[i + 1:i + 4].isdigit():
                out.append(chr(int(src[i + 1:i + 4])))
                i += 4
                continue
            raise LexError(f"illegal escape \\{nxt}", Span(start, start))
        out.append(ch)
        i += 1
    raise LexError("unterminated string literal", Span(start, start))
