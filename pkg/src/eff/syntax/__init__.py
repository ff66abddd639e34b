"""Lexing, parsing and printing of surface programs."""

from .ast import *  # noqa: F401,F403
from .lexer import Token, TokenKind, tokenize
from .parser import parse, parse_program, parse_term, parse_type
from .pretty import pretty_item, pretty_pattern, pretty_program, pretty_term, pretty_type

__all__ = [
    "Token", "TokenKind", "tokenize", "parse", "parse_program", "parse_term", "parse_type",
    "pretty_item", "pretty_pattern", "pretty_program", "pretty_term", "pretty_type",
]
