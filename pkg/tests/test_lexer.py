from __future__ import annotations

import pytest

from eff.errors import LexError
from eff.syntax import TokenKind, tokenize


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src)]


def test_keywords_identifiers_and_symbols():
    toks = kinds("let x' = c#decide ()")
    assert toks[0] == (TokenKind.KEYWORD, "let")
    assert (TokenKind.IDENT, "x'") in toks
    assert (TokenKind.SYMBOL, "#") in toks
    assert toks[-1] == (TokenKind.SYMBOL, ")")


def test_literals_carry_values():
    toks = tokenize('42 3.5 "a\\nb" true')
    assert [t.value for t in toks[:3]] == [42, 3.5, "a\nb"]


def test_type_variables_are_identifiers():
    toks = tokenize("'a list")
    assert toks[0].kind is TokenKind.IDENT and toks[0].text == "'a"


def test_nested_comments_are_skipped():
    assert kinds("1 (* a (* nested *) comment *) 2") == [(TokenKind.INT, "1"), (TokenKind.INT, "2")]


def test_positions_are_one_based():
    toks = tokenize("a\n  b")
    assert (toks[1].position.line, toks[1].position.column) == (2, 3)


def test_longest_symbol_match():
    texts = [t.text for t in tokenize("a :: b := c -> d => e <> f")]
    for sym in ("::", ":=", "->", "=>", "<>"):
        assert sym in texts


@pytest.mark.parametrize("src", ['"unterminated', "(* open comment", "1 ` 2"])
def test_lex_errors(src):
    with pytest.raises(LexError):
        tokenize(src)
