from __future__ import annotations

import pytest

from eff.errors import ParseError
from eff.syntax import ast as A
from eff.syntax import parse, parse_term


def test_conditional_on_operation():
    t = parse_term("if c#decide () then 10 else 20")
    assert t == A.If(A.Apply(A.Project(A.Var("c"), "decide"), A.Const(A.UNIT)), A.Const(10), A.Const(20))


def test_projection_binds_tighter_than_application():
    assert parse_term("f c#op x") == A.Apply(A.Apply(A.Var("f"), A.Project(A.Var("c"), "op")), A.Var("x"))


def test_binary_operator_is_double_application():
    assert parse_term("x + y * z") == A.Apply(
        A.Apply(A.Var("+"), A.Var("x")),
        A.Apply(A.Apply(A.Var("*"), A.Var("y")), A.Var("z")),
    )


def test_application_binds_tighter_than_operators():
    t = parse_term("f x + 1")
    assert t.fn.arg == A.Apply(A.Var("f"), A.Var("x"))


def test_let_body_extends_over_sequence():
    t = parse_term("let x = 1 in x; y")
    assert isinstance(t, A.Let) and isinstance(t.body, A.Seq)


def test_handler_literal_without_val_or_finally():
    h = parse_term("handler | d#shift f k -> f k")
    assert isinstance(h, A.HandlerLit)
    assert len(h.clauses) == 1 and h.val is None and h.fin is None
    assert h.clauses[0].op == "shift"


def test_effect_declaration():
    [decl] = parse("type choice = effect operation decide : unit -> bool end")
    assert isinstance(decl, A.TypeDecl) and decl.name == "choice"
    assert decl.definition.operations["decide"] == (A.TConExpr("unit"), A.TConExpr("bool"))


def test_new_with_resource_clauses():
    t = parse_term("new ref @ 0 with operation lookup () @ s -> (s, s) end")
    assert isinstance(t, A.New) and t.effect == "ref"
    assert t.init == A.Const(0) and t.clauses[0].op == "lookup"


def test_inline_handle():
    t = parse_term("handle c#decide () with | c#decide _ k -> k true")
    assert isinstance(t, A.Handle) and t.handler.clauses[0].op == "decide"


def test_spans_lie_within_input():
    src = "let f x = x + 1 in f (f 2)"
    t = parse_term(src)

    def walk(node):
        if isinstance(node, list):
            for n in node:
                yield from walk(n)
        elif isinstance(node, tuple):
            for n in node:
                yield from walk(n)
        elif hasattr(node, "__dataclass_fields__"):
            yield node
            for name in node.__dataclass_fields__:
                if name != "span":
                    yield from walk(getattr(node, name))

    for node in walk(t):
        span = getattr(node, "span", None)
        if span is not None and span.start.line:
            assert 1 <= span.start.column <= len(src) + 1
            assert span.end.column <= len(src) + 1


@pytest.mark.parametrize("src", ["(1 +", "let x = in 3", "handler | c#op x -> ", "if 1 then 2 else"])
def test_parse_errors_report_position(src):
    with pytest.raises(ParseError) as info:
        parse_term(src)
    assert info.value.span.start.line == 1


def test_parse_error_at_end_of_input_is_recognizable():
    with pytest.raises(ParseError) as info:
        parse("let f x =")
    assert info.value.message.endswith("found end of input")


def test_toplevel_items_need_separator_between_terms():
    items = parse("let x = 1\nlet y = 2\n;; x + y")
    assert len(items) == 3
