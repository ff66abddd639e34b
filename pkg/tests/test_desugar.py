from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings

from eff import core as C
from eff.desugar import desugar, is_expression
from eff.syntax import ast as A
from eff.syntax import parse_term

from .conftest import run
from .strategies import terms


def ds(src):
    return desugar(parse_term(src))


@pytest.mark.parametrize(
    "src,expected",
    [
        ("fun x -> c#op x", True),
        ("c#op ()", False),
        ("(3, f x)", False),
        ("(3, [1; 2], Some x)", True),
        ("handler | val x -> x", True),
        ("let x = 1 in x", False),
    ],
)
def test_is_expression(src, expected):
    assert is_expression(parse_term(src)) is expected


def _structural_is_expression(t):
    # independent oracle: a term is an expression iff it contains no
    # computation outside lambda bodies and handler clauses
    if isinstance(t, (A.Var, A.Const, A.Lambda, A.HandlerLit)):
        return True
    if isinstance(t, A.Project):
        return _structural_is_expression(t.instance)
    if isinstance(t, (A.Tuple, A.ListLit)):
        return all(_structural_is_expression(x) for x in t.items)
    if isinstance(t, A.Cons):
        return _structural_is_expression(t.head) and _structural_is_expression(t.tail)
    if isinstance(t, A.Variant):
        return t.arg is None or _structural_is_expression(t.arg)
    return False


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(terms())
def test_is_expression_matches_structural_oracle(t):
    assert is_expression(t) == _structural_is_expression(t)


def test_expression_in_computation_position_becomes_val():
    comp, diags = ds("(1, x)")
    assert isinstance(comp, C.CVal) and not diags


def test_hoisting_is_one_simultaneous_let_in_source_order():
    comp, diags = ds("(f x, g y)")
    assert isinstance(comp, C.CLetSim) and len(comp.bindings) == 2
    (p1, c1), (p2, c2) = comp.bindings
    assert c1 == C.CApp(C.EVar("f"), C.EVar("x"))
    assert c2 == C.CApp(C.EVar("g"), C.EVar("y"))
    assert comp.body == C.CVal(C.ETuple([C.EVar(p1.name), C.EVar(p2.name)]))
    assert len(diags) == 1 and diags[0].code == "sequencing"


def test_single_hoist_gives_no_warning():
    comp, diags = ds("x - y")
    assert C.render(comp) == "let $t1 = (( - ) x) in $t1 y"
    assert diags == []


def test_sequence_becomes_wildcard_let():
    comp, _ = ds("a; b")
    assert isinstance(comp, C.CLet) and isinstance(comp.pattern, A.PWild)


def test_inline_handle_becomes_with_and_identity_val():
    comp, _ = ds("handle c#decide () with | c#decide _ k -> k true")
    assert isinstance(comp, C.CWith) and isinstance(comp.handler, C.EHandler)
    assert C.is_identity_clause(comp.handler.val)
    assert C.is_identity_clause(comp.handler.fin)


def test_fresh_names_avoid_program_identifiers():
    comp, _ = ds("fun $t1 -> (f $t1, g $t1)")
    body = comp.expr.body
    fresh = [p.name for p, _ in body.bindings]
    assert "$t1" not in fresh


def test_hoisting_under_binder_of_same_spelling_runs_correctly():
    src = "let f x = x + 1 in let $t1 = 5 in (f $t1, f ($t1 + 1))"
    assert run(src, prelude=False)[0] == (6, 7)


def test_evaluation_follows_hoisting_order():
    src = 'with accumulate handle ((std#write "a"; 1), (std#write "b"; 2))'
    assert run(src)[0] == ((1, 2), ["a", "b"])
    # without inner parentheses ";" is looser than "," and the output order is the same
    assert run('with accumulate handle (std#write "a"; 1, std#write "b"; 2)')[0] == (2, ["a", "b"])
