"""Core syntax: expressions (inert) and computations (effectful), kept apart.

Patterns and type expressions are shared with the surface tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import NOWHERE, Span
from .syntax import ast as A
from .syntax.pretty import literal, pattern_atom, pretty_pattern, pretty_type, _name
from .syntax.ast import Pattern


def _span():
    return field(default=NOWHERE, compare=False, repr=False)


# ---------------------------------------------------------------- expressions

@dataclass
class EVar:
    name: str
    span: Span = _span()


@dataclass
class EConst:
    value: A.Literal
    span: Span = _span()


@dataclass
class ETuple:
    items: list["Expr"]
    span: Span = _span()


@dataclass
class EVariant:
    constructor: str
    arg: Optional["Expr"] = None
    span: Span = _span()


@dataclass
class EList:
    items: list["Expr"]
    span: Span = _span()


@dataclass
class ECons:
    head: "Expr"
    tail: "Expr"
    span: Span = _span()


@dataclass
class ELambda:
    param: Pattern
    body: "Comp"
    span: Span = _span()


@dataclass
class EProject:
    instance: "Expr"
    op: str
    span: Span = _span()


@dataclass
class HClause:
    instance: "Expr"
    op: str
    arg: Pattern
    cont: Pattern
    body: "Comp"
    span: Span = _span()


@dataclass
class EHandler:
    clauses: list[HClause]
    val: tuple[Pattern, "Comp"]
    fin: tuple[Pattern, "Comp"]
    span: Span = _span()


Expr = Union[EVar, EConst, ETuple, EVariant, EList, ECons, ELambda, EProject, EHandler]


# ---------------------------------------------------------------- computations

@dataclass
class CVal:
    expr: Expr
    span: Span = _span()


@dataclass
class CLet:
    pattern: Pattern
    bound: "Comp"
    body: "Comp"
    span: Span = _span()


@dataclass
class CLetSim:
    """Simultaneous binding; evaluated left to right."""

    bindings: list[tuple[Pattern, "Comp"]]
    body: "Comp"
    span: Span = _span()


@dataclass
class CLetRec:
    bindings: list[tuple[str, ELambda]]
    body: "Comp"
    span: Span = _span()


@dataclass
class CIf:
    cond: Expr
    then: "Comp"
    orelse: "Comp"
    span: Span = _span()


@dataclass
class CAbsurd:
    expr: Expr
    span: Span = _span()


@dataclass
class CMatch:
    scrutinee: Expr
    cases: list[tuple[Pattern, "Comp"]]
    span: Span = _span()


@dataclass
class CApp:
    fn: Expr
    arg: Expr
    span: Span = _span()


@dataclass
class RClause:
    op: str
    arg: Pattern
    state: Pattern
    body: "Comp"
    span: Span = _span()


@dataclass
class CNew:
    effect: str
    init: Optional[Expr] = None
    clauses: Optional[list[RClause]] = None
    span: Span = _span()


@dataclass
class CWith:
    handler: Expr
    body: "Comp"
    span: Span = _span()


Comp = Union[CVal, CLet, CLetSim, CLetRec, CIf, CAbsurd, CMatch, CApp, CNew, CWith]


# ---------------------------------------------------------------- toplevel

@dataclass
class CoreLet:
    bindings: list[tuple[Pattern, Comp]]
    span: Span = _span()


@dataclass
class CoreLetRec:
    bindings: list[tuple[str, ELambda]]
    span: Span = _span()


@dataclass
class CoreComp:
    comp: Comp
    span: Span = _span()


CoreItem = Union[A.TypeDecl, CoreLet, CoreLetRec, CoreComp]


def identity_clause(span: Span = NOWHERE) -> tuple[Pattern, Comp]:
    return (A.PVar("x", span), CVal(EVar("x", span), span))


def is_identity_clause(clause: tuple[Pattern, Comp]) -> bool:
    pat, body = clause
    return (
        isinstance(pat, A.PVar)
        and isinstance(body, CVal)
        and isinstance(body.expr, EVar)
        and body.expr.name == pat.name
    )


# ---------------------------------------------------------------- rendering

_ATOMIC = (EVar, EConst, ETuple, EList)


def _atom(e: Union[Expr, Comp]) -> str:
    if isinstance(e, _ATOMIC) or (isinstance(e, EVariant) and e.arg is None):
        return render(e)
    return f"({render(e)})"


def render(node: Union[Expr, Comp]) -> str:
    """Render a core node as surface syntax that desugars back to itself."""
    if isinstance(node, EVar):
        return _name(node.name)
    if isinstance(node, EConst):
        return literal(node.value)
    if isinstance(node, ETuple):
        return "(" + ", ".join(_atom(i) for i in node.items) + ")"
    if isinstance(node, EVariant):
        return node.constructor if node.arg is None else f"{node.constructor} {_atom(node.arg)}"
    if isinstance(node, EList):
        return "[" + "; ".join(_atom(i) for i in node.items) + "]"
    if isinstance(node, ECons):
        return f"{_atom(node.head)} :: {_atom(node.tail)}"
    if isinstance(node, ELambda):
        return f"fun {pattern_atom(node.param)} -> {render(node.body)}"
    if isinstance(node, EProject):
        return f"{_atom(node.instance)}#{node.op}"
    if isinstance(node, EHandler):
        parts = [
            f" | {_atom(c.instance)}#{c.op} {pattern_atom(c.arg)} {pattern_atom(c.cont)} -> {_atom(c.body)}"
            for c in node.clauses
        ]
        parts.append(f" | val {pattern_atom(node.val[0])} -> {_atom(node.val[1])}")
        parts.append(f" | finally {pattern_atom(node.fin[0])} -> {_atom(node.fin[1])}")
        return "handler" + "".join(parts)
    if isinstance(node, CVal):
        return render(node.expr)
    if isinstance(node, CLet):
        return f"let {pretty_pattern(node.pattern)} = {_atom(node.bound)} in {render(node.body)}"
    if isinstance(node, CLetSim):
        binds = " and ".join(f"{pretty_pattern(p)} = {_atom(c)}" for p, c in node.bindings)
        return f"let {binds} in {render(node.body)}"
    if isinstance(node, CLetRec):
        binds = " and ".join(f"{_name(n)} = ({render(f)})" for n, f in node.bindings)
        return f"let rec {binds} in {render(node.body)}"
    if isinstance(node, CIf):
        return f"if {_atom(node.cond)} then {_atom(node.then)} else {_atom(node.orelse)}"
    if isinstance(node, CAbsurd):
        return f"match {_atom(node.expr)} with"
    if isinstance(node, CMatch):
        cases = "".join(f" | {pretty_pattern(p)} -> {_atom(c)}" for p, c in node.cases)
        return f"match {_atom(node.scrutinee)} with{cases}"
    if isinstance(node, CApp):
        if isinstance(node.fn, (EVar, EProject)):
            fn = render(node.fn)
        elif isinstance(node.fn, EVariant):
            fn = f"({render(node.fn)})"
        else:
            fn = _atom(node.fn)
        return f"{fn} {_atom(node.arg)}"
    if isinstance(node, CNew):
        if node.clauses is None:
            return f"new {node.effect}"
        clauses = "".join(
            f" operation {c.op} {pattern_atom(c.arg)} @ {pattern_atom(c.state)} -> {_atom(c.body)}"
            for c in node.clauses
        )
        return f"new {node.effect} @ {_atom(node.init)} with{clauses} end"
    if isinstance(node, CWith):
        return f"with {_atom(node.handler)} handle {render(node.body)}"
    raise TypeError(f"not a core node: {node!r}")


def render_item(item: CoreItem) -> str:
    from .syntax.pretty import pretty_item

    if isinstance(item, A.TypeDecl):
        return pretty_item(item)
    if isinstance(item, CoreLet):
        return "let " + " and ".join(f"{pretty_pattern(p)} = {_atom(c)}" for p, c in item.bindings)
    if isinstance(item, CoreLetRec):
        return "let rec " + " and ".join(f"{_name(n)} = ({render(f)})" for n, f in item.bindings)
    return render(item.comp)


__all__ = [name for name in dir() if name[0].isupper() and not name.startswith("_")] + [
    "render", "render_item", "identity_clause", "is_identity_clause", "pretty_type",
]
