"""Render surface trees back to concrete syntax.

Output is deliberately over-parenthesised: re-parsing it must give back a
structurally equal tree, layout is secondary.
"""

from __future__ import annotations

from . import ast as A
from .parser import SECTION_OPS

_ATOMIC_TERMS = (A.Var, A.Const, A.ListLit, A.Tuple)


def _name(name: str) -> str:
    if name in SECTION_OPS:
        return f"( {name} )"
    return name


def literal(value) -> str:
    if value is A.UNIT:
        return "()"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value) if value >= 0 else f"({value})"
    if isinstance(value, float):
        text = repr(value)
        return text if value >= 0 and not text.startswith("-") else f"({text})"
    if isinstance(value, str):
        return quote_string(value)
    if isinstance(value, A.Prim):
        return f"%{value.name}"
    raise TypeError(f"not a literal: {value!r}")


def quote_string(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 32:
            out.append(f"\\{ord(ch):03d}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


# ---------------------------------------------------------------- types

def pretty_type(t: A.TypeExpr) -> str:
    if isinstance(t, A.TVarExpr):
        return t.name
    if isinstance(t, A.TConExpr):
        if not t.args:
            return t.name
        if len(t.args) == 1:
            return f"{_type_atom(t.args[0])} {t.name}"
        return f"({', '.join(pretty_type(a) for a in t.args)}) {t.name}"
    if isinstance(t, A.TArrowExpr):
        return f"{_type_atom(t.arg)} -> {pretty_type(t.result)}"
    if isinstance(t, A.THandlerExpr):
        return f"{_type_atom(t.arg)} => {pretty_type(t.result)}"
    if isinstance(t, A.TProdExpr):
        return " * ".join(_type_atom(i) for i in t.items)
    raise TypeError(t)


def _type_atom(t: A.TypeExpr) -> str:
    if isinstance(t, A.TVarExpr) or (isinstance(t, A.TConExpr) and len(t.args) <= 1 and t.name != "sum"):
        if isinstance(t, A.TConExpr) and t.args:
            return f"({pretty_type(t)})"
        return pretty_type(t)
    return f"({pretty_type(t)})"


# ---------------------------------------------------------------- patterns

def pretty_pattern(p: A.Pattern) -> str:
    if isinstance(p, A.PTuple):
        return ", ".join(pattern_atom(i) for i in p.items)
    if isinstance(p, A.PCons):
        return f"{pattern_atom(p.head)} :: {pattern_atom(p.tail)}"
    if isinstance(p, A.PVariant) and p.arg is not None:
        return f"{p.constructor} {pattern_atom(p.arg)}"
    return pattern_atom(p)


def pattern_atom(p: A.Pattern) -> str:
    if isinstance(p, A.PVar):
        return _name(p.name)
    if isinstance(p, A.PWild):
        return "_"
    if isinstance(p, A.PConst):
        return literal(p.value)
    if isinstance(p, A.PNil):
        return "[]"
    if isinstance(p, A.PVariant) and p.arg is None:
        return p.constructor
    if isinstance(p, A.PAnnot):
        return f"({pretty_pattern(p.pattern)} : {pretty_type(p.type)})"
    return f"({pretty_pattern(p)})"


# ---------------------------------------------------------------- terms

def atom(t: A.Term) -> str:
    if isinstance(t, _ATOMIC_TERMS) or (isinstance(t, A.Variant) and t.arg is None):
        return pretty_term(t)
    return f"({pretty_term(t)})"


def pretty_term(t: A.Term) -> str:
    if isinstance(t, A.Var):
        return _name(t.name)
    if isinstance(t, A.Const):
        return literal(t.value)
    if isinstance(t, A.Tuple):
        return "(" + ", ".join(atom(i) for i in t.items) + ")"
    if isinstance(t, A.Variant):
        return t.constructor if t.arg is None else f"{t.constructor} {atom(t.arg)}"
    if isinstance(t, A.ListLit):
        return "[" + "; ".join(atom(i) for i in t.items) + "]"
    if isinstance(t, A.Cons):
        return f"{atom(t.head)} :: {atom(t.tail)}"
    if isinstance(t, A.Lambda):
        return f"fun {pattern_atom(t.param)} -> {pretty_term(t.body)}"
    if isinstance(t, A.Project):
        return f"{atom(t.instance)}#{t.op}"
    if isinstance(t, A.HandlerLit):
        return "handler" + _clauses(t)
    if isinstance(t, A.Apply):
        if isinstance(t.fn, A.Var) and t.fn.name in ("~-", "~-."):
            return f"{t.fn.name[1:]} ({pretty_term(t.arg)})"
        if isinstance(t.fn, (A.Apply, A.Var, A.Project)):
            fn = pretty_term(t.fn)
        elif isinstance(t.fn, A.Variant):
            # "C x" would read as a constructor with an argument
            fn = f"({pretty_term(t.fn)})"
        else:
            fn = atom(t.fn)
        return f"{fn} {atom(t.arg)}"
    if isinstance(t, A.Let):
        binds = " and ".join(f"{pretty_pattern(p)} = {atom(b)}" for p, b in t.bindings)
        return f"let {binds} in {pretty_term(t.body)}"
    if isinstance(t, A.LetRec):
        binds = " and ".join(f"{_name(n)} = {atom(b)}" for n, b in t.bindings)
        return f"let rec {binds} in {pretty_term(t.body)}"
    if isinstance(t, A.If):
        return f"if {atom(t.cond)} then {atom(t.then)} else {atom(t.orelse)}"
    if isinstance(t, A.Match):
        cases = "".join(f" | {pretty_pattern(p)} -> {atom(b)}" for p, b in t.cases)
        return f"match {atom(t.scrutinee)} with{cases}"
    if isinstance(t, A.New):
        if t.clauses is None:
            return f"new {t.effect}"
        clauses = "".join(
            f" operation {c.op} {pattern_atom(c.arg)} @ {pattern_atom(c.state)} -> {atom(c.body)}"
            for c in t.clauses
        )
        return f"new {t.effect} @ {atom(t.init)} with{clauses} end"
    if isinstance(t, A.With):
        return f"with {atom(t.handler)} handle {pretty_term(t.body)}"
    if isinstance(t, A.Handle):
        return f"handle {atom(t.body)} with{_clauses(t.handler)} end"
    if isinstance(t, A.Seq):
        second = pretty_term(t.second) if isinstance(t.second, A.Seq) else atom(t.second)
        return f"{atom(t.first)}; {second}"
    if isinstance(t, A.For):
        direction = "downto" if t.downto else "to"
        return f"for {_name(t.var)} = {atom(t.start)} {direction} {atom(t.stop)} do {atom(t.body)} done"
    if isinstance(t, A.While):
        return f"while {atom(t.cond)} do {atom(t.body)} done"
    if isinstance(t, A.Val):
        return f"val {atom(t.expr)}"
    raise TypeError(f"not a term: {t!r}")


def _clauses(h: A.HandlerLit) -> str:
    parts = [
        f" | {atom(c.instance)}#{c.op} {pattern_atom(c.arg)} {pattern_atom(c.cont)} -> {atom(c.body)}"
        for c in h.clauses
    ]
    if h.val is not None:
        parts.append(f" | val {pattern_atom(h.val[0])} -> {atom(h.val[1])}")
    if h.fin is not None:
        parts.append(f" | finally {pattern_atom(h.fin[0])} -> {atom(h.fin[1])}")
    return "".join(parts)


def pretty_item(item: A.TopItem) -> str:
    if isinstance(item, A.TypeDecl):
        params = ""
        if len(item.params) == 1:
            params = item.params[0] + " "
        elif item.params:
            params = "(" + ", ".join(item.params) + ") "
        d = item.definition
        if isinstance(d, A.EffectSig):
            ops = "".join(
                f" operation {op} : {_type_atom(a)} -> {pretty_type(b)}" for op, (a, b) in d.operations.items()
            )
            body = f"effect{ops} end"
        elif isinstance(d, A.VariantDef):
            body = " | ".join(c if t is None else f"{c} of {pretty_type(t)}" for c, t in d.constructors)
        else:
            body = pretty_type(d)
        return f"type {params}{item.name} = {body}"
    if isinstance(item, A.TopLet):
        binds = " and ".join(f"{pretty_pattern(p)} = {atom(b)}" for p, b in item.bindings)
        return f"let {binds}"
    if isinstance(item, A.TopLetRec):
        binds = " and ".join(f"{_name(n)} = {atom(b)}" for n, b in item.bindings)
        return f"let rec {binds}"
    return pretty_term(item.term)


def pretty_program(items: list[A.TopItem]) -> str:
    return "\n;;\n".join(pretty_item(i) for i in items) + "\n"
