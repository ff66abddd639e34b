from __future__ import annotations

from ..syntax.pretty import quote_string
from .results import Continuation
from .values import NIL, UNIT, Builtin, Closure, Cons, HandlerValue, Instance, OpFn, Variant


def show_float(x: float) -> str:
    return repr(x)


def show_value(v, nested: bool = False) -> str:
    """OCaml-style rendering; ``nested`` parenthesises constructor applications
    and negative numbers appearing as arguments."""
    if v is UNIT:
        return "()"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, int):
        return f"({v})" if nested and v < 0 else str(v)
    if isinstance(v, float):
        text = show_float(v)
        return f"({text})" if nested and text.startswith("-") else text
    if isinstance(v, str):
        return quote_string(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(show_value(i) for i in v) + ")"
    if v is NIL or isinstance(v, Cons):
        return "[" + "; ".join(show_value(i) for i in (v if v is not NIL else ())) + "]"
    if isinstance(v, Variant):
        if v.arg is None:
            return v.constructor
        text = f"{v.constructor} {show_value(v.arg, True)}"
        return f"({text})" if nested else text
    if isinstance(v, Instance):
        return f"<{v.label or 'instance'} #{v.id}>"
    if isinstance(v, (Closure, Builtin, OpFn)):
        return "<fun>"
    if isinstance(v, HandlerValue):
        return "<handler>"
    if isinstance(v, Continuation):
        return "<cont>"
    return repr(v)
