"""Built-in constants: host implementations paired with their types.

The type strings are parsed by the checker, so this table is the single
source of truth for both stages.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

from ..errors import ArithmeticFault, IllFormedValue
from .values import NIL, UNIT, Builtin, Cons, Instance, Variant, Unit, Nil


class BuiltinSpec(NamedTuple):
    type: str
    arity: int
    fn: Callable


# ---------------------------------------------------------------- equality and order

_COMPARABLE = (int, float, str, Unit, tuple, Variant, Cons, Nil, Instance)


def _check_comparable(a, b) -> None:
    if not isinstance(a, _COMPARABLE) or not isinstance(b, _COMPARABLE):
        raise IllFormedValue("cannot compare functional values")


def values_equal(a, b) -> bool:
    """Structural equality; instances by identity; functions are an error."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        _check_comparable(x, y)
        if x is y:
            continue
        if isinstance(x, tuple):
            if not isinstance(y, tuple) or len(x) != len(y):
                return False
            stack.extend(zip(x, y))
        elif isinstance(x, Cons):
            if not isinstance(y, Cons):
                return False
            stack.append((x.tail, y.tail))
            stack.append((x.head, y.head))
        elif isinstance(x, Variant):
            if not isinstance(y, Variant) or x.constructor != y.constructor:
                return False
            if (x.arg is None) != (y.arg is None):
                return False
            if x.arg is not None:
                stack.append((x.arg, y.arg))
        elif isinstance(x, Instance):
            if x is not y:
                return False
        elif type(x) is not type(y) or x != y:
            return False
    return True


def compare_values(a, b) -> int:
    """Total order used by < > <= >=: numbers, strings, then structure."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        _check_comparable(x, y)
        if isinstance(x, (int, float, str)):
            if x != y:
                return -1 if x < y else 1
        elif isinstance(x, tuple):
            stack.extend(reversed(list(zip(x, y))))
        elif isinstance(x, (Cons, Nil)):
            if x is NIL or y is NIL:
                if x is not y:
                    return -1 if x is NIL else 1
            else:
                stack.append((x.tail, y.tail))
                stack.append((x.head, y.head))
        elif isinstance(x, Variant):
            if x.constructor != y.constructor:
                return -1 if x.constructor < y.constructor else 1
            if x.arg is not None and y.arg is not None:
                stack.append((x.arg, y.arg))
        elif isinstance(x, Instance):
            if x.id != y.id:
                return -1 if x.id < y.id else 1
    return 0


# ---------------------------------------------------------------- arithmetic

def _div(a: int, b: int) -> int:
    if b == 0:
        raise ArithmeticFault("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _mod(a: int, b: int) -> int:
    if b == 0:
        raise ArithmeticFault("division by zero")
    return a - b * _div(a, b)


def _fdiv(a: float, b: float) -> float:
    if b == 0.0:
        if a == 0.0 or math.isnan(a):
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return a / b


def _append(xs, ys):
    items = []
    while xs is not NIL:
        items.append(xs.head)
        xs = xs.tail
    for item in reversed(items):
        ys = Cons(item, ys)
    return ys


def _string_of_float(x: float) -> str:
    return repr(x)


BUILTINS: dict[str, BuiltinSpec] = {
    "+": BuiltinSpec("int -> int -> int", 2, lambda a, b: a + b),
    "-": BuiltinSpec("int -> int -> int", 2, lambda a, b: a - b),
    "*": BuiltinSpec("int -> int -> int", 2, lambda a, b: a * b),
    "/": BuiltinSpec("int -> int -> int", 2, _div),
    "mod": BuiltinSpec("int -> int -> int", 2, _mod),
    "~-": BuiltinSpec("int -> int", 1, lambda a: -a),
    "+.": BuiltinSpec("float -> float -> float", 2, lambda a, b: a + b),
    "-.": BuiltinSpec("float -> float -> float", 2, lambda a, b: a - b),
    "*.": BuiltinSpec("float -> float -> float", 2, lambda a, b: a * b),
    "/.": BuiltinSpec("float -> float -> float", 2, _fdiv),
    "~-.": BuiltinSpec("float -> float", 1, lambda a: -a),
    "=": BuiltinSpec("'a -> 'a -> bool", 2, values_equal),
    "<>": BuiltinSpec("'a -> 'a -> bool", 2, lambda a, b: not values_equal(a, b)),
    "<": BuiltinSpec("'a -> 'a -> bool", 2, lambda a, b: compare_values(a, b) < 0),
    ">": BuiltinSpec("'a -> 'a -> bool", 2, lambda a, b: compare_values(a, b) > 0),
    "<=": BuiltinSpec("'a -> 'a -> bool", 2, lambda a, b: compare_values(a, b) <= 0),
    ">=": BuiltinSpec("'a -> 'a -> bool", 2, lambda a, b: compare_values(a, b) >= 0),
    "^": BuiltinSpec("string -> string -> string", 2, lambda a, b: a + b),
    "@": BuiltinSpec("'a list -> 'a list -> 'a list", 2, _append),
    "not": BuiltinSpec("bool -> bool", 1, lambda a: not a),
    "float_of_int": BuiltinSpec("int -> float", 1, float),
    "int_of_float": BuiltinSpec("float -> int", 1, lambda x: int(x)),
    "string_of_int": BuiltinSpec("int -> string", 1, str),
    "string_of_float": BuiltinSpec("float -> string", 1, _string_of_float),
    "string_length": BuiltinSpec("string -> int", 1, len),
}


def builtin_value(name: str) -> Builtin:
    spec = BUILTINS[name]
    return Builtin(name, spec.arity, spec.fn)


__all__ = ["BUILTINS", "BuiltinSpec", "builtin_value", "values_equal", "compare_values", "UNIT"]
