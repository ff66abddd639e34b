"""Runtime value representations.

Integers, booleans, strings and floats are the host values; unit is the
surface ``UNIT`` singleton; tuples are host tuples. Lists are immutable cons
cells so that continuations may share them freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from ..syntax.ast import UNIT, Unit

__all__ = [
    "UNIT", "Unit", "Nil", "NIL", "Cons", "Variant", "Closure", "Builtin", "OpFn",
    "Instance", "HandlerValue", "from_list", "to_list",
]


class Nil:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NIL"


NIL = Nil()


class Cons:
    __slots__ = ("head", "tail")

    def __init__(self, head, tail):
        self.head = head
        self.tail = tail

    def __iter__(self):
        node = self
        while node is not NIL:
            yield node.head
            node = node.tail

    def __repr__(self) -> str:
        return f"Cons{list(self)!r}"


def from_list(items) -> Any:
    out = NIL
    for item in reversed(list(items)):
        out = Cons(item, out)
    return out


def to_list(value) -> list:
    out = []
    while value is not NIL:
        out.append(value.head)
        value = value.tail
    return out


class Variant:
    __slots__ = ("constructor", "arg")

    def __init__(self, constructor: str, arg=None):
        self.constructor = constructor
        self.arg = arg

    def __repr__(self) -> str:
        return self.constructor if self.arg is None else f"{self.constructor}({self.arg!r})"


class Closure:
    __slots__ = ("bind", "body", "env")

    def __init__(self, bind: Callable, body: Callable, env: dict):
        self.bind = bind
        self.body = body
        self.env = env


class Builtin:
    """A host function applied to arguments one at a time."""

    __slots__ = ("name", "arity", "fn", "args")

    def __init__(self, name: str, arity: int, fn: Callable, args: tuple = ()):
        self.name = name
        self.arity = arity
        self.fn = fn
        self.args = args

    def __repr__(self) -> str:
        return f"<builtin {self.name}/{self.arity} {self.args!r}>"


@dataclass(eq=False)
class Instance:
    """An effect instance. ``resource`` maps operation names to clauses."""

    id: int
    label: Optional[str] = None
    resource: Optional[dict] = None

    def __repr__(self) -> str:
        return f"<{self.label or 'instance'} #{self.id}>"


@dataclass(eq=False)
class OpFn:
    """The generic effect ``inst#op``."""

    instance: Instance
    op: str


@dataclass(eq=False)
class HandlerValue:
    """A compiled handler. ``table`` is keyed by (instance id, operation)."""

    table: dict
    val: Optional[tuple] = None
    fin: Optional[tuple] = None
