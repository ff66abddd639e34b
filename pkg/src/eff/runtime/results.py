"""Results of computations and the handler algebra over them.

A computation either returns a value or suspends at an operation, carrying
the argument and a continuation. ``lift`` and ``apply_handler`` work on these
results directly; the machine does the same work with explicit frames, and
the two interoperate through ``FnContinuation``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Union


class Continuation:
    """Anything that can be resumed with a value, producing a Result."""

    __slots__ = ()

    def resume(self, w) -> "Result":
        raise NotImplementedError

    def __call__(self, w) -> "Result":
        return self.resume(w)


class FnContinuation(Continuation):
    __slots__ = ("fn",)

    def __init__(self, fn: Callable[[Any], "Result"]):
        self.fn = fn

    def resume(self, w) -> "Result":
        return self.fn(w)


IDENTITY = FnContinuation(lambda w: Value(w))


@dataclass(frozen=True)
class Value:
    value: Any


@dataclass(frozen=True, eq=False)
class Operation:
    instance: Any
    op: str
    arg: Any
    continuation: Continuation


Result = Union[Value, Operation]


def lift(f: Callable[[Any], "Result"], r) -> "Result":
    """Extend ``f`` from values to results by threading it through continuations."""
    if isinstance(r, Value):
        return f(r.value)
    kappa = r.continuation
    return Operation(r.instance, r.op, r.arg, FnContinuation(lambda w: lift(f, kappa.resume(w))))


def apply_handler(h, r, runtime, with_finally: bool = True) -> "Result":
    """Interpret ``r`` with handler value ``h`` (a deep handler)."""
    if with_finally and h.fin is not None:
        return lift(lambda v: _run_clause(runtime, h.fin, (v,)), apply_handler(h, r, runtime, False))
    if isinstance(r, Value):
        if h.val is None:
            return r
        return _run_clause(runtime, h.val, (r.value,))
    kappa = r.continuation
    handled = FnContinuation(lambda w: apply_handler(h, kappa.resume(w), runtime, False))
    clause = h.table.get((r.instance.id, r.op))
    if clause is None:
        return Operation(r.instance, r.op, r.arg, handled)
    b_arg, b_cont, code, env = clause
    return _run_clause(runtime, (None, code, env), (r.arg, handled), binders=(b_arg, b_cont))


def _run_clause(runtime, clause, values, binders=None):
    from .machine import EVAL, Machine, bind

    b, code, env = clause
    for bnd, v in zip(binders or (b,), values):
        env = bind(env, bnd, v)
    return Machine(runtime).run((EVAL, code, env))


__all__ = ["Continuation", "FnContinuation", "IDENTITY", "Value", "Operation", "lift", "apply_handler"]
