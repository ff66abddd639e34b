"""Toplevel evaluation: resources, the store, and the built-in ``std`` channel."""

from __future__ import annotations

import itertools
import sys
from typing import Optional, TextIO

from .. import core as C
from ..errors import EffRuntimeError, ResourceError, UncaughtOperation
from ..syntax import ast as A
from .builtins import BUILTINS, builtin_value
from .machine import EVAL, Compiler, Machine, bind
from .printer import show_value
from .results import Operation, Value
from .values import UNIT, Instance

DEFAULT_FUEL: Optional[int] = None


class Store(dict):
    """Resource states indexed by instance id; one per program run."""


class Runtime:
    """Everything owned by one program run: globals, store and instance counter."""

    def __init__(self, stdout: Optional[TextIO] = None, stdin: Optional[TextIO] = None, fuel: Optional[int] = DEFAULT_FUEL):
        self.stdout = stdout
        self.stdin = stdin
        self.fuel = fuel
        self.store = Store()
        self._ids = itertools.count()
        self.globals: dict = {name: builtin_value(name) for name in BUILTINS}
        self.std = self.new_instance("channel", {"read": self._read, "write": self._write}, UNIT)
        self.globals["std"] = self.std

    # ------------------------------------------------------------ std

    def _write(self, arg, state):
        out = self.stdout if self.stdout is not None else sys.stdout
        out.write(arg)
        return UNIT, state

    def _read(self, arg, state):
        inp = self.stdin if self.stdin is not None else sys.stdin
        line = inp.readline()
        if line.endswith("\n"):
            line = line[:-1]
        return line, state

    # ------------------------------------------------------------ instances

    def new_instance(self, label: Optional[str] = None, resource: Optional[dict] = None, init=None) -> Instance:
        inst = Instance(next(self._ids), label, resource)
        if resource is not None:
            self.store[inst.id] = init
        return inst

    # ------------------------------------------------------------ evaluation

    def compiler(self) -> Compiler:
        return Compiler(self, self.globals)

    def eval_comp(self, c: C.Comp, env: Optional[dict] = None):
        """Evaluate to a Result without consulting resources."""
        env = env or {}
        code = self.compiler().comp(c, frozenset(env))
        return Machine(self).run((EVAL, code, env))

    def eval_expr(self, e: C.Expr, env: Optional[dict] = None):
        env = env or {}
        return self.compiler().expr(e, frozenset(env))(env)

    def toplevel_run(self, c: C.Comp, env: Optional[dict] = None):
        return self.finish(self.eval_comp(c, env))

    def finish(self, result):
        """Serve escaping operations from resources until a value remains."""
        while isinstance(result, Operation):
            inst, op = result.instance, result.op
            clause = inst.resource.get(op) if inst.resource is not None else None
            if clause is None:
                raise UncaughtOperation(f"{show_value(inst)}#{op} {show_value(result.arg, True)}")
            state = self.store[inst.id]
            if callable(clause):
                value, new_state = clause(result.arg, state)
            else:
                b_arg, b_state, code, env = clause
                env = bind(bind(env, b_arg, result.arg), b_state, state)
                r = Machine(self).run((EVAL, code, env))
                if isinstance(r, Operation):
                    raise ResourceError(
                        f"operation {show_value(r.instance)}#{r.op} was triggered inside the resource of "
                        f"{show_value(inst)}#{op}"
                    )
                pair = r.value
                if type(pair) is not tuple or len(pair) != 2:
                    raise ResourceError(f"resource clause for {op} must return a pair (value, state)")
                value, new_state = pair
            self.store[inst.id] = new_state
            result = result.continuation.resume(value)
        return result.value

    def run_item(self, item: C.CoreItem):
        """Execute a toplevel item. Returns the value of a computation or the
        new bindings of a let, and installs those bindings globally."""
        if isinstance(item, A.TypeDecl):
            return None
        compiler = self.compiler()
        if isinstance(item, C.CoreComp):
            code = compiler.comp(item.comp, frozenset())
            return self.finish(Machine(self).run((EVAL, code, {})))
        if isinstance(item, C.CoreLet):
            new: dict = {}
            for pat, bound in item.bindings:
                code = compiler.comp(bound, frozenset())
                value = self.finish(Machine(self).run((EVAL, code, {})))
                bound_env = bind({}, _binder(pat), value)
                for name in A.pattern_vars(pat):
                    new[name] = bound_env[name]
            self.globals.update(new)
            return new
        if isinstance(item, C.CoreLetRec):
            letrec = C.CLetRec(item.bindings, C.CVal(C.ETuple([C.EVar(n) for n, _ in item.bindings] + [C.EConst(UNIT)])))
            values = self.toplevel_run(letrec)
            new = {n: v for (n, _), v in zip(item.bindings, values)}
            self.globals.update(new)
            return new
        raise TypeError(item)


def _binder(p):
    from .machine import binder

    return binder(p)


__all__ = ["Runtime", "Store", "EffRuntimeError"]
