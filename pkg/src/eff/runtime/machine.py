"""Compilation of core terms to host closures, and the abstract machine.

Machine registers:

* ``k``    -- frames of the current handler segment, a cons list ``(frame, rest)``;
* ``meta`` -- enclosing segments, a cons list ``(handler, k_outside, meta_outside)``.
  A ``None`` handler marks a transparent delimiter left by resuming a continuation.

Both are immutable, so a captured continuation is just the tuple of segments
between the operation and its handler, and may be resumed any number of times.
"""

from __future__ import annotations

import dataclasses

from typing import Callable, Optional

from .. import core as C
from ..errors import IllFormedValue, MatchFailure, OutOfFuel, StackExhausted
from ..syntax import ast as A
from .builtins import builtin_value, values_equal
from .results import Continuation, FnContinuation, Operation, Value
from .values import NIL, UNIT, Builtin, Closure, Cons, HandlerValue, Instance, OpFn, Variant

EVAL, RET, PERFORM = 0, 1, 2

Code = Callable  # (env, machine) -> action


# ---------------------------------------------------------------- patterns

def compile_pattern(p: A.Pattern) -> Callable[[object, dict], bool]:
    """A matcher writing bindings into ``out`` and returning success."""
    if isinstance(p, A.PVar):
        name = p.name

        def m_var(v, out):
            out[name] = v
            return True
        return m_var
    if isinstance(p, A.PWild):
        return lambda v, out: True
    if isinstance(p, A.PAnnot):
        return compile_pattern(p.pattern)
    if isinstance(p, A.PConst):
        const = p.value
        if const is UNIT:
            return lambda v, out: v is UNIT
        kind = type(const)
        return lambda v, out: type(v) is kind and v == const
    if isinstance(p, A.PTuple):
        subs = [compile_pattern(i) for i in p.items]
        n = len(subs)

        def m_tuple(v, out):
            if type(v) is not tuple or len(v) != n:
                return False
            for sub, item in zip(subs, v):
                if not sub(item, out):
                    return False
            return True
        return m_tuple
    if isinstance(p, A.PVariant):
        name = p.constructor
        if p.arg is None:
            return lambda v, out: type(v) is Variant and v.constructor == name
        sub = compile_pattern(p.arg)
        return lambda v, out: type(v) is Variant and v.constructor == name and v.arg is not None and sub(v.arg, out)
    if isinstance(p, A.PNil):
        return lambda v, out: v is NIL
    if isinstance(p, A.PCons):
        head, tail = compile_pattern(p.head), compile_pattern(p.tail)
        return lambda v, out: type(v) is Cons and head(v.head, out) and tail(v.tail, out)
    raise TypeError(p)


def binder(p: A.Pattern):
    """A variable name for the common case, else a compiled matcher."""
    while isinstance(p, A.PAnnot):
        p = p.pattern
    if isinstance(p, A.PVar):
        return p.name
    return compile_pattern(p)


def bind(env: dict, b, v) -> dict:
    if type(b) is str:
        new = env.copy()
        new[b] = v
        return new
    new = env.copy()
    if not b(v, new):
        raise MatchFailure(f"value {_short(v)} does not match the pattern")
    return new


def _short(v) -> str:
    from .printer import show_value

    text = show_value(v)
    return text if len(text) < 60 else text[:57] + "..."


def mentions(node) -> set[str]:
    """Every variable spelling used anywhere inside a core node."""
    found: set[str] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, (list, tuple)):
            stack.extend(n)
        elif isinstance(n, C.EVar):
            found.add(n.name)
        elif dataclasses.is_dataclass(n) and not isinstance(n, type):
            stack.extend(getattr(n, f.name) for f in dataclasses.fields(n) if f.name != "span")
    return found


# ---------------------------------------------------------------- frames

class LetFrame:
    __slots__ = ("b", "body", "env")

    def __init__(self, b, body, env):
        self.b, self.body, self.env = b, body, env

    def resume(self, v, m):
        return (EVAL, self.body, bind(self.env, self.b, v))


class SeqFrame:
    __slots__ = ("body", "env")

    def __init__(self, body, env):
        self.body, self.env = body, env

    def resume(self, v, m):
        return (EVAL, self.body, self.env)


class SimFrame:
    """Collects the values of a simultaneous let, left to right."""

    __slots__ = ("sim", "index", "values", "env")

    def __init__(self, sim, index, values, env):
        self.sim, self.index, self.values, self.env = sim, index, values, env

    def resume(self, v, m):
        binders, codes, body = self.sim
        values = self.values + (v,)
        nxt = self.index + 1
        if nxt < len(codes):
            m.k = (SimFrame(self.sim, nxt, values, self.env), m.k)
            return (EVAL, codes[nxt], self.env)
        env = self.env
        for b, value in zip(binders, values):
            if type(b) is str:
                env = env.copy() if env is self.env else env
                env[b] = value
            else:
                env = bind(env, b, value)
        return (EVAL, body, env)


class ApplyFrame:
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def resume(self, v, m):
        return m.apply(v, self.arg)


class FinallyFrame:
    __slots__ = ("handler",)

    def __init__(self, handler):
        self.handler = handler

    def resume(self, v, m):
        b, code, env = self.handler.fin
        return (EVAL, code, bind(env, b, v))


# ---------------------------------------------------------------- continuations

class MachineContinuation(Continuation):
    """Captured segments ``((k0, h1), (k1, h2), ...)``, innermost first, and an
    optional host continuation to run before them."""

    __slots__ = ("segments", "inner", "runtime")

    def __init__(self, segments: tuple, inner: Optional[Continuation], runtime):
        self.segments = segments
        self.inner = inner
        self.runtime = runtime

    def resume(self, w):
        m = Machine(self.runtime)
        return m.run(m.resume(self, w))


# ---------------------------------------------------------------- machine

class Machine:
    __slots__ = ("k", "meta", "runtime")

    def __init__(self, runtime):
        self.k = None
        self.meta = None
        self.runtime = runtime

    def apply(self, f, a):
        tf = type(f)
        if tf is Closure:
            return (EVAL, f.body, bind(f.env, f.bind, a))
        if tf is Builtin:
            args = f.args + (a,)
            if len(args) == f.arity:
                return (RET, f.fn(*args))
            return (RET, Builtin(f.name, f.arity, f.fn, args))
        if tf is OpFn:
            return (PERFORM, f.instance, f.op, a, None)
        if tf is MachineContinuation:
            return self.resume(f, a)
        if isinstance(f, Continuation):
            return self.reflect(f.resume(a))
        raise IllFormedValue(f"cannot apply {_short(f)}, it is not a function")

    def resume(self, cont: MachineContinuation, w):
        for k_i, h_i in reversed(cont.segments):
            # A transparent delimiter over an empty segment is redundant; skipping
            # it keeps the handler chain from growing across resumptions.
            if h_i is not None or self.k is not None:
                self.meta = (h_i, self.k, self.meta)
            self.k = k_i
        if cont.inner is not None:
            return self.reflect(cont.inner.resume(w))
        return (RET, w)

    @staticmethod
    def reflect(r):
        if type(r) is Value:
            return (RET, r.value)
        return (PERFORM, r.instance, r.op, r.arg, r.continuation)

    def run(self, action):
        """Drive the machine until the outermost segment returns or an
        operation escapes every handler; both are reported as a Result."""
        rt = self.runtime
        budget = rt.fuel
        steps = 0
        try:
            while True:
                tag = action[0]
                if tag is EVAL:
                    steps += 1
                    action = action[1](action[2], self)
                elif tag is RET:
                    k = self.k
                    if k is not None:
                        frame, self.k = k
                        action = frame.resume(action[1], self)
                        continue
                    meta = self.meta
                    if meta is None:
                        return Value(action[1])
                    h, self.k, self.meta = meta
                    if h is not None and h.val is not None:
                        b, code, env = h.val
                        action = (EVAL, code, bind(env, b, action[1]))
                else:
                    _, inst, op, arg, inner = action
                    segments = []
                    k, meta = self.k, self.meta
                    key = (inst.id, op)
                    while meta is not None:
                        h, k_out, meta_out = meta
                        segments.append((k, h))
                        if h is not None:
                            clause = h.table.get(key)
                            if clause is not None:
                                cont = MachineContinuation(tuple(segments), inner, rt)
                                self.k, self.meta = k_out, meta_out
                                b_arg, b_cont, code, env = clause
                                env = bind(bind(env, b_arg, arg), b_cont, cont)
                                action = (EVAL, code, env)
                                break
                        k, meta = k_out, meta_out
                    else:
                        segments.append((k, None))
                        return Operation(inst, op, arg, MachineContinuation(tuple(segments), inner, rt))
                if budget is not None and steps > budget:
                    raise OutOfFuel(f"evaluation exceeded {budget} steps")
        except RecursionError:
            raise StackExhausted("host stack exhausted") from None
        finally:
            if budget is not None:
                rt.fuel = max(budget - steps, 0)


# ---------------------------------------------------------------- compiler

_MISSING = object()


class Compiler:
    """Turns core terms into host closures. Free variables not in ``scope`` are
    resolved against ``globals`` once, at compile time."""

    def __init__(self, runtime, globals_: dict):
        self.runtime = runtime
        self.globals = globals_

    # ------------------------------------------------------------ expressions

    def expr(self, e: C.Expr, scope: frozenset) -> Callable[[dict], object]:
        if isinstance(e, C.EVar):
            name = e.name
            if name in scope:
                return lambda env: env[name]
            value = self.globals.get(name, _MISSING)
            if value is _MISSING:
                def unbound(env):
                    raise IllFormedValue(f"unbound variable {name}")
                return unbound
            return lambda env: value
        if isinstance(e, C.EConst):
            value = builtin_value(e.value.name) if isinstance(e.value, A.Prim) else e.value
            return lambda env: value
        if isinstance(e, C.ETuple):
            items = [self.expr(i, scope) for i in e.items]
            if len(items) == 2:
                a, b = items
                return lambda env: (a(env), b(env))
            return lambda env: tuple([f(env) for f in items])
        if isinstance(e, C.EVariant):
            name = e.constructor
            if e.arg is None:
                value = Variant(name)
                return lambda env: value
            arg = self.expr(e.arg, scope)
            return lambda env: Variant(name, arg(env))
        if isinstance(e, C.EList):
            items = [self.expr(i, scope) for i in reversed(e.items)]

            def make_list(env):
                out = NIL
                for f in items:
                    out = Cons(f(env), out)
                return out
            return make_list
        if isinstance(e, C.ECons):
            head, tail = self.expr(e.head, scope), self.expr(e.tail, scope)

            def make_cons(env):
                h = head(env)
                t = tail(env)
                if t is not NIL and type(t) is not Cons:
                    raise IllFormedValue("the tail of :: is not a list")
                return Cons(h, t)
            return make_cons
        if isinstance(e, C.ELambda):
            b = binder(e.param)
            body = self.comp(e.body, scope | set(A.pattern_vars(e.param)))
            return lambda env: Closure(b, body, env)
        if isinstance(e, C.EProject):
            inst, op = self.expr(e.instance, scope), e.op

            def project(env):
                i = inst(env)
                if type(i) is not Instance:
                    raise IllFormedValue(f"#{op} applied to a value that is not an effect instance")
                return OpFn(i, op)
            return project
        if isinstance(e, C.EHandler):
            return self.handler(e, scope)
        raise TypeError(e)

    def clause_code(self, pats: list[A.Pattern], body: C.Comp, scope: frozenset):
        inner = scope.union(*(A.pattern_vars(p) for p in pats))
        return [binder(p) for p in pats], self.comp(body, inner)

    def handler(self, h: C.EHandler, scope: frozenset):
        compiled = []
        for c in h.clauses:
            (b_arg, b_cont), code = self.clause_code([c.arg, c.cont], c.body, scope)
            compiled.append((self.expr(c.instance, scope), c.op, b_arg, b_cont, code))
        val = None if C.is_identity_clause(h.val) else self.clause_code([h.val[0]], h.val[1], scope)
        fin = None if C.is_identity_clause(h.fin) else self.clause_code([h.fin[0]], h.fin[1], scope)

        def make_handler(env):
            table = {}
            for inst, op, b_arg, b_cont, code in compiled:
                i = inst(env)
                if type(i) is not Instance:
                    raise IllFormedValue(f"handler clause for #{op} names a value that is not an effect instance")
                table[(i.id, op)] = (b_arg, b_cont, code, env)
            return HandlerValue(
                table,
                None if val is None else (val[0][0], val[1], env),
                None if fin is None else (fin[0][0], fin[1], env),
            )
        return make_handler

    # ------------------------------------------------------------ computations

    def comp(self, c: C.Comp, scope: frozenset) -> Code:
        if isinstance(c, C.CVal):
            f = self.expr(c.expr, scope)
            return lambda env, m: (RET, f(env))
        if isinstance(c, C.CLet):
            return self.let(c, scope)
        if isinstance(c, C.CLetSim):
            codes = [self.comp(b, scope) for _, b in c.bindings]
            names = set().union(*(A.pattern_vars(p) for p, _ in c.bindings))
            sim = ([binder(p) for p, _ in c.bindings], codes, self.comp(c.body, scope | names))
            first = codes[0]

            def let_sim(env, m):
                m.k = (SimFrame(sim, 0, (), env), m.k)
                return first(env, m)
            return let_sim
        if isinstance(c, C.CLetRec):
            inner = scope | {n for n, _ in c.bindings}
            fns = [(n, binder(f.param), self.comp(f.body, inner | set(A.pattern_vars(f.param)))) for n, f in c.bindings]
            body = self.comp(c.body, inner)

            def let_rec(env, m):
                new = env.copy()
                for n, b, code in fns:
                    new[n] = Closure(b, code, new)
                return (EVAL, body, new)
            return let_rec
        if isinstance(c, C.CIf):
            cond, then, orelse = self.expr(c.cond, scope), self.comp(c.then, scope), self.comp(c.orelse, scope)

            def if_(env, m):
                v = cond(env)
                if v is True:
                    return then(env, m)
                if v is False:
                    return orelse(env, m)
                raise IllFormedValue("if condition is not a boolean")
            return if_
        if isinstance(c, C.CAbsurd):
            f = self.expr(c.expr, scope)

            def absurd(env, m):
                f(env)
                raise IllFormedValue("reached a value of the empty type")
            return absurd
        if isinstance(c, C.CMatch):
            scrutinee = self.expr(c.scrutinee, scope)
            cases = [
                (compile_pattern(p), self.comp(b, scope | set(A.pattern_vars(p))), bool(A.pattern_vars(p)))
                for p, b in c.cases
            ]

            def match(env, m):
                v = scrutinee(env)
                for matcher, code, binds in cases:
                    if binds:
                        out = env.copy()
                        if matcher(v, out):
                            return code(out, m)
                    elif matcher(v, None):
                        return code(env, m)
                raise MatchFailure(f"no case matches {_short(v)}")
            return match
        if isinstance(c, C.CApp):
            fn, arg = self.expr(c.fn, scope), self.expr(c.arg, scope)
            return lambda env, m: m.apply(fn(env), arg(env))
        if isinstance(c, C.CNew):
            return self.new(c, scope)
        if isinstance(c, C.CWith):
            h, body = self.expr(c.handler, scope), self.comp(c.body, scope)

            def with_(env, m):
                hv = h(env)
                if type(hv) is not HandlerValue:
                    raise IllFormedValue("with ... handle expects a handler")
                if hv.fin is not None:
                    m.k = (FinallyFrame(hv), m.k)
                m.meta = (hv, m.k, m.meta)
                m.k = None
                return (EVAL, body, env)
            return with_
        raise TypeError(c)

    def let(self, c: C.CLet, scope: frozenset) -> Code:
        pat, bound, body = c.pattern, c.bound, c.body
        if isinstance(bound, C.CVal):
            return self.val_chain(c, scope)
        names = set(A.pattern_vars(pat))
        body_code = self.comp(body, scope | names)
        b = binder(pat)
        # let t = f a in t b, the shape produced for every binary operator
        if (
            isinstance(pat, A.PVar)
            and isinstance(bound, C.CApp)
            and isinstance(body, C.CApp)
            and isinstance(body.fn, C.EVar)
            and body.fn.name == pat.name
            and not (isinstance(body.arg, C.EVar) and body.arg.name == pat.name)
            and isinstance(body.arg, (C.EVar, C.EConst))
        ):
            fn, a1, a2 = self.expr(bound.fn, scope), self.expr(bound.arg, scope), self.expr(body.arg, scope)

            def apply2(env, m):
                f = fn(env)
                x = a1(env)
                y = a2(env)
                if type(f) is Builtin and f.arity - len(f.args) == 2:
                    return (RET, f.fn(*f.args, x, y))
                m.k = (ApplyFrame(y), m.k)
                return m.apply(f, x)
            return apply2
        bound_code = self.comp(bound, scope)
        if isinstance(pat, A.PWild):
            def seq(env, m):
                m.k = (SeqFrame(body_code, env), m.k)
                return bound_code(env, m)
            return seq

        def let(env, m):
            m.k = (LetFrame(b, body_code, env), m.k)
            return bound_code(env, m)
        return let

    def val_chain(self, c: C.CLet, scope: frozenset) -> Code:
        """A run of ``let p = val e in`` sharing one copy of the environment.

        A binding joins the run only if its names are new to the scope and
        unmentioned by earlier bounds, so in-place assignment is unobservable.
        """
        steps, names, mentioned = [], set(), set()
        node = c
        while isinstance(node, C.CLet) and isinstance(node.bound, C.CVal):
            new = A.pattern_vars(node.pattern)
            if steps and any(v in scope or v in names or v in mentioned for v in new):
                break
            steps.append((node.pattern, node.bound.expr))
            names.update(new)
            mentioned |= mentions(node.bound.expr)
            node = node.body
        inner = scope | names
        compiled = [(binder(p), self.expr(e, inner)) for p, e in steps]
        body_code = self.comp(node, inner)

        def chain(env, m):
            env = env.copy()
            for b, f in compiled:
                v = f(env)
                if type(b) is str:
                    env[b] = v
                elif not b(v, env):
                    raise MatchFailure(f"value {_short(v)} does not match the pattern")
            return body_code(env, m)
        return chain

    def new(self, c: C.CNew, scope: frozenset) -> Code:
        label = c.effect
        rt = self.runtime
        if c.clauses is None:
            return lambda env, m: (RET, rt.new_instance(label))
        init = self.expr(c.init, scope)
        clauses = [(cl.op, *self.clause_code([cl.arg, cl.state], cl.body, scope)) for cl in c.clauses]

        def new_resource(env, m):
            resource = {op: (b[0], b[1], code, env) for op, b, code in clauses}
            return (RET, rt.new_instance(label, resource, init(env)))
        return new_resource


__all__ = ["Machine", "MachineContinuation", "Compiler", "compile_pattern", "EVAL", "RET", "PERFORM"]
