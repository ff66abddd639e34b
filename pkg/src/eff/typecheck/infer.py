"""Hindley-Milner inference for core programs.

Let-bound computations are generalized only when they are ``val e`` (the
value restriction). Effect and variant types are nominal: each declaration
gets a key, and redeclaring a name with an identical definition reuses it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .. import core as C
from ..errors import NOWHERE, Span, TypeCheckError
from ..runtime.builtins import BUILTINS
from ..syntax import ast as A
from ..syntax.parser import parse, parse_type
from .types import (
    BOOL, EMPTY, FLOAT, INT, STRING, UNIT, Scheme, TArrow, TCon, THandler, TTuple, TVar, Type,
    generalize, instantiate, list_of, resolve, substitute, unify,
)

BUILTIN_TYPES = {"int": INT, "bool": BOOL, "unit": UNIT, "string": STRING, "float": FLOAT, "empty": EMPTY}

# Declared before anything else; ``std`` is an instance of it.
CHANNEL_DECL = "type channel = effect operation read : unit -> string operation write : string -> unit end"

GENERIC = 10**9  # level of declaration parameters: always instantiated


@dataclass
class TypeDef:
    key: str
    params: list[TVar]
    decl: A.TypeDecl
    operations: dict[str, tuple[Type, Type]] = field(default_factory=dict)
    constructors: dict[str, Optional[Type]] = field(default_factory=dict)
    alias: Optional[Type] = None

    @property
    def is_effect(self) -> bool:
        return isinstance(self.decl.definition, A.EffectSig)


@dataclass
class Context:
    """Global typing state. ``copy`` gives a snapshot for transactional checks."""

    values: dict[str, Scheme] = field(default_factory=dict)
    type_names: dict[str, str] = field(default_factory=dict)
    defs: dict[str, TypeDef] = field(default_factory=dict)
    constructors: dict[str, str] = field(default_factory=dict)
    effect_order: list[str] = field(default_factory=list)

    def copy(self) -> "Context":
        return Context(
            dict(self.values), dict(self.type_names), dict(self.defs),
            dict(self.constructors), list(self.effect_order),
        )

    @classmethod
    def initial(cls) -> "Context":
        ctx = cls()
        for name, spec in BUILTINS.items():
            t = Checker(ctx).convert(parse_type(spec.type), {}, generic=True)
            ctx.values[name] = Scheme([v for v in _vars(t)], t)
        decl = parse(CHANNEL_DECL)[0]
        Checker(ctx).declare(decl)
        ctx.values["std"] = Scheme.mono(TCon(ctx.type_names["channel"]))
        return ctx


def _vars(t: Type) -> list[TVar]:
    from .types import free_vars

    return free_vars(t)


Locals = dict  # name -> Scheme


class Checker:
    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.level = 0
        self.annotation_vars: dict[str, Type] = {}
        self.in_declaration = False

    # ------------------------------------------------------------ helpers

    def fresh(self) -> TVar:
        return TVar(self.level)

    def unify(self, a: Type, b: Type, span: Optional[Span]) -> None:
        unify(a, b, span)

    def error(self, message: str, span: Optional[Span], kind: str) -> TypeCheckError:
        return TypeCheckError(message, span, kind=kind)

    # ------------------------------------------------------------ type expressions

    def convert(self, t: A.TypeExpr, params: dict[str, Type], generic: bool = False) -> Type:
        if isinstance(t, A.TVarExpr):
            if t.name in params:
                return params[t.name]
            if generic:
                v = TVar(GENERIC)
                params[t.name] = v
                return v
            if self.in_declaration:
                raise self.error(f"unbound type variable {t.name}", t.span, "unknown-type")
            if t.name not in self.annotation_vars:
                self.annotation_vars[t.name] = self.fresh()
            return self.annotation_vars[t.name]
        if isinstance(t, A.TArrowExpr):
            return TArrow(self.convert(t.arg, params, generic), self.convert(t.result, params, generic))
        if isinstance(t, A.THandlerExpr):
            return THandler(self.convert(t.arg, params, generic), self.convert(t.result, params, generic))
        if isinstance(t, A.TProdExpr):
            return TTuple([self.convert(i, params, generic) for i in t.items])
        args = [self.convert(a, params, generic) for a in t.args]
        if t.name in BUILTIN_TYPES:
            self.check_arity(t, 0, len(args))
            return BUILTIN_TYPES[t.name]
        if t.name == "list" and t.name not in self.ctx.type_names:
            self.check_arity(t, 1, len(args))
            return list_of(args[0])
        key = self.ctx.type_names.get(t.name)
        if key is None:
            raise self.error(f"unknown type {t.name}", t.span, "unknown-type")
        d = self.ctx.defs[key]
        self.check_arity(t, len(d.params), len(args))
        if d.alias is not None:
            return substitute(d.alias, {p.id: a for p, a in zip(d.params, args)})
        return TCon(key, args)

    def check_arity(self, t: A.TConExpr, expected: int, got: int) -> None:
        if expected != got:
            raise self.error(
                f"type {t.name} expects {expected} argument(s) but is given {got}", t.span, "arity"
            )

    # ------------------------------------------------------------ declarations

    def declare(self, decl: A.TypeDecl) -> str:
        ctx = self.ctx
        for key, d in ctx.defs.items():
            if d.decl.name == decl.name and d.decl.params == decl.params and d.decl.definition == decl.definition:
                self._bind_names(d)
                return key
        key, n = decl.name, 1
        while key in ctx.defs:
            n += 1
            key = f"{decl.name}@{n}"
        params = [TVar(GENERIC) for _ in decl.params]
        d = TypeDef(key, params, decl)
        scope = dict(zip(decl.params, params))
        previous = ctx.type_names.get(decl.name)
        is_alias = not isinstance(decl.definition, (A.EffectSig, A.VariantDef))
        if not is_alias:
            ctx.type_names[decl.name] = key  # allow recursive references
        ctx.defs[key] = d
        self.in_declaration = True
        try:
            defn = decl.definition
            if isinstance(defn, A.EffectSig):
                for op, (a, b) in defn.operations.items():
                    d.operations[op] = (self.convert(a, dict(scope)), self.convert(b, dict(scope)))
            elif isinstance(defn, A.VariantDef):
                seen = set()
                for cname, arg in defn.constructors:
                    if cname in seen:
                        raise self.error(f"constructor {cname} declared twice", decl.span, "arity")
                    seen.add(cname)
                    d.constructors[cname] = None if arg is None else self.convert(arg, dict(scope))
            else:
                d.alias = self.convert(defn, dict(scope))
        except TypeCheckError:
            del ctx.defs[key]
            if previous is None:
                ctx.type_names.pop(decl.name, None)
            else:
                ctx.type_names[decl.name] = previous
            raise
        finally:
            self.in_declaration = False
        self._bind_names(d)
        return key

    def _bind_names(self, d: TypeDef) -> None:
        self.ctx.type_names[d.decl.name] = d.key
        for cname in d.constructors:
            self.ctx.constructors[cname] = d.key
        if d.is_effect:
            if d.key in self.ctx.effect_order:
                self.ctx.effect_order.remove(d.key)
            self.ctx.effect_order.append(d.key)

    def instantiate_def(self, d: TypeDef) -> tuple[TCon, dict[int, Type]]:
        args = [self.fresh() for _ in d.params]
        return TCon(d.key, args), {p.id: a for p, a in zip(d.params, args)}

    # ------------------------------------------------------------ operations

    def operation(self, inst_type: Type, op: str, span: Span) -> tuple[Type, Type]:
        """The (parameter, result) types of ``op`` on an instance of ``inst_type``."""
        t = resolve(inst_type)
        if isinstance(t, TVar):
            for key in reversed(self.ctx.effect_order):
                d = self.ctx.defs[key]
                if op in d.operations:
                    con, mapping = self.instantiate_def(d)
                    self.unify(t, con, span)
                    a, b = d.operations[op]
                    return substitute(a, mapping), substitute(b, mapping)
            raise self.error(f"unknown operation {op}", span, "unknown-operation")
        if isinstance(t, TCon) and t.key in self.ctx.defs:
            d = self.ctx.defs[t.key]
            if op in d.operations:
                mapping = {p.id: a for p, a in zip(d.params, t.args)}
                a, b = d.operations[op]
                return substitute(a, mapping), substitute(b, mapping)
        from .types import show_type

        raise self.error(f"type {show_type(t)} has no operation {op}", span, "unknown-operation")

    # ------------------------------------------------------------ patterns

    def pattern(self, p: A.Pattern, out: dict[str, Type]) -> Type:
        if isinstance(p, A.PVar):
            if p.name in out:
                raise self.error(f"variable {p.name} is bound twice in this pattern", p.span, "arity")
            t = self.fresh()
            out[p.name] = t
            return t
        if isinstance(p, A.PWild):
            return self.fresh()
        if isinstance(p, A.PConst):
            return literal_type(p.value)
        if isinstance(p, A.PTuple):
            return TTuple([self.pattern(i, out) for i in p.items])
        if isinstance(p, A.PNil):
            return list_of(self.fresh())
        if isinstance(p, A.PCons):
            head = self.pattern(p.head, out)
            tail = self.pattern(p.tail, out)
            self.unify(tail, list_of(head), p.span)
            return tail
        if isinstance(p, A.PAnnot):
            t = self.pattern(p.pattern, out)
            self.unify(t, self.convert(p.type, {}), p.span)
            return t
        if isinstance(p, A.PVariant):
            result, arg_type = self.constructor(p.constructor, p.arg is not None, p.span)
            if p.arg is not None:
                self.unify(self.pattern(p.arg, out), arg_type, p.span)
            return result
        raise TypeError(p)

    def constructor(self, name: str, has_arg: bool, span: Span) -> tuple[Type, Optional[Type]]:
        key = self.ctx.constructors.get(name)
        if key is None:
            raise self.error(f"unknown constructor {name}", span, "unknown-variable")
        d = self.ctx.defs[key]
        con, mapping = self.instantiate_def(d)
        arg = d.constructors[name]
        if (arg is None) == has_arg:
            wanted = "an argument" if arg is not None else "no argument"
            raise self.error(f"constructor {name} expects {wanted}", span, "arity")
        return con, None if arg is None else substitute(arg, mapping)

    # ------------------------------------------------------------ expressions

    def lookup(self, env: Locals, name: str, span: Span) -> Type:
        scheme = env.get(name)
        if scheme is None:
            scheme = self.ctx.values.get(name)
        if scheme is None:
            raise self.error(f"unknown variable {name}", span, "unknown-variable")
        return instantiate(scheme, self.level)

    def expr(self, env: Locals, e: C.Expr) -> Type:
        if isinstance(e, C.EVar):
            return self.lookup(env, e.name, e.span)
        if isinstance(e, C.EConst):
            if isinstance(e.value, A.Prim):
                return instantiate(self.ctx_builtin(e.value.name), self.level)
            return literal_type(e.value)
        if isinstance(e, C.ETuple):
            return TTuple([self.expr(env, i) for i in e.items])
        if isinstance(e, C.EVariant):
            result, arg_type = self.constructor(e.constructor, e.arg is not None, e.span)
            if e.arg is not None:
                self.unify(arg_type, self.expr(env, e.arg), e.arg.span)
            return result
        if isinstance(e, C.EList):
            elem = self.fresh()
            for item in e.items:
                self.unify(elem, self.expr(env, item), item.span)
            return list_of(elem)
        if isinstance(e, C.ECons):
            head = self.expr(env, e.head)
            tail = self.expr(env, e.tail)
            self.unify(list_of(head), tail, e.span)
            return tail
        if isinstance(e, C.ELambda):
            bound: dict[str, Type] = {}
            arg = self.pattern(e.param, bound)
            body = self.comp(extend(env, bound), e.body)
            return TArrow(arg, body)
        if isinstance(e, C.EProject):
            a, b = self.operation(self.expr(env, e.instance), e.op, e.span)
            return TArrow(a, b)
        if isinstance(e, C.EHandler):
            return self.handler(env, e)
        raise TypeError(e)

    def ctx_builtin(self, name: str) -> Scheme:
        # Prim constants bypass user shadowing, so consult the pristine table.
        t = self.convert(parse_type(BUILTINS[name].type), {}, generic=True)
        return Scheme(_vars(t), t)

    def handler(self, env: Locals, h: C.EHandler) -> Type:
        a, b, c = self.fresh(), self.fresh(), self.fresh()
        for clause in h.clauses:
            op_arg, op_res = self.operation(self.expr(env, clause.instance), clause.op, clause.span)
            bound: dict[str, Type] = {}
            self.unify(self.pattern(clause.arg, bound), op_arg, clause.span)
            self.unify(self.pattern(clause.cont, bound), TArrow(op_res, b), clause.span)
            self.unify(self.comp(extend(env, bound), clause.body), b, clause.body.span)
        self.clause(env, h.val, a, b)
        self.clause(env, h.fin, b, c)
        return THandler(a, c)

    def clause(self, env: Locals, clause: tuple[A.Pattern, C.Comp], arg: Type, result: Type) -> None:
        pat, body = clause
        bound: dict[str, Type] = {}
        self.unify(self.pattern(pat, bound), arg, pat.span)
        self.unify(self.comp(extend(env, bound), body), result, body.span)

    # ------------------------------------------------------------ computations

    def comp(self, env: Locals, c: C.Comp) -> Type:
        # Chains of lets are walked iteratively to keep host recursion shallow.
        # The chain owns one copy of env, updated in place as bindings finish.
        if isinstance(c, C.CLet):
            env = dict(env)
        while isinstance(c, C.CLet):
            env.update(self.let_binding(env, c.pattern, c.bound, c.span))
            c = c.body
        if isinstance(c, C.CVal):
            return self.expr(env, c.expr)
        if isinstance(c, C.CLetSim):
            new: dict[str, Scheme] = {}
            for pat, bound_comp in c.bindings:
                for name, scheme in self.let_binding(env, pat, bound_comp, c.span).items():
                    if name in new:
                        raise self.error(f"variable {name} is bound twice", c.span, "arity")
                    new[name] = scheme
            return self.comp(extend_schemes(env, new), c.body)
        if isinstance(c, C.CLetRec):
            return self.comp(extend_schemes(env, self.let_rec(env, c.bindings)), c.body)
        if isinstance(c, C.CIf):
            self.unify(self.expr(env, c.cond), BOOL, c.cond.span)
            t = self.comp(env, c.then)
            self.unify(t, self.comp(env, c.orelse), c.orelse.span)
            return t
        if isinstance(c, C.CAbsurd):
            self.unify(self.expr(env, c.expr), EMPTY, c.expr.span)
            return self.fresh()
        if isinstance(c, C.CMatch):
            scrutinee = self.expr(env, c.scrutinee)
            result = self.fresh()
            for pat, body in c.cases:
                bound: dict[str, Type] = {}
                self.unify(self.pattern(pat, bound), scrutinee, pat.span)
                self.unify(self.comp(extend(env, bound), body), result, body.span)
            return result
        if isinstance(c, C.CApp):
            fn = self.expr(env, c.fn)
            arg = self.expr(env, c.arg)
            known = resolve(fn)
            if isinstance(known, TArrow):
                # report the argument mismatch rather than the whole arrow
                self.unify(known.arg, arg, c.span)
                return known.result
            result = self.fresh()
            self.unify(fn, TArrow(arg, result), c.span)
            return result
        if isinstance(c, C.CNew):
            return self.new(env, c)
        if isinstance(c, C.CWith):
            h = self.expr(env, c.handler)
            body = self.comp(env, c.body)
            known = resolve(h)
            if isinstance(known, THandler):
                self.unify(known.arg, body, c.span)
                return known.result
            result = self.fresh()
            self.unify(h, THandler(body, result), c.span)
            return result
        raise TypeError(c)

    def new(self, env: Locals, c: C.CNew) -> Type:
        key = self.ctx.type_names.get(c.effect)
        d = self.ctx.defs.get(key) if key else None
        if d is None or not d.is_effect:
            raise self.error(f"{c.effect} is not an effect type", c.span, "unknown-type")
        con, mapping = self.instantiate_def(d)
        if c.clauses is None:
            return con
        state = self.expr(env, c.init)
        for clause in c.clauses:
            if clause.op not in d.operations:
                raise self.error(f"effect {c.effect} has no operation {clause.op}", clause.span, "unknown-operation")
            a, b = d.operations[clause.op]
            bound: dict[str, Type] = {}
            self.unify(self.pattern(clause.arg, bound), substitute(a, mapping), clause.span)
            self.unify(self.pattern(clause.state, bound), state, clause.span)
            result = self.comp(extend(env, bound), clause.body)
            self.unify(result, TTuple([substitute(b, mapping), state]), clause.body.span)
        return con

    def let_binding(self, env: Locals, pat: A.Pattern, bound: C.Comp, span: Span) -> dict[str, Scheme]:
        generalizable = isinstance(bound, C.CVal)
        self.level += 1
        t = self.comp(env, bound)
        names: dict[str, Type] = {}
        self.unify(self.pattern(pat, names), t, pat.span if pat.span != NOWHERE else span)
        self.level -= 1
        if generalizable:
            return {n: generalize(ty, self.level) for n, ty in names.items()}
        return {n: Scheme.mono(ty) for n, ty in names.items()}

    def let_rec(self, env: Locals, bindings: list[tuple[str, C.ELambda]]) -> dict[str, Scheme]:
        self.level += 1
        tvars = {name: self.fresh() for name, _ in bindings}
        if len(tvars) != len(bindings):
            raise self.error("a name is bound twice in let rec", bindings[0][1].span, "arity")
        inner = extend(env, tvars)
        for name, fn in bindings:
            self.unify(tvars[name], self.expr(inner, fn), fn.span)
        self.level -= 1
        return {n: generalize(t, self.level) for n, t in tvars.items()}

    # ------------------------------------------------------------ toplevel

    def item(self, item: C.CoreItem):
        self.annotation_vars = {}
        if isinstance(item, A.TypeDecl):
            self.declare(item)
            return None
        if isinstance(item, C.CoreComp):
            return self.comp({}, item.comp)
        if isinstance(item, C.CoreLet):
            new: dict[str, Scheme] = {}
            for pat, bound in item.bindings:
                new.update(self.let_binding({}, pat, bound, item.span))
            self.ctx.values.update(new)
            return new
        if isinstance(item, C.CoreLetRec):
            new = self.let_rec({}, item.bindings)
            self.ctx.values.update(new)
            return new
        raise TypeError(item)


def literal_type(value) -> Type:
    if value is A.UNIT:
        return UNIT
    if isinstance(value, bool):
        return BOOL
    if isinstance(value, int):
        return INT
    if isinstance(value, float):
        return FLOAT
    if isinstance(value, str):
        return STRING
    raise TypeError(value)


def extend(env: Locals, types: dict[str, Type]) -> Locals:
    if not types:
        return env
    out = dict(env)
    for name, t in types.items():
        out[name] = Scheme.mono(t)
    return out


def extend_schemes(env: Locals, schemes: dict[str, Scheme]) -> Locals:
    if not schemes:
        return env
    out = dict(env)
    out.update(schemes)
    return out


# ---------------------------------------------------------------- public API

def infer_expr(ctx: Context, e: C.Expr, env: Optional[dict[str, Scheme]] = None) -> Type:
    return Checker(ctx).expr(env or {}, e)


def infer_comp(ctx: Context, c: C.Comp, env: Optional[dict[str, Scheme]] = None) -> Type:
    return Checker(ctx).comp(env or {}, c)


def check_item(ctx: Context, item: C.CoreItem) -> Union[None, Type, dict[str, Scheme]]:
    """Check a toplevel item, updating ``ctx`` only if it is well typed."""
    trial = ctx.copy()
    result = Checker(trial).item(item)
    ctx.values, ctx.type_names, ctx.defs = trial.values, trial.type_names, trial.defs
    ctx.constructors, ctx.effect_order = trial.constructors, trial.effect_order
    return result
