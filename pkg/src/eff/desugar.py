"""Separate the mixed surface tree into core expressions and computations.

Expressions in computation position are wrapped in ``val``; computations in
expression position are bound to fresh variables by a ``let`` placed just
outside the expression. All computations hoisted from one expression share a
single simultaneous ``let`` and keep their left-to-right order.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from . import core as C
from .errors import NOWHERE, Span
from .syntax import ast as A

FRESH_PREFIX = "$t"


@dataclass
class Diagnostic:
    severity: str
    code: str
    message: str
    span: Span = field(default=NOWHERE, compare=False)

    def render(self, filename: Optional[str] = None) -> str:
        where = f"{filename or '<input>'}:{self.span.start}: " if self.span.start.line > 0 else ""
        return f"{where}{self.severity}[{self.code}]: {self.message}"


def is_expression(term: A.Term) -> bool:
    """True iff ``term`` already belongs to the expression fragment."""
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, (A.Var, A.Const, A.Lambda)):
            continue
        if isinstance(t, A.Project):
            stack.append(t.instance)
        elif isinstance(t, A.HandlerLit):
            stack.extend(c.instance for c in t.clauses)
        elif isinstance(t, (A.Tuple, A.ListLit)):
            stack.extend(t.items)
        elif isinstance(t, A.Variant):
            if t.arg is not None:
                stack.append(t.arg)
        elif isinstance(t, A.Cons):
            stack.extend([t.head, t.tail])
        else:
            return False
    return True


def identifiers(node) -> set[str]:
    """Every variable spelling occurring anywhere in a surface tree."""
    found: set[str] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, (list, tuple)):
            stack.extend(n)
        elif isinstance(n, (A.Var, A.PVar)):
            found.add(n.name)
        elif isinstance(n, A.LetRec) or isinstance(n, A.TopLetRec):
            found.update(name for name, _ in n.bindings)
            stack.extend(t for _, t in n.bindings)
            if isinstance(n, A.LetRec):
                stack.append(n.body)
        elif dataclasses.is_dataclass(n) and not isinstance(n, type):
            if isinstance(n, A.For):
                found.add(n.var)
            for f in dataclasses.fields(n):
                if f.name != "span":
                    stack.append(getattr(n, f.name))
    return found


class Desugarer:
    def __init__(self, avoid: set[str]):
        self.avoid = avoid
        self.counter = 0
        self.diagnostics: list[Diagnostic] = []

    def fresh(self) -> str:
        while True:
            self.counter += 1
            name = f"{FRESH_PREFIX}{self.counter}"
            if name not in self.avoid:
                return name

    # ------------------------------------------------------------ helpers

    def bind(self, hoisted: list[tuple[A.Pattern, C.Comp]], body: C.Comp, span: Span) -> C.Comp:
        if not hoisted:
            return body
        if len(hoisted) == 1:
            pat, comp = hoisted[0]
            return C.CLet(pat, comp, body, span)
        self.diagnostics.append(
            Diagnostic(
                "warning",
                "sequencing",
                f"{len(hoisted)} computations in this expression are evaluated left to right; "
                "use let to make the order explicit",
                span,
            )
        )
        return C.CLetSim(list(hoisted), body, span)

    # ------------------------------------------------------------ expressions

    def expr(self, t: A.Term, hoisted: list) -> C.Expr:
        """Translate ``t`` in expression position, hoisting computations into ``hoisted``."""
        if isinstance(t, A.Var):
            return C.EVar(t.name, t.span)
        if isinstance(t, A.Const):
            return C.EConst(t.value, t.span)
        if isinstance(t, A.Tuple):
            return C.ETuple([self.expr(i, hoisted) for i in t.items], t.span)
        if isinstance(t, A.Variant):
            arg = None if t.arg is None else self.expr(t.arg, hoisted)
            return C.EVariant(t.constructor, arg, t.span)
        if isinstance(t, A.ListLit):
            return C.EList([self.expr(i, hoisted) for i in t.items], t.span)
        if isinstance(t, A.Cons):
            head = self.expr(t.head, hoisted)
            return C.ECons(head, self.expr(t.tail, hoisted), t.span)
        if isinstance(t, A.Lambda):
            return self.lam(t)
        if isinstance(t, A.Project):
            return C.EProject(self.expr(t.instance, hoisted), t.op, t.span)
        if isinstance(t, A.HandlerLit):
            return self.handler(t, hoisted)
        name = self.fresh()
        hoisted.append((A.PVar(name, t.span), self.comp(t)))
        return C.EVar(name, t.span)

    def lam(self, t: A.Lambda) -> C.ELambda:
        return C.ELambda(t.param, self.comp(t.body), t.span)

    def handler(self, h: A.HandlerLit, hoisted: list) -> C.EHandler:
        clauses = [
            C.HClause(self.expr(c.instance, hoisted), c.op, c.arg, c.cont, self.comp(c.body), c.span)
            for c in h.clauses
        ]
        val = C.identity_clause(h.span) if h.val is None else (h.val[0], self.comp(h.val[1]))
        fin = C.identity_clause(h.span) if h.fin is None else (h.fin[0], self.comp(h.fin[1]))
        return C.EHandler(clauses, val, fin, h.span)

    # ------------------------------------------------------------ computations

    def comp(self, t: A.Term) -> C.Comp:
        span = t.span
        if is_expression(t) or isinstance(t, (A.Tuple, A.Variant, A.ListLit, A.Cons, A.Project, A.HandlerLit)):
            hoisted: list = []
            e = self.expr(t, hoisted)
            return self.bind(hoisted, C.CVal(e, span), span)
        if isinstance(t, A.Val):
            hoisted = []
            e = self.expr(t.expr, hoisted)
            return self.bind(hoisted, C.CVal(e, span), span)
        if isinstance(t, A.Apply):
            hoisted = []
            fn = self.expr(t.fn, hoisted)
            arg = self.expr(t.arg, hoisted)
            return self.bind(hoisted, C.CApp(fn, arg, span), span)
        if isinstance(t, A.Let):
            if len(t.bindings) == 1:
                pat, bound = t.bindings[0]
                return C.CLet(pat, self.comp(bound), self.comp(t.body), span)
            bindings = [(p, self.comp(b)) for p, b in t.bindings]
            return C.CLetSim(bindings, self.comp(t.body), span)
        if isinstance(t, A.LetRec):
            return C.CLetRec(self.rec_bindings(t.bindings), self.comp(t.body), span)
        if isinstance(t, A.If):
            hoisted = []
            cond = self.expr(t.cond, hoisted)
            return self.bind(hoisted, C.CIf(cond, self.comp(t.then), self.comp(t.orelse), span), span)
        if isinstance(t, A.Match):
            hoisted = []
            scrutinee = self.expr(t.scrutinee, hoisted)
            if not t.cases:
                return self.bind(hoisted, C.CAbsurd(scrutinee, span), span)
            cases = [(p, self.comp(b)) for p, b in t.cases]
            return self.bind(hoisted, C.CMatch(scrutinee, cases, span), span)
        if isinstance(t, A.New):
            if t.clauses is None:
                return C.CNew(t.effect, None, None, span)
            hoisted = []
            init = self.expr(t.init, hoisted)
            clauses = [C.RClause(c.op, c.arg, c.state, self.comp(c.body), c.span) for c in t.clauses]
            return self.bind(hoisted, C.CNew(t.effect, init, clauses, span), span)
        if isinstance(t, A.With):
            hoisted = []
            h = self.expr(t.handler, hoisted)
            return self.bind(hoisted, C.CWith(h, self.comp(t.body), span), span)
        if isinstance(t, A.Handle):
            hoisted = []
            h = self.handler(t.handler, hoisted)
            return self.bind(hoisted, C.CWith(h, self.comp(t.body), span), span)
        if isinstance(t, A.Seq):
            return C.CLet(A.PWild(span), self.comp(t.first), self.comp(t.second), span)
        if isinstance(t, A.For):
            return self.comp(self.for_loop(t))
        if isinstance(t, A.While):
            return self.comp(self.while_loop(t))
        raise TypeError(f"cannot desugar {t!r}")

    def rec_bindings(self, bindings: list[tuple[str, A.Term]]) -> list[tuple[str, C.ELambda]]:
        out = []
        for name, t in bindings:
            if not isinstance(t, A.Lambda):
                raise TypeError(f"let rec {name} must bind a function")
            out.append((name, self.lam(t)))
        return out

    # ------------------------------------------------------------ loops

    def for_loop(self, t: A.For) -> A.Term:
        # let lo = start in let hi = stop in
        # let rec loop i = if i > hi then () else (body; loop (i + 1)) in loop lo
        s = t.span
        loop, lo, hi = self.fresh(), self.fresh(), self.fresh()
        past, step = (">", "+") if not t.downto else ("<", "-")

        def prim(name, a, b):
            return A.Apply(A.Apply(A.Const(A.Prim(name), s), a, s), b, s)

        i = A.Var(t.var, s)
        recurse = A.Apply(A.Var(loop, s), prim(step, i, A.Const(1, s)), s)
        body = A.If(prim(past, i, A.Var(hi, s)), A.Const(A.UNIT, s), A.Seq(t.body, recurse, s), s)
        rec = A.LetRec([(loop, A.Lambda(A.PVar(t.var, s), body, s))], A.Apply(A.Var(loop, s), A.Var(lo, s), s), s)
        return A.Let([(A.PVar(lo, s), t.start)], A.Let([(A.PVar(hi, s), t.stop)], rec, s), s)

    def while_loop(self, t: A.While) -> A.Term:
        s = t.span
        loop = self.fresh()
        again = A.Apply(A.Var(loop, s), A.Const(A.UNIT, s), s)
        body = A.If(t.cond, A.Seq(t.body, again, s), A.Const(A.UNIT, s), s)
        return A.LetRec([(loop, A.Lambda(A.PConst(A.UNIT, s), body, s))], again, s)


def desugar(term: A.Term) -> tuple[C.Comp, list[Diagnostic]]:
    d = Desugarer(identifiers(term))
    return d.comp(term), d.diagnostics


def desugar_expr(term: A.Term) -> tuple[C.Expr, list[Diagnostic]]:
    """Translate a term that must be an expression (no hoisting allowed)."""
    if not is_expression(term):
        raise ValueError("not an expression")
    d = Desugarer(identifiers(term))
    return d.expr(term, []), d.diagnostics


def desugar_item(item: A.TopItem) -> tuple[C.CoreItem, list[Diagnostic]]:
    if isinstance(item, A.TypeDecl):
        return item, []
    d = Desugarer(identifiers(item))
    if isinstance(item, A.TopLet):
        out = C.CoreLet([(p, d.comp(t)) for p, t in item.bindings], item.span)
    elif isinstance(item, A.TopLetRec):
        out = C.CoreLetRec(d.rec_bindings(item.bindings), item.span)
    else:
        out = C.CoreComp(d.comp(item.term), item.span)
    return out, d.diagnostics


def desugar_program(items: list[A.TopItem]) -> tuple[list[C.CoreItem], list[Diagnostic]]:
    out, diags = [], []
    for item in items:
        core_item, ds = desugar_item(item)
        out.append(core_item)
        diags.extend(ds)
    return out, diags
