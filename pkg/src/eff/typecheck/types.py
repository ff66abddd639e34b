"""Type terms, union-find unification with levels, and printing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import Span, TypeCheckError

_ids = itertools.count()


class TVar:
    """A unification variable. ``level`` drives generalization."""

    __slots__ = ("id", "level", "ref")

    def __init__(self, level: int):
        self.id = next(_ids)
        self.level = level
        self.ref: Optional[Type] = None

    def __repr__(self) -> str:
        return f"TVar({self.id})" if self.ref is None else f"TVar({self.id}={self.ref!r})"


@dataclass(eq=False)
class TCon:
    """A named type: builtin (``int``, ``list``...) or declared. ``key`` is the
    unique identity; ``name`` the spelling shown to users."""

    key: str
    args: list["Type"] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.key.split("@", 1)[0]


@dataclass(eq=False)
class TArrow:
    arg: "Type"
    result: "Type"


@dataclass(eq=False)
class THandler:
    arg: "Type"
    result: "Type"


@dataclass(eq=False)
class TTuple:
    items: list["Type"]


Type = Union[TVar, TCon, TArrow, THandler, TTuple]


@dataclass
class Scheme:
    quantified: list[TVar]
    body: Type

    @staticmethod
    def mono(t: Type) -> "Scheme":
        return Scheme([], t)


INT = TCon("int")
BOOL = TCon("bool")
UNIT = TCon("unit")
STRING = TCon("string")
FLOAT = TCon("float")
EMPTY = TCon("empty")


def list_of(t: Type) -> TCon:
    return TCon("list", [t])


def resolve(t: Type) -> Type:
    """Follow bound variables, compressing paths."""
    if not isinstance(t, TVar) or t.ref is None:
        return t
    root = t
    while isinstance(root, TVar) and root.ref is not None:
        root = root.ref
    while isinstance(t, TVar) and t.ref is not None and t.ref is not root:
        t.ref, t = root, t.ref
    return root


def children(t: Type) -> list[Type]:
    if isinstance(t, TCon):
        return t.args
    if isinstance(t, (TArrow, THandler)):
        return [t.arg, t.result]
    if isinstance(t, TTuple):
        return t.items
    return []


def free_vars(t: Type) -> list[TVar]:
    seen: dict[int, TVar] = {}
    stack = [t]
    while stack:
        u = resolve(stack.pop())
        if isinstance(u, TVar):
            seen.setdefault(u.id, u)
        else:
            stack.extend(reversed(children(u)))
    return list(seen.values())


def zonk(t: Type) -> Type:
    """Return ``t`` with every bound variable replaced by its binding."""
    t = resolve(t)
    if isinstance(t, TCon):
        return TCon(t.key, [zonk(a) for a in t.args]) if t.args else t
    if isinstance(t, TArrow):
        return TArrow(zonk(t.arg), zonk(t.result))
    if isinstance(t, THandler):
        return THandler(zonk(t.arg), zonk(t.result))
    if isinstance(t, TTuple):
        return TTuple([zonk(i) for i in t.items])
    return t


def equal(a: Type, b: Type) -> bool:
    """Syntactic equality after resolution (variables by identity)."""
    a, b = resolve(a), resolve(b)
    if isinstance(a, TVar) or isinstance(b, TVar):
        return a is b
    if type(a) is not type(b):
        return False
    if isinstance(a, TCon) and a.key != b.key:
        return False
    ca, cb = children(a), children(b)
    return len(ca) == len(cb) and all(equal(x, y) for x, y in zip(ca, cb))


# ---------------------------------------------------------------- unification

def _occurs_adjust(v: TVar, t: Type) -> bool:
    """True if ``v`` occurs in ``t``; lowers levels inside ``t`` to ``v.level``."""
    stack = [t]
    while stack:
        u = resolve(stack.pop())
        if isinstance(u, TVar):
            if u is v:
                return True
            if u.level > v.level:
                u.level = v.level
        else:
            stack.extend(children(u))
    return False


def unify(t1: Type, t2: Type, span: Optional[Span] = None) -> dict[TVar, Type]:
    """Unify in place; return the variable bindings made. Raises TypeCheckError."""
    made: dict[TVar, Type] = {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a, b = resolve(a), resolve(b)
        if a is b:
            continue
        if isinstance(b, TVar) and not isinstance(a, TVar):
            a, b = b, a
        if isinstance(a, TVar):
            if _occurs_adjust(a, b):
                shown = TypePrinter()
                lhs, rhs = shown(a), shown(b)
                raise TypeCheckError(
                    f"cannot unify {lhs} with {rhs} (recursive type equation {lhs} = {rhs})",
                    span,
                    kind="occurs-check",
                    types=(a, zonk(b)),
                )
            if isinstance(b, TVar) and b.level > a.level:
                b.level = a.level
            a.ref = b
            made[a] = b
            continue
        if (
            type(a) is not type(b)
            or (isinstance(a, TCon) and (a.key != b.key or len(a.args) != len(b.args)))
            or (isinstance(a, TTuple) and len(a.items) != len(b.items))
        ):
            shown = TypePrinter()
            outer1, outer2 = zonk(t1), zonk(t2)
            raise TypeCheckError(
                f"cannot unify {shown(outer1)} with {shown(outer2)}",
                span,
                kind="mismatch",
                types=(outer1, outer2),
            )
        stack.extend(reversed(list(zip(children(a), children(b)))))
    return made


# ---------------------------------------------------------------- schemes

def generalize(t: Type, level: int) -> Scheme:
    return Scheme([v for v in free_vars(t) if v.level > level], t)


def instantiate(s: Scheme, level: int) -> Type:
    if not s.quantified:
        return s.body
    mapping = {v.id: TVar(level) for v in s.quantified}
    return substitute(s.body, mapping)


def substitute(t: Type, mapping: dict[int, Type]) -> Type:
    t = resolve(t)
    if isinstance(t, TVar):
        return mapping.get(t.id, t)
    if isinstance(t, TCon):
        return TCon(t.key, [substitute(a, mapping) for a in t.args]) if t.args else t
    if isinstance(t, TArrow):
        return TArrow(substitute(t.arg, mapping), substitute(t.result, mapping))
    if isinstance(t, THandler):
        return THandler(substitute(t.arg, mapping), substitute(t.result, mapping))
    return TTuple([substitute(i, mapping) for i in t.items])


# ---------------------------------------------------------------- printing

class TypePrinter:
    """Prints types, naming variables 'a, 'b, ... consistently across calls."""

    def __init__(self):
        self.names: dict[int, str] = {}

    def var_name(self, v: TVar) -> str:
        if v.id not in self.names:
            n = len(self.names)
            letter = chr(ord("a") + n % 26)
            self.names[v.id] = "'" + letter + (str(n // 26) if n >= 26 else "")
        return self.names[v.id]

    def __call__(self, t: Type) -> str:
        return self.show(t, 0)

    # precedence: 0 arrow, 1 product, 2 application argument
    def show(self, t: Type, prec: int) -> str:
        t = resolve(t)
        if isinstance(t, TVar):
            return self.var_name(t)
        if isinstance(t, TCon):
            if not t.args:
                return t.name
            if len(t.args) == 1:
                return f"{self.show(t.args[0], 2)} {t.name}"
            return "(" + ", ".join(self.show(a, 0) for a in t.args) + f") {t.name}"
        if isinstance(t, (TArrow, THandler)):
            arrow = "->" if isinstance(t, TArrow) else "=>"
            text = f"{self.show(t.arg, 1)} {arrow} {self.show(t.result, 0)}"
            return f"({text})" if prec > 0 else text
        text = " * ".join(self.show(i, 2) for i in t.items)
        return f"({text})" if prec > 1 else text


def show_type(t: Type) -> str:
    return TypePrinter()(t)


def show_scheme(s: Scheme) -> str:
    return TypePrinter()(s.body)
