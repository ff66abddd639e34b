"""Surface syntax tree.

Expressions and computations are freely mixed here; ``eff.desugar``
separates them. Every node carries a ``span`` that is ignored by equality,
so two parses of the same program compare equal regardless of layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import NOWHERE, Span


def _span():
    return field(default=NOWHERE, compare=False, repr=False)


class Unit:
    """The unit constant ``()``; a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "()"

    def __reduce__(self):
        return (Unit, ())


UNIT = Unit()


@dataclass(frozen=True)
class Prim:
    """A built-in constant referenced by desugaring, immune to user shadowing."""

    name: str


Literal = Union[int, bool, str, float, Unit, Prim]


# ---------------------------------------------------------------- types

@dataclass
class TVarExpr:
    name: str
    span: Span = _span()


@dataclass
class TConExpr:
    name: str
    args: list["TypeExpr"] = field(default_factory=list)
    span: Span = _span()


@dataclass
class TArrowExpr:
    arg: "TypeExpr"
    result: "TypeExpr"
    span: Span = _span()


@dataclass
class THandlerExpr:
    arg: "TypeExpr"
    result: "TypeExpr"
    span: Span = _span()


@dataclass
class TProdExpr:
    items: list["TypeExpr"]
    span: Span = _span()


TypeExpr = Union[TVarExpr, TConExpr, TArrowExpr, THandlerExpr, TProdExpr]


# ---------------------------------------------------------------- patterns

@dataclass
class PVar:
    name: str
    span: Span = _span()


@dataclass
class PWild:
    span: Span = _span()


@dataclass
class PConst:
    value: Literal
    span: Span = _span()


@dataclass
class PTuple:
    items: list["Pattern"]
    span: Span = _span()


@dataclass
class PVariant:
    constructor: str
    arg: Optional["Pattern"] = None
    span: Span = _span()


@dataclass
class PNil:
    span: Span = _span()


@dataclass
class PCons:
    head: "Pattern"
    tail: "Pattern"
    span: Span = _span()


@dataclass
class PAnnot:
    pattern: "Pattern"
    type: TypeExpr
    span: Span = _span()


Pattern = Union[PVar, PWild, PConst, PTuple, PVariant, PNil, PCons, PAnnot]


def pattern_vars(p: Pattern) -> list[str]:
    out: list[str] = []
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, PVar):
            out.append(q.name)
        elif isinstance(q, PTuple):
            stack.extend(reversed(q.items))
        elif isinstance(q, PVariant) and q.arg is not None:
            stack.append(q.arg)
        elif isinstance(q, PCons):
            stack.extend([q.tail, q.head])
        elif isinstance(q, PAnnot):
            stack.append(q.pattern)
    return out


# ---------------------------------------------------------------- terms

@dataclass
class Var:
    name: str
    span: Span = _span()


@dataclass
class Const:
    value: Literal
    span: Span = _span()


@dataclass
class Tuple:
    items: list["Term"]
    span: Span = _span()


@dataclass
class Variant:
    constructor: str
    arg: Optional["Term"] = None
    span: Span = _span()


@dataclass
class ListLit:
    items: list["Term"]
    span: Span = _span()


@dataclass
class Cons:
    head: "Term"
    tail: "Term"
    span: Span = _span()


@dataclass
class Lambda:
    param: Pattern
    body: "Term"
    span: Span = _span()


@dataclass
class Project:
    """``e#op``: the operation ``op`` of instance ``e``."""

    instance: "Term"
    op: str
    span: Span = _span()


@dataclass
class OpClause:
    instance: "Term"
    op: str
    arg: Pattern
    cont: Pattern
    body: "Term"
    span: Span = _span()


@dataclass
class HandlerLit:
    clauses: list[OpClause]
    val: Optional[tuple[Pattern, "Term"]] = None
    fin: Optional[tuple[Pattern, "Term"]] = None
    span: Span = _span()


@dataclass
class Apply:
    fn: "Term"
    arg: "Term"
    span: Span = _span()


@dataclass
class Let:
    """``let p1 = t1 and ... and pn = tn in body``; simultaneous when n > 1."""

    bindings: list[tuple[Pattern, "Term"]]
    body: "Term"
    span: Span = _span()


@dataclass
class LetRec:
    bindings: list[tuple[str, "Term"]]
    body: "Term"
    span: Span = _span()


@dataclass
class If:
    cond: "Term"
    then: "Term"
    orelse: "Term"
    span: Span = _span()


@dataclass
class Match:
    """A match with no cases eliminates the empty type."""

    scrutinee: "Term"
    cases: list[tuple[Pattern, "Term"]]
    span: Span = _span()


@dataclass
class ResourceClause:
    op: str
    arg: Pattern
    state: Pattern
    body: "Term"
    span: Span = _span()


@dataclass
class New:
    effect: str
    init: Optional["Term"] = None
    clauses: Optional[list[ResourceClause]] = None
    span: Span = _span()


@dataclass
class With:
    handler: "Term"
    body: "Term"
    span: Span = _span()


@dataclass
class Handle:
    """Inline ``handle body with clauses``."""

    body: "Term"
    handler: HandlerLit
    span: Span = _span()


@dataclass
class Seq:
    first: "Term"
    second: "Term"
    span: Span = _span()


@dataclass
class For:
    var: str
    start: "Term"
    stop: "Term"
    body: "Term"
    downto: bool = False
    span: Span = _span()


@dataclass
class While:
    cond: "Term"
    body: "Term"
    span: Span = _span()


@dataclass
class Val:
    """Explicit ``val e``."""

    expr: "Term"
    span: Span = _span()


Term = Union[
    Var, Const, Tuple, Variant, ListLit, Cons, Lambda, Project, HandlerLit, Apply,
    Let, LetRec, If, Match, New, With, Handle, Seq, For, While, Val,
]


# ---------------------------------------------------------------- top level

@dataclass
class EffectSig:
    """An effect type: operation name to (parameter type, result type)."""

    name: str
    operations: dict[str, tuple[TypeExpr, TypeExpr]]


@dataclass
class VariantDef:
    constructors: list[tuple[str, Optional[TypeExpr]]]


@dataclass
class TypeDecl:
    name: str
    params: list[str]
    definition: Union[EffectSig, VariantDef, TypeExpr]
    span: Span = _span()


@dataclass
class TopLet:
    """A toplevel ``let`` without ``in``."""

    bindings: list[tuple[Pattern, Term]]
    span: Span = _span()


@dataclass
class TopLetRec:
    bindings: list[tuple[str, Term]]
    span: Span = _span()


@dataclass
class TopTerm:
    term: Term
    span: Span = _span()


TopItem = Union[TypeDecl, TopLet, TopLetRec, TopTerm]
