"""Type inference for core programs."""

from .infer import Checker, Context, TypeDef, check_item, infer_comp, infer_expr
from .types import (
    Scheme, TArrow, TCon, THandler, TTuple, TVar, Type, TypePrinter, generalize, instantiate,
    resolve, show_scheme, show_type, unify, zonk,
)

__all__ = [
    "Checker", "Context", "TypeDef", "check_item", "infer_comp", "infer_expr", "Scheme", "TArrow",
    "TCon", "THandler", "TTuple", "TVar", "Type", "TypePrinter", "generalize", "instantiate",
    "resolve", "show_scheme", "show_type", "unify", "zonk",
]
