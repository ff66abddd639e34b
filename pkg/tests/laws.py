"""Randomized laws of the pipeline.

Not collected directly: the acceptance suite runs each law once.
"""

from __future__ import annotations

import io
import re

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from eff.runtime.results import FnContinuation, Operation, Value, apply_handler, lift
from eff.runtime.values import UNIT, Instance
from eff.session import Session

from eff import core as C
from eff.desugar import desugar
from eff.syntax import ast as A
from eff.syntax import parse_term, pretty_term

from .conftest import to_py
from .strategies import terms

LAW = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _law_session() -> Session:
    s = Session(stdout=io.StringIO(), diagnostics=io.StringIO())
    s.run_source(
        "let state_body r = handler\n"
        "  | val y -> (fun s -> y)\n"
        "  | r#lookup () k -> (fun s -> k s s)\n"
        "  | r#update s' k -> (fun s -> k () s')\n"
        ";; let c = new choice"
    )
    return s


_SESSION: list = []


def law_session() -> Session:
    if not _SESSION:
        _SESSION.append(_law_session())
    return _SESSION[0]


# ---------------------------------------------------------------- results

INST_A = Instance(1001, "a")
INST_B = Instance(1002, "b")

# an affine step: (a, b, performs) means v -> a*v + b, optionally after an operation
steps = st.tuples(st.integers(-3, 3), st.integers(-5, 5), st.booleans())


def make_fn(spec):
    a, b, performs = spec
    if performs:
        return lambda v: Operation(INST_B, "tick", v, FnContinuation(lambda w: Value(a * w + b)))
    return lambda v: Value(a * v + b)


def observe(r, limit: int = 50):
    """Drive a result to completion, answering each operation with arg + 1."""
    trace = []
    while isinstance(r, Operation):
        assert len(trace) < limit
        arg = r.arg
        trace.append((r.instance.id, r.op, arg))
        r = r.continuation.resume(arg + 1 if isinstance(arg, int) and not isinstance(arg, bool) else arg)
    return trace, r.value


@LAW
@given(steps, st.integers(-100, 100))
def law_lift_on_value(f_spec, v):
    f = make_fn(f_spec)
    assert observe(lift(f, Value(v))) == observe(f(v))


@LAW
@given(steps, steps, st.integers(-100, 100), st.integers(-100, 100))
def law_lift_on_operation(f_spec, k_spec, v, w):
    f, kappa = make_fn(f_spec), make_fn(k_spec)
    lifted = lift(f, Operation(INST_A, "op", v, FnContinuation(kappa)))
    assert isinstance(lifted, Operation)
    assert (lifted.instance, lifted.op, lifted.arg) == (INST_A, "op", v)
    assert observe(lifted.continuation.resume(w)) == observe(lift(f, kappa(w)))


# ---------------------------------------------------------------- deep handlers

def handler_source(resume_with: bool, a: int, b: int, fin) -> str:
    src = f"handler | c#decide () k -> k {'true' if resume_with else 'false'} | val x -> x * {a} + {b}"
    return src if fin is None else src + f" | finally y -> y - {fin}"


def continuation_kind(kind: int, a: int, choice):
    if kind == 0:
        return lambda w: Value(a * w)
    if kind == 1:
        return lambda w: Operation(choice, "decide", UNIT, FnContinuation(lambda flag: Value(w + (a if flag else -a))))
    return lambda w: Operation(INST_B, "tick", w, FnContinuation(lambda u: Value(u * a)))


@LAW
@given(
    st.booleans(), st.integers(-3, 3), st.integers(-3, 3), st.one_of(st.none(), st.integers(-3, 3)),
    st.integers(0, 2), st.integers(-4, 4), st.integers(-50, 50), st.integers(-50, 50),
)
def law_deep_handler_forwards_unhandled_operations(flag, a, b, fin, kind, ka, v, w):
    session = law_session()
    h = session.eval(handler_source(flag, a, b, fin))
    choice = session.runtime.globals["c"]
    rt = session.runtime
    kappa = continuation_kind(kind, ka, choice)
    forwarded = apply_handler(h, Operation(INST_A, "op", v, FnContinuation(kappa)), rt)
    assert isinstance(forwarded, Operation)
    assert (forwarded.instance, forwarded.op, forwarded.arg) == (INST_A, "op", v)
    assert observe(forwarded.continuation.resume(w)) == observe(apply_handler(h, kappa(w), rt))


# ---------------------------------------------------------------- programs

def programs(var: str):
    leaf = st.one_of(
        st.integers(-4, 4).map(lambda n: f"({n})"),
        st.just(var),
        st.just("!s"),
        st.just("(if c#decide () then 1 else 2)"),
    )
    return st.recursive(
        leaf,
        lambda t: st.one_of(
            st.tuples(t, t).map(lambda p: f"({p[0]} + {p[1]})"),
            st.tuples(t, t).map(lambda p: f"({p[0]} * {p[1]})"),
            st.tuples(t, t).map(lambda p: f"(s := {p[0]}; {p[1]})"),
            st.tuples(t, t, t).map(lambda p: f"(if {p[0]} > 0 then {p[1]} else {p[2]})"),
            st.tuples(t, t).map(lambda p: f"(let z = {p[0]} in z - {p[1]})"),
        ),
        max_leaves=6,
    )


PROGRAMS_X = programs("x")
PROGRAMS_Y = programs("y")


def observe_program(session, body: str):
    src = f"let s = new ref in with choose_all c handle with state s 0 handle {body}"
    return to_py(session.eval(src))


def substitute(text: str, name: str, replacement: str) -> str:
    return re.sub(rf"\b{name}\b(?!')", replacement, text)


@LAW
@given(st.integers(-9, 9), PROGRAMS_X)
def law_monad_left_identity(e, c):
    session = law_session()
    lhs = observe_program(session, f"let x = ({e}) in {c}")
    rhs = observe_program(session, substitute(c, "x", f"({e})"))
    assert lhs == rhs


@LAW
@given(PROGRAMS_X)
def law_monad_right_identity(c):
    session = law_session()
    lhs = observe_program(session, f"let x = 5 in let x = {c} in x")
    rhs = observe_program(session, f"let x = 5 in {c}")
    assert lhs == rhs


@LAW
@given(PROGRAMS_X, PROGRAMS_X, PROGRAMS_Y)
def law_monad_associativity(c1, c2, c3):
    session = law_session()
    lhs = observe_program(session, f"let x = 5 in let y = (let x = {c1} in {c2}) in {c3}")
    rhs = observe_program(session, f"let x = 5 in let x = {c1} in let y = {c2} in {c3}")
    assert lhs == rhs


def finally_program(session, body: str):
    return to_py(session.eval(f"let s = new ref in with choose_all c handle let x = 3 in {body}"))


@LAW
@given(PROGRAMS_X, st.integers(-5, 5))
def law_finally_decomposition_on_state(c, init):
    session = law_session()
    whole = finally_program(session, f"with state s ({init}) handle {c}")
    split = finally_program(session, f"let f = (with state_body s handle {c}) in f ({init})")
    assert whole == split


# ---------------------------------------------------------------- freshness

_SEEN_IDS: set = {0}

@LAW
@given(st.integers(1, 40), st.integers(0, 4))
def law_instance_freshness(n, shots):
    session = law_session()
    made = to_py(session.eval(
        f"let rec mk n = if n = 0 then [] else let i = new choice in i :: mk (n - 1) in mk {n}"
    ))
    branched = to_py(session.eval(
        "let rec split n = if n = 0 then new choice else (if c#decide () then split (n - 1) else split (n - 1)) in "
        f"with choose_all c handle split {shots}"
    ))
    ids = [i.id for i in made + branched]
    assert len(ids) == n + 2 ** shots
    assert len(set(ids)) == len(ids)
    assert not set(ids) & _SEEN_IDS
    _SEEN_IDS.update(ids)


# ---------------------------------------------------------------- syntax

@LAW
@given(terms())
def law_parse_pretty_round_trip(term):
    text = pretty_term(term)
    assert parse_term(text) == term, text


def _no_loops(t) -> bool:
    if isinstance(t, (A.For, A.While)):
        return False
    if isinstance(t, (list, tuple)):
        return all(_no_loops(x) for x in t)
    if hasattr(t, "__dataclass_fields__"):
        return all(_no_loops(getattr(t, f)) for f in t.__dataclass_fields__ if f != "span")
    return True


@LAW
@given(terms().filter(_no_loops))
def law_desugar_idempotent(t):
    core, _ = desugar(t)
    text = C.render(core)
    again, diags = desugar(parse_term(text))
    assert again == core, text
    assert diags == []


LAWS = {
    "lifting on values": law_lift_on_value,
    "lifting on operations": law_lift_on_operation,
    "monad left identity": law_monad_left_identity,
    "monad right identity": law_monad_right_identity,
    "monad associativity": law_monad_associativity,
    "deep-handler forwarding": law_deep_handler_forwards_unhandled_operations,
    "finally decomposition": law_finally_decomposition_on_state,
    "parse/pretty round trip": law_parse_pretty_round_trip,
    "desugar idempotence": law_desugar_idempotent,
    "instance freshness": law_instance_freshness,
}
