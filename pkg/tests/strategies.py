"""Hypothesis generators for surface terms and small object programs."""

from __future__ import annotations

from hypothesis import strategies as st

from eff.syntax import ast as A

names = st.sampled_from(["x", "y", "z", "f", "g", "acc", "x'", "k2"])
constructors = st.sampled_from(["None", "Some", "Leaf", "Node"])
ops = st.sampled_from(["decide", "get", "set", "raise"])

literals = st.one_of(
    st.integers(min_value=-1000, max_value=1000),
    st.booleans(),
    st.just(A.UNIT),
    st.text(alphabet="abc \n\"\\xyz", max_size=5),
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda f: f != 0.0 or str(f) == "0.0"),
)


PATTERNS = st.recursive(
    st.one_of(st.builds(A.PVar, names), st.just(A.PWild()), st.builds(A.PConst, literals), st.just(A.PNil())),
    lambda inner: st.one_of(
        st.builds(lambda xs: A.PTuple(xs), st.lists(inner, min_size=2, max_size=3)),
        st.builds(A.PVariant, constructors, st.one_of(st.none(), inner)),
        st.builds(A.PCons, inner, inner),
    ),
    max_leaves=4,
)


def patterns():
    return PATTERNS


def _handler(term):
    clause = st.builds(
        lambda inst, op, x, k, body: A.OpClause(A.Var(inst), op, A.PVar(x), A.PVar(k), body),
        names, ops, names, names, term,
    )
    arm = st.one_of(st.none(), st.tuples(patterns(), term))
    distinct = st.lists(clause, min_size=1, max_size=2, unique_by=lambda c: (c.instance.name, c.op))
    return st.builds(A.HandlerLit, distinct, arm, arm)


def _terms():
    leaves = st.one_of(st.builds(A.Var, names), st.builds(A.Const, literals))

    def extend(t):
        return st.one_of(
            st.builds(A.Apply, t, t),
            st.builds(lambda xs: A.Tuple(xs), st.lists(t, min_size=2, max_size=3)),
            st.builds(A.ListLit, st.lists(t, max_size=3)),
            st.builds(A.Cons, t, t),
            st.builds(A.Variant, constructors, st.one_of(st.none(), t)),
            st.builds(A.Lambda, patterns(), t),
            st.builds(A.Project, t, ops),
            st.builds(A.If, t, t, t),
            st.builds(lambda bs, body: A.Let(bs, body), st.lists(st.tuples(patterns(), t), min_size=1, max_size=2), t),
            st.builds(lambda n, fn, body: A.LetRec([(n, fn)], body), names, st.builds(A.Lambda, patterns(), t), t),
            st.builds(A.Seq, t, t),
            st.builds(lambda s, cs: A.Match(s, cs), t, st.lists(st.tuples(patterns(), t), min_size=1, max_size=3)),
            st.builds(A.With, t, t),
            _handler(t),
        )

    return st.recursive(leaves, extend, max_leaves=6)



TERMS = _terms()


def terms():
    return TERMS
