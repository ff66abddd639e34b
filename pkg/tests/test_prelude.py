from __future__ import annotations

import functools
import io

from hypothesis import given, settings
from hypothesis import strategies as st

from eff.session import Session

from .conftest import to_py, value

_SESSION: list = []


def session() -> Session:
    if not _SESSION:
        _SESSION.append(Session(stdout=io.StringIO(), diagnostics=io.StringIO()))
    return _SESSION[0]


def eff_list(xs) -> str:
    return "[" + "; ".join(f"({x})" for x in xs) + "]"


ints = st.lists(st.integers(-20, 20), max_size=8)


@settings(max_examples=60, deadline=None)
@given(ints, ints)
def test_list_utilities_match_python(xs, ys):
    src = (
        f"let xs = {eff_list(xs)} in let ys = {eff_list(ys)} in "
        "(map (fun x -> x * 2) xs, filter (fun x -> x > 0) xs, length xs, rev xs, "
        "fold_left (fun a x -> a - x) 0 xs, fold_right (fun x a -> x - a) xs 0, "
        "forall (fun x -> x > 0) xs, exists (fun x -> x = 3) ys, rev_append xs ys)"
    )
    expected = (
        [x * 2 for x in xs], [x for x in xs if x > 0], len(xs), xs[::-1],
        functools.reduce(lambda a, x: a - x, xs, 0),
        functools.reduce(lambda a, x: x - a, reversed(xs), 0),
        all(x > 0 for x in xs), 3 in ys, xs[::-1] + ys,
    )
    assert to_py(session().eval(src)) == expected


def test_assoc_returns_first_match():
    assert value('assoc 1 [(1, "a"); (2, "b"); (1, "c")]') == ("Some", "a")
    assert value("assoc 3 [(1, 2)]") == "None"


def test_pairs_and_abs():
    assert value("(fst (1, true), snd (1, true), abs (-4), abs 4)") == (1, True, 4, 4)


def test_ref_reads_back_last_write():
    assert value("let r = ref 1 in let a = !r in r := 5; r := !r + 1; (a, !r)") == (1, 6)


def test_distribution_merges_outcomes():
    src = "let r = new random in with distribution r handle (r#pick [(1,0.5);(2,0.5)]) mod 2"
    dist = dict(value(src))
    assert dist.keys() == {0, 1}
    assert abs(dist[0] - 0.5) < 1e-12 and abs(dist[1] - 0.5) < 1e-12


def test_optionalize_and_raise():
    assert value("let e = new exception in with optionalize e handle raise e 3 + 1") == "None"
    assert value("let e = new exception in with optionalize e handle 3 + 1") == ("Some", 4)


def test_read_from_list_feeds_input():
    assert value('with read_from_list ["a"; "b"] handle let x = std#read () in let y = std#read () in y ^ x') == "ba"


def test_pure_lazy_forces_to_its_value():
    assert value("let l = lazy (fun () -> 3 + 4) in force l + force l") == 14
