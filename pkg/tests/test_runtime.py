from __future__ import annotations

import io

import pytest

from eff.errors import (
    ArithmeticFault, IllFormedValue, MatchFailure, OutOfFuel, ResourceError, UncaughtOperation,
)
from eff.runtime.printer import show_value
from eff.session import Session

from .conftest import run, value


# ---------------------------------------------------------------- basics

@pytest.mark.parametrize(
    "src,expected",
    [
        ("1 + 2 * 3", 7),
        ("7 / 2", 3),
        ("-7 / 2", -3),
        ("- (2 + 3)", -5),
        ("7 mod 3", 1),
        ("1.5 *. 2.0", 3.0),
        ('"ab" ^ "cd"', "abcd"),
        ("[1; 2] @ [3]", [1, 2, 3]),
        ("(1, (2, 3)) = (1, (2, 3))", True),
        ("[1; 2] < [1; 3]", True),
        ("Some 3 <> None", True),
        ("let rec fact n = if n = 0 then 1 else n * fact (n - 1) in fact 10", 3628800),
        ("match [1; 2; 3] with | [] -> 0 | x :: _ -> x", 1),
        ("let (a, b) = (1, 2) in b - a", 1),
        ("let f = function | None -> 0 | Some x -> x in f (Some 4) + f None", 4),
        ("let x = 3 in let x = x * 2 in x", 6),
        ("fst (1, 2) + snd (3, 4)", 5),
        ("string_of_int 42 ^ string_of_float 1.5", "421.5"),
        ("let t = ref 0 in for i = 1 to 4 do t := !t + i done; !t", 10),
        ("let t = ref 0 in for i = 4 downto 1 do t := !t * 10 + i done; !t", 4321),
        ("let t = ref 3 in while !t > 0 do t := !t - 1 done; !t", 0),
    ],
)
def test_evaluation(src, expected):
    assert value(src) == expected


def test_ref_resource_trace():
    assert value("let r = ref 5 in r := 10; !r") == 10


def test_two_refs_are_independent():
    assert value("let a = ref 1 in let b = ref 2 in a := 10; (!a, !b)") == (10, 2)


def test_state_handler():
    src = "let r = new ref in with state r 1 handle (r := !r + 1; r := !r * 10; !r)"
    assert value(src) == 20


def test_handler_clause_can_discard_continuation():
    src = "let c = new choice in with (handler | c#decide () _ -> 0) handle (if c#decide () then 1 else 2)"
    assert value(src) == 0


def test_deep_handler_handles_operations_after_resumption():
    src = """let c = new choice in
with (handler | c#decide () k -> k false) handle
  let a = c#decide () in let b = c#decide () in (a, b)"""
    assert value(src) == (False, False)


def test_operations_pass_through_outer_handlers_to_the_right_instance():
    src = """let c1 = new choice in let c2 = new choice in
with (handler | c1#decide () k -> k true) handle
with (handler | c2#decide () k -> k false) handle
  (c1#decide (), c2#decide ())"""
    assert value(src) == (True, False)


def test_finally_runs_once_on_result():
    src = "with (handler | val x -> x + 1 | finally y -> y * 10) handle 4"
    assert value(src) == 50


def test_first_class_handlers_and_instances():
    src = """let c = new choice in
let always b = handler | c#decide () k -> k b in
let hs = [always true; always false] in
map (fun h -> with h handle (if c#decide () then 1 else 2)) hs"""
    assert value(src) == [1, 2]


def test_continuation_invoked_twice_gives_independent_results():
    src = """let c = new choice in
with (handler | c#decide () k -> k true @ k false @ k true | val x -> [x]) handle
  let a = (if c#decide () then 1 else 2) in a * 10"""
    assert value(src) == [10, 20, 10]


def test_lazy_memoizes_pure_thunk():
    session = Session(stdout=io.StringIO())
    session.run_source("let d = lazy (fun () -> 3 + 4)")
    assert session.eval("force d + force d") == 14
    inst = session.runtime.globals["d"]
    assert show_value(session.runtime.store[inst.id]) == "Value 7"


def test_lazy_with_effectful_thunk_is_resource_error():
    with pytest.raises(ResourceError):
        run('let d = lazy (fun () -> std#write "x"; 7) in force d + force d')


def test_std_write_reaches_stdout():
    assert run('std#write "hi"; std#write "!"; 3') == (3, "hi!")


def test_std_read_reads_lines():
    session = Session(stdout=io.StringIO(), stdin=io.StringIO("one\ntwo\n"))
    assert session.eval("let a = std#read () in let b = std#read () in b ^ a") == "twoone"


def test_read_from_list_handler():
    src = 'with read_from_list ["x"; "y"] handle (let a = std#read () in let b = std#read () in a ^ b)'
    assert value(src) == "xy"


def test_resource_state_survives_between_toplevel_items():
    session = Session(stdout=io.StringIO())
    session.run_source("let r = ref 1\n;; r := 5")
    assert session.eval("!r") == 5


# ---------------------------------------------------------------- errors

def test_uncaught_operation_names_the_operation():
    with pytest.raises(UncaughtOperation) as info:
        run("let c = new choice in if c#decide () then 1 else 2")
    assert "decide" in info.value.message


def test_division_by_zero():
    with pytest.raises(ArithmeticFault):
        run("1 / 0")


def test_match_failure():
    with pytest.raises(MatchFailure):
        run("match 3 with | 4 -> 0", typecheck=False)


def test_unchecked_programs_can_hit_ill_formed_values():
    with pytest.raises(IllFormedValue):
        run("if 3 then 1 else 2", typecheck=False)


def test_comparing_functions_is_an_error():
    with pytest.raises(IllFormedValue):
        run("(fun x -> x) = (fun x -> x)")


def test_operation_inside_resource_clause():
    src = """type t = effect operation poke : unit -> int end
let c = new choice
;; let x = new t @ 0 with operation poke () @ s -> ((if c#decide () then 1 else 2), s) end in x#poke ()"""
    with pytest.raises(ResourceError):
        run(src)


def test_fuel_bounds_divergence():
    with pytest.raises(OutOfFuel):
        run("let rec loop x = loop x in loop 0", fuel=10_000)


# ---------------------------------------------------------------- depth

def test_deep_non_tail_recursion():
    assert value("let rec sum n = if n = 0 then 0 else n + sum (n - 1) in sum 50000") == 1250025000


def test_long_loop_under_handler_state():
    src = "let x = new ref in with state x 0 handle for i = 1 to 30000 do x := !x + 1 done; !x"
    assert value(src) == 30000


def test_long_let_chain():
    n = 8000
    src = " ".join(f"let x{i} = {i} in" for i in range(n)) + f" x0 + x{n - 1}"
    assert value(src, prelude=False) == n - 1


# ---------------------------------------------------------------- printing

@pytest.mark.parametrize(
    "src,text",
    [
        ("[1; 2]", "[1; 2]"),
        ("Some (-1)", "Some (-1)"),
        ("(1, \"a\")", '(1, "a")'),
        ("fun x -> x", "<fun>"),
        ("handler | val x -> x", "<handler>"),
        ("0.1 +. 0.2", "0.30000000000000004"),
        ("new choice", "<choice #1>"),
    ],
)
def test_printing(src, text):
    session = Session(stdout=io.StringIO())
    assert show_value(session.eval(src)) == text
