from __future__ import annotations

import io
import re
import sys

import pytest

from eff.runtime.values import NIL, Cons, Nil, Unit, Variant
from eff.session import Session




def to_py(v):
    """Convert an object-language value into plain Python data."""
    if isinstance(v, (Cons, Nil)):
        return [to_py(x) for x in (v if v is not NIL else ())]
    if isinstance(v, tuple):
        return tuple(to_py(x) for x in v)
    if isinstance(v, Variant):
        return v.constructor if v.arg is None else (v.constructor, to_py(v.arg))
    if isinstance(v, Unit):
        return ()
    return v


def run(source: str, **options):
    """Run ``source`` in a fresh session; return (last value as Python data, stdout)."""
    out = io.StringIO()
    session = Session(stdout=out, diagnostics=io.StringIO(), **options)
    outcomes = session.run_source(source)
    return to_py(outcomes[-1].value), out.getvalue()


def value(source: str, **options):
    return run(source, **options)[0]


@pytest.fixture
def session():
    return Session(stdout=io.StringIO(), diagnostics=io.StringIO())


# ---------------------------------------------------------------- acceptance summary

_AC_NAME = re.compile(r"test_acceptance\.py::test_ac(\d+)_")
_AC_RESULTS: dict[int, list[bool]] = {}

AC_TITLES = {
    1: "choice handlers",
    2: "exceptions and transactions",
    3: "output handling",
    4: "delimited control",
    5: "8 queens",
    6: "selection functionals",
    7: "probabilistic choice",
    8: "cooperative threads",
    9: "property suites",
    10: "type checker rules",
}


def pytest_runtest_logreport(report):
    m = _AC_NAME.search(report.nodeid)
    if m is None:
        return
    if report.when == "call" or report.failed:
        _AC_RESULTS.setdefault(int(m.group(1)), []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_AC_RESULTS):
        outcomes = _AC_RESULTS[n]
        status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"AC{n} {status}  {AC_TITLES.get(n, '')} ({sum(outcomes)}/{len(outcomes)} checks)")
