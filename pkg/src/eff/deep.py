"""Run a call on a thread with a large host stack.

Parsing, desugaring and checking are recursive over the program tree, so a
long ``let`` chain needs far more stack than the main thread offers; with the
default stack a high recursion limit crashes the process instead of raising.
"""

from __future__ import annotations

import sys
import threading
from typing import Any, Callable

STACK_BYTES = 512 * 1024 * 1024
RECURSION_LIMIT = 200_000

_state = threading.local()


def call_deep(fn: Callable[..., Any], *args, **kwargs) -> Any:
    """Call ``fn`` on a big-stack worker thread and return its result or re-raise."""
    if getattr(_state, "deep", False):
        return fn(*args, **kwargs)
    box: dict = {}

    def target():
        _state.deep = True
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc

    old_size = threading.stack_size()
    old_limit = sys.getrecursionlimit()
    try:
        threading.stack_size(STACK_BYTES)
        worker = threading.Thread(target=target, name="eff-deep")
        sys.setrecursionlimit(max(old_limit, RECURSION_LIMIT))
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box["value"]
