"""Small shared helpers: seed derivation, fresh names, deep recursion."""

from __future__ import annotations

import functools
import hashlib
import sys
import threading

_DEEP_STACK_BYTES = 512 * 1024 * 1024
_DEEP_RECURSION_LIMIT = 1_000_000
_deep_state = threading.local()


def run_deep(fn, /, *args, **kwargs):
    """Call fn on a thread with a large stack and recursion limit.

    Formula rewriting recurses once per nesting level, and quantifier
    prefixes produced by chained reductions routinely nest thousands
    deep, past what the default thread stack survives.  Nested calls
    already on the big-stack thread run inline.
    """
    if getattr(_deep_state, "active", False):
        return fn(*args, **kwargs)
    result: list = []
    failure: list[BaseException] = []

    def work():
        _deep_state.active = True
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, _DEEP_RECURSION_LIMIT))
        try:
            result.append(fn(*args, **kwargs))
        except BaseException as exc:
            failure.append(exc)
        finally:
            sys.setrecursionlimit(limit)
            _deep_state.active = False

    previous = threading.stack_size(_DEEP_STACK_BYTES)
    try:
        worker = threading.Thread(target=work, name="formula-rewrite")
        worker.start()
    finally:
        threading.stack_size(previous)
    worker.join()
    if failure:
        raise failure[0]
    return result[0]


def deep(fn):
    """Decorator form of run_deep."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return run_deep(fn, *args, **kwargs)

    return wrapper


def derive_seed(master: int, *stream: object) -> int:
    """Derive a 64-bit seed from a master seed and a named stream.

    Every random decision in the package flows through this, keyed by
    (component name, round, vertex, ...), so reruns with the same master
    seed are byte-identical no matter the evaluation order.
    """
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    for part in stream:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "big")


def fresh_name(base: str, taken) -> str:
    """Return `base`, or `base~k` for the smallest k making it unused."""
    if base not in taken:
        return base
    k = 1
    while f"{base}~{k}" in taken:
        k += 1
    return f"{base}~{k}"


def mex(values) -> int:
    """Smallest non-negative integer not in `values`."""
    seen = set(values)
    c = 0
    while c in seen:
        c += 1
    return c
