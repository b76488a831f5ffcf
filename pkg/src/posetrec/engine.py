"""Memoized recursive evaluation over canonical forms.

A :class:`Valuation` describes a function defined recursively on complexes:
a value for terminal complexes, the list of smaller complexes a complex
depends on, and how child values combine. :func:`evaluate` computes it with
one memo entry per isomorphism class.

Valuations that set ``kernel`` (the two game valuations) are run by the
compiled search in :mod:`posetrec._kernels`; everything else goes through
the generic explicit-stack loop below.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

import numpy as np

from . import _kernels
from .canonical import CanonicalKey, canonical_key
from .complex import Complex
from .errors import InvalidParameterError, ResourceLimitError, ValuationMismatchError


@dataclass
class RunStats:
    positions_stored: int = 0
    positions_visited: int = 0
    elapsed: float = 0.0

    @property
    def elapsed_ms(self) -> int:
        return int(round(self.elapsed * 1000))

    def __iadd__(self, other: "RunStats") -> "RunStats":
        self.positions_stored += other.positions_stored
        self.positions_visited += other.positions_visited
        self.elapsed += other.elapsed
        return self

    def as_dict(self) -> dict:
        return {
            "positions_stored": self.positions_stored,
            "positions_visited": self.positions_visited,
            "elapsed_ms": self.elapsed_ms,
        }


class Valuation:
    """Recursive function on complexes.

    Subclasses implement :meth:`children` and :meth:`combine`, and usually
    :meth:`base`. Every child must have strictly fewer faces than its
    parent. Two-valued valuations that support short-circuit search also
    implement :meth:`decisive`.
    """

    name = "valuation"
    kernel: Optional[int] = None

    def base(self, A: Complex) -> Any:
        """Value of a terminal complex, or None if ``A`` must be expanded."""
        return None

    def children(self, A: Complex) -> list[Complex]:
        raise NotImplementedError

    def combine(self, values: list) -> Any:
        raise NotImplementedError

    def decisive(self, child_value) -> Any:
        """Parent value forced by a single child value, or None."""
        return None

    def validate(self, A: Complex) -> None:
        pass

    # compiled-kernel hooks
    def move_order(self, n: int) -> np.ndarray:
        return np.arange(1, 1 << n, dtype=np.int64)

    def decode(self, code: int) -> Any:
        return code

    def encode(self, value) -> int:
        return int(value)


class MemoTable:
    """Map from canonical key to value, bound to a single valuation.

    ``limit`` caps the number of entries; storing beyond it raises
    :class:`ResourceLimitError`.
    """

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self.tag: Optional[str] = None
        self.backend: Optional[str] = None
        self._dict: dict[CanonicalKey, Any] = {}
        # word width -> [keys, tags, vals, count]
        self._compiled: dict[int, list] = {}
        self._decode = None

    def bind(self, valuation: Valuation, backend: str) -> None:
        if self.tag is None:
            self.tag = valuation.name
            self._decode = valuation.decode
        elif self.tag != valuation.name:
            raise ValuationMismatchError(
                f"memo table holds {self.tag!r} values, cannot be reused for {valuation.name!r}"
            )
        if self.backend is None:
            self.backend = backend
        elif self.backend != backend:
            raise ValuationMismatchError(
                f"memo table was filled by the {self.backend} evaluator, not {backend}"
            )

    def __len__(self) -> int:
        return len(self._dict) + sum(entry[3] for entry in self._compiled.values())

    def get(self, key: CanonicalKey, default=None):
        if key in self._dict:
            return self._dict[key]
        entry = self._compiled.get(_kernels.nwords(key.n))
        if entry is not None:
            code = _kernels.table_get(entry[0], entry[1], entry[2], key.n, key.bits)
            if code is not None:
                return self._decode(code)
        return default

    def __contains__(self, key: CanonicalKey) -> bool:
        return self.get(key, _MISSING) is not _MISSING

    def _store(self, key: CanonicalKey, value) -> None:
        if self.limit is not None and len(self) >= self.limit:
            raise ResourceLimitError(f"memo table limit of {self.limit} entries reached")
        self._dict[key] = value

    def _compiled_entry(self, W: int) -> list:
        if W not in self._compiled:
            self._compiled[W] = [*_kernels.new_table(W), 0]
        return self._compiled[W]

    def items(self) -> Iterator[tuple[CanonicalKey, Any]]:
        yield from self._dict.items()
        for W, (keys, tags, vals, _) in self._compiled.items():
            for i in np.flatnonzero(tags):
                n = int(tags[i]) - 1
                yield CanonicalKey(n, _kernels.from_words(keys[i])), self._decode(int(vals[i]))


_MISSING = object()


class _Frame:
    __slots__ = ("key", "children", "values")

    def __init__(self, key, children):
        self.key = key
        self.children = children
        self.values = []


def evaluate(A: Complex, valuation: Valuation, memo: Optional[MemoTable] = None, *,
             limit: Optional[int] = None, compiled: bool = True):
    """Value of ``valuation`` on ``A`` and the RunStats of this call."""
    return _run(A, valuation, memo, limit, compiled, shortcircuit=False)


def evaluate_shortcircuit(A: Complex, valuation: Valuation, memo: Optional[MemoTable] = None, *,
                          limit: Optional[int] = None, compiled: bool = True):
    """Like :func:`evaluate`, but a parent stops at its first decisive child."""
    if type(valuation).decisive is Valuation.decisive:
        raise InvalidParameterError(f"{valuation.name} has no decisive values")
    return _run(A, valuation, memo, limit, compiled, shortcircuit=True)


def _run(A, valuation, memo, limit, compiled, shortcircuit):
    valuation.validate(A)
    if memo is None:
        memo = MemoTable()
    if limit is None:
        limit = memo.limit
    use_kernel = compiled and valuation.kernel is not None
    memo.bind(valuation, "compiled" if use_kernel else "generic")
    stats = RunStats()
    start = time.perf_counter()
    try:
        if use_kernel:
            value = _run_compiled(A, valuation, memo, limit, shortcircuit, stats)
        else:
            value = _run_generic(A, valuation, memo, limit, shortcircuit, stats)
    except ResourceLimitError as exc:
        stats.elapsed = time.perf_counter() - start
        exc.stats = stats
        raise
    except MemoryError as exc:
        stats.elapsed = time.perf_counter() - start
        raise ResourceLimitError("out of memory during evaluation", stats) from exc
    stats.elapsed = time.perf_counter() - start
    return value, stats


def _run_generic(A, v, memo, limit, shortcircuit, stats):
    table = memo._dict

    def probe(B):
        stats.positions_visited += 1
        b = v.base(B)
        if b is not None:
            return True, b, None
        key = canonical_key(B)
        val = table.get(key, _MISSING)
        if val is _MISSING:
            return False, None, key
        return True, val, key

    def store(key, value):
        if limit is not None and len(memo) >= limit:
            raise ResourceLimitError(f"memo table limit of {limit} entries reached")
        table[key] = value
        stats.positions_stored += 1

    found, value, key = probe(A)
    if found:
        return value
    stack = [_Frame(key, iter(v.children(A)))]
    while stack:
        frame = stack[-1]
        child = next(frame.children, _MISSING)
        if child is _MISSING:
            value = v.combine(frame.values)
        else:
            found, cv, ckey = probe(child)
            if not found:
                stack.append(_Frame(ckey, iter(v.children(child))))
                continue
            if shortcircuit:
                value = v.decisive(cv)
                if value is None:
                    frame.values.append(cv)
                    continue
            else:
                frame.values.append(cv)
                continue
        # frame settled with ``value``; propagate up through decisive parents
        while True:
            done = stack.pop()
            store(done.key, value)
            if not stack:
                return value
            parent = stack[-1]
            if shortcircuit:
                forced = v.decisive(value)
                if forced is not None:
                    value = forced
                    continue
            parent.values.append(value)
            break
    raise AssertionError("unreachable")


def _run_compiled(A, v, memo, limit, shortcircuit, stats):
    n = A.n
    W = _kernels.nwords(n)
    entry = memo._compiled_entry(W)
    keys, tags, vals, count = entry
    status, code, visited, stored, keys, tags, vals, count = _kernels.game_search(
        n, _kernels.to_words(A.bits, n), v.kernel, bool(shortcircuit), v.move_order(n),
        _kernels.up_table(n), keys, tags, vals, count, -1 if limit is None else int(limit),
    )
    entry[:] = [keys, tags, vals, count]
    stats.positions_visited += int(visited)
    stats.positions_stored += int(stored)
    if status == _kernels.LIMIT:
        raise ResourceLimitError(f"memo table limit of {limit} entries reached", stats)
    return v.decode(int(code))
