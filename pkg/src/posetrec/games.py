"""Chomp (Subset Takeaway) on downward-closed families.

A move picks a nonempty face and removes it together with every face that
contains it; the player without a move loses.
"""
from __future__ import annotations

import enum
import threading
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .canonical import apply_permutation, check_permutation, permute_face
from .complex import Complex, chomp_move, is_downward_closed
from .engine import MemoTable, RunStats, Valuation, evaluate, evaluate_shortcircuit
from .errors import InvalidPositionError, NotApplicableError


class Outcome(enum.Enum):
    WIN = "first-player-win"
    LOSS = "first-player-loss"

    def __str__(self) -> str:
        return self.value


def mex(values: Iterable[int]) -> int:
    seen = set(values)
    g = 0
    while g in seen:
        g += 1
    return g


def _check_position(A: Complex) -> None:
    if not A.is_position:
        raise InvalidPositionError("a Chomp position must contain the empty face")


class GrundyValuation(Valuation):
    name = "grundy"
    kernel = _kernels.GRUNDY

    def validate(self, A):
        _check_position(A)

    def base(self, A):
        return 0 if A.bits == 1 else None

    def children(self, A):
        return [chomp_move(A, x) for x in A.faces if x]

    def combine(self, values):
        return mex(values)


class WinLossValuation(Valuation):
    """Outcome valuation; ``largest_first`` tries big faces before small ones."""

    name = "winloss"
    kernel = _kernels.WINLOSS

    def __init__(self, largest_first: bool = False):
        self.largest_first = largest_first

    def validate(self, A):
        _check_position(A)

    def base(self, A):
        return Outcome.LOSS if A.bits == 1 else None

    def _order(self, faces: Sequence[int]) -> list[int]:
        faces = [x for x in faces if x]
        if self.largest_first:
            faces.sort(key=lambda x: (-bin(x).count("1"), x))
        return faces

    def children(self, A):
        return [chomp_move(A, x) for x in self._order(A.faces)]

    def combine(self, values):
        return Outcome.WIN if Outcome.LOSS in values else Outcome.LOSS

    def decisive(self, child_value):
        return Outcome.WIN if child_value is Outcome.LOSS else None

    def move_order(self, n):
        return np.array(self._order(range(1 << n)), dtype=np.int64)

    def decode(self, code):
        return Outcome.WIN if code else Outcome.LOSS

    def encode(self, value):
        return int(value is Outcome.WIN)


def grundy(A: Complex, memo: Optional[MemoTable] = None, *, limit=None, compiled=True):
    """Grundy value of the position ``A``; returns ``(value, RunStats)``."""
    return evaluate(A, GrundyValuation(), memo, limit=limit, compiled=compiled)


def winloss(A: Complex, memo: Optional[MemoTable] = None, *, limit=None, compiled=True,
            largest_first=False):
    return evaluate_shortcircuit(A, WinLossValuation(largest_first), memo, limit=limit,
                                 compiled=compiled)


def winning_moves(A: Complex, memo: Optional[MemoTable] = None, *, find_first=False,
                  limit=None, compiled=True, threads: int = 1):
    """Faces whose removal leaves a first-player loss.

    By default every move is checked, so the list is complete; with
    ``find_first`` the search stops at the first winning move. ``threads > 1``
    spreads the root's children over worker threads, each with its own memo
    table; the returned list is the same as with one thread.
    """
    _check_position(A)
    if threads > 1 and compiled:
        return _winning_moves_threaded(A, find_first, limit, threads)
    if memo is None:
        memo = MemoTable()
    stats = RunStats()
    wins = []
    for x in A.faces:
        if not x:
            continue
        child = chomp_move(A, x)
        outcome, s = winloss(child, memo, limit=limit, compiled=compiled)
        stats += s
        if outcome is Outcome.LOSS:
            wins.append(x)
            if find_first:
                break
    return wins, stats


def _winning_moves_threaded(A, find_first, limit, threads):
    from concurrent.futures import ThreadPoolExecutor

    moves = [x for x in A.faces if x]
    local = threading.local()

    def check(x):
        if not hasattr(local, "memo"):
            local.memo = MemoTable()
        outcome, s = winloss(chomp_move(A, x), local.memo, limit=limit)
        return x, outcome, s

    stats = RunStats()
    wins = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for x, outcome, s in pool.map(check, moves):
            stats += s
            if outcome is Outcome.LOSS:
                wins.append(x)
    # the first winner in face order, so the answer does not depend on timing
    return (wins[:1] if find_first else wins), stats


def fixed_subcomplex(A: Complex, phi: Sequence[int]) -> Complex:
    """Faces of ``A`` fixed setwise by the involution ``phi``.

    Both hypotheses of the reduction are checked: ``phi`` must be an
    automorphism of order at most 2 and the fixed faces must form a
    downward-closed family. Under them the result has the same outcome and
    Grundy value as ``A``.
    """
    phi = check_permutation(phi, A.n)
    if any(phi[phi[i]] != i for i in range(A.n)):
        raise NotApplicableError("permutation is not an involution")
    if apply_permutation(A, phi) != A:
        raise NotApplicableError("permutation is not an automorphism of the complex")
    bits = 0
    for f in A.faces:
        if permute_face(f, phi) == f:
            bits |= 1 << f
    if not is_downward_closed(A.n, bits):
        raise NotApplicableError("fixed faces are not downward closed")
    return Complex(A.n, bits, check=False)
