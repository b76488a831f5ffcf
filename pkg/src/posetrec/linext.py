"""Counting linear extensions of downward-closed families.

The top element of any linear extension is a maximal face, so the count of
a family is the sum of the counts with one maximal face deleted. Counts are
exact Python ints throughout (``e(B_7)`` has 138 digits).
"""
from __future__ import annotations

import time
from math import comb, factorial, prod
from typing import Optional

import numpy as np

from . import _kernels
from .complex import Complex, delete_element, maximal_faces
from .engine import MemoTable, RunStats, Valuation, evaluate
from .errors import InvalidParameterError

BRUTE_FORCE_MAX_FACES = 10

# the 16 largest primes below 2**62
MODULI = (
    4611686018427387847, 4611686018427387817, 4611686018427387787, 4611686018427387761,
    4611686018427387751, 4611686018427387737, 4611686018427387733, 4611686018427387709,
    4611686018427387701, 4611686018427387631, 4611686018427387617, 4611686018427387587,
    4611686018427387461, 4611686018427387421, 4611686018427387409, 4611686018427387329,
)


class LinearExtensionValuation(Valuation):
    name = "linext"

    def base(self, A):
        # ∅ and one-element families have exactly one ordering
        return 1 if A.bits & (A.bits - 1) == 0 else None

    def children(self, A):
        return [delete_element(A, m) for m in maximal_faces(A)]

    def combine(self, values):
        return sum(values)


def count_linear_extensions(A: Complex, memo: Optional[MemoTable] = None, *, limit=None):
    """Number of linear extensions of ``A``; returns ``(count, RunStats)``."""
    return evaluate(A, LinearExtensionValuation(), memo, limit=limit)


def e_pn2_closed_form(n: int) -> int:
    """Linear extensions of the subsets of size at most 2 of an ``n``-set."""
    if n < 0:
        raise InvalidParameterError("n must be nonnegative")
    numerator = factorial(n) * factorial(comb(n, 2) + n)
    denominator = 1
    for i in range(1, n + 1):
        denominator *= i * n - comb(i, 2)
    q, r = divmod(numerator, denominator)
    if r:
        raise ArithmeticError(f"closed form not integral for n={n}")
    return q


def brute_force_extensions(A: Complex) -> int:
    """Count linear extensions by listing every topological order.

    No memo and no canonical forms; meant as an independent check on small
    families.
    """
    faces = A.faces
    if len(faces) > BRUTE_FORCE_MAX_FACES:
        raise InvalidParameterError(
            f"brute force refuses {len(faces)} faces (limit {BRUTE_FORCE_MAX_FACES})"
        )
    # below[i]: indices of faces strictly contained in faces[i]
    below = [
        [j for j, g in enumerate(faces) if g != f and g & f == g]
        for f in faces
    ]
    placed = [False] * len(faces)

    def extend(k):
        if k == len(faces):
            return 1
        total = 0
        for i in range(len(faces)):
            if not placed[i] and all(placed[j] for j in below[i]):
                placed[i] = True
                total += extend(k + 1)
                placed[i] = False
        return total

    return extend(0)


def _crt(residues, moduli) -> int:
    M = prod(moduli)
    x = 0
    for r, m in zip(residues, moduli):
        Mi = M // m
        x += int(r) * Mi * pow(Mi, -1, m)
    return x % M


def count_linear_extensions_layered(A: Complex):
    """Same count as :func:`count_linear_extensions`, computed top down.

    Starting from ``A`` with count 1, every isomorphism class one deletion
    below receives the summed counts of its parents, so the single class
    left at the bottom carries the number of deletion orders. Counts are
    kept modulo enough of ``MODULI`` that their product exceeds ``|A|!``,
    which bounds the answer, and recombined at the end. ``positions_stored``
    is the number of classes with at least two faces.
    """
    t0 = time.perf_counter()
    stats = RunStats()
    if len(A) <= 1:
        return 1, stats
    bound = factorial(len(A))
    moduli = []
    for m in MODULI:
        moduli.append(m)
        if prod(moduli) > bound:
            break
    else:
        raise InvalidParameterError("family too large for the available moduli")
    n = A.n
    mods = np.array(moduli, dtype=np.uint64)
    up = _kernels.up_table(n)
    layer = _kernels.canon_words(n, _kernels.to_words(A.bits, n))[0].reshape(1, -1)
    counts = np.ones((1, len(moduli)), dtype=np.uint64)
    for _ in range(len(A) - 1):
        stats.positions_stored += layer.shape[0]
        layer, counts, children = _kernels.count_layer(n, layer, counts, up, mods)
        stats.positions_visited += int(children)
    stats.elapsed = time.perf_counter() - t0
    return _crt(counts[0], moduli), stats
