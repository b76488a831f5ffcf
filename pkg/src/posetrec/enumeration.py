"""Census of downward-closed families on ``n`` points.

Labeled families are counted by direct enumeration (the Dedekind numbers);
isomorphism classes by collecting the distinct canonical keys of those
families. Both counts include the empty family and ``{∅}``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterator, Optional, TextIO

import numpy as np

from . import _kernels
from .canonical import CanonicalKey
from .complex import Complex, build_pnk, down_mask
from .errors import InvalidParameterError

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 6

# known values, for display only
KNOWN_LABELED = (2, 3, 6, 20, 168, 7581, 7828354, 2414682040998,
                 56130437228687557907788)
KNOWN_UNLABELED = (2, 3, 5, 10, 30, 210, 16353, 490013148)


@dataclass
class ComplexCensus:
    n: int
    labeled_count: Optional[int] = None
    unlabeled_count: Optional[int] = None
    representatives: list = field(default_factory=list, repr=False)

    def check(self) -> None:
        if self.labeled_count is not None and self.unlabeled_count is not None:
            assert self.unlabeled_count <= self.labeled_count <= factorial(self.n) * self.unlabeled_count


def _refuse(n: int, what: str) -> None:
    if n < 0:
        raise InvalidParameterError("n must be nonnegative")
    if n > EXHAUSTIVE_MAX_N:
        known = KNOWN_LABELED[n] if n < len(KNOWN_LABELED) else "unknown"
        raise InvalidParameterError(
            f"exhaustive {what} enumeration is limited to n <= {EXHAUSTIVE_MAX_N}; "
            f"n={n} has {known} labeled families, which is infeasible to list"
        )


def iter_labeled(n: int) -> Iterator[Complex]:
    """Every downward-closed family on ``n`` labeled points (pure Python).

    Faces are decided from the largest mask down; a face already forced by
    an included superset offers no choice.
    """
    _refuse(n, "labeled")
    stack = [((1 << n) - 1, 0)]
    while stack:
        f, bits = stack.pop()
        while f >= 0 and (bits >> f) & 1:
            f -= 1
        if f < 0:
            yield Complex(n, bits, check=False)
            continue
        stack.append((f - 1, bits))
        stack.append((f - 1, bits | down_mask(f)))


def count_labeled_complexes(n: int) -> int:
    _refuse(n, "labeled")
    W = _kernels.nwords(n)
    keys, tags, vals = _kernels.new_table(W, 16)
    labeled, *_ = _kernels.enum_downsets(n, _kernels.down_table(n), False, keys, tags, vals, 0)
    return int(labeled)


def census(n: int, *, keep_representatives: bool = False) -> ComplexCensus:
    """Labeled and unlabeled counts from one pass over the labeled families."""
    _refuse(n, "labeled")
    W = _kernels.nwords(n)
    keys, tags, vals = _kernels.new_table(W)
    labeled, keys, tags, vals, count = _kernels.enum_downsets(
        n, _kernels.down_table(n), True, keys, tags, vals, 0)
    result = ComplexCensus(n, int(labeled), int(count))
    if keep_representatives:
        rows = _kernels.table_keys(keys, tags)
        keys_int = sorted(_kernels.from_words(r) for r in rows)
        result.representatives = [CanonicalKey(n, b) for b in keys_int]
    result.check()
    return result


def count_unlabeled_complexes(n: int, *, method: str = "labeled") -> int:
    """Number of isomorphism classes of downward-closed families on ``n`` points.

    ``method="labeled"`` canonicalizes every labeled family (n <= 6).
    ``method="layers"`` walks down from B_n deleting one maximal face at a
    time and keeps only the canonical keys of two consecutive face counts;
    it is the route for n = 7.
    """
    if method == "labeled":
        return census(n).unlabeled_count
    if method != "layers":
        raise InvalidParameterError(f"unknown method {method!r}")
    return sum(len(layer) for layer in iter_class_layers(n))


def iter_class_layers(n: int) -> Iterator[np.ndarray]:
    """Canonical keys grouped by face count, from B_n down to the empty family."""
    if n < 0 or n > 8:
        raise InvalidParameterError("n must be in 0..8")
    up = _kernels.up_table(n)
    top = _kernels.canon_words(n, _kernels.to_words(build_pnk(n, n).bits, n))[0]
    layer = top.reshape(1, -1)
    size = 1 << n
    while True:
        log.debug("n=%d faces=%d classes=%d", n, size, len(layer))
        yield layer
        if size == 0:
            return
        layer = _kernels.deletion_layer(n, layer, up)
        size -= 1


def write_representatives(census_: ComplexCensus, out: TextIO) -> None:
    for key in census_.representatives:
        out.write(f"{key}\n")


def dedekind_lower_bound(n: int) -> int:
    """``C(n, floor(n/2))``, a lower bound on ``log2 M(n)``."""
    return comb(n, n // 2)
