"""Canonical forms of complexes under relabeling of the vertices.

Vertices are first sorted by their invariant vector (entry ``j`` counts the
``j``-sets containing the vertex) and the canonical form is the lexmin
relabeling among the permutations that respect that order.

Encodings are compared as ascending lists of face masks. For two families of
equal size that order reduces to: the family containing the smallest face of
their symmetric difference is the smaller one. This lets the search fill in
the characteristic vector of the image one label at a time: once labels
``0..t`` are placed, every image face with mask below ``2**(t+1)`` is fixed,
and partial assignments whose new chunk is worse than the best are dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complex import Complex, iter_bits
from .errors import InvalidParameterError


@dataclass(frozen=True)
class CanonicalKey:
    n: int
    bits: int

    def __str__(self) -> str:
        width = max(1, (1 << self.n) // 4)
        return f"{self.n}:{self.bits:0{width}x}"

    @classmethod
    def parse(cls, text: str) -> "CanonicalKey":
        n, _, hexpart = text.strip().partition(":")
        return cls(int(n), int(hexpart, 16))

    def representative(self) -> Complex:
        return Complex(self.n, self.bits, check=False)


def vertex_invariants(A: Complex) -> list[tuple[int, ...]]:
    """Per vertex, the number of ``j``-sets containing it for ``j = 1..n``."""
    n = A.n
    counts = [[0] * n for _ in range(n)]
    for f in A.faces:
        size = bin(f).count("1")
        for v in iter_bits(f):
            counts[v][size - 1] += 1
    return [tuple(c) for c in counts]


def check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(sigma)
    if len(sigma) != n or sorted(sigma) != list(range(n)):
        raise InvalidParameterError(f"not a permutation of 0..{n - 1}: {sigma}")
    return sigma


def permute_face(f: int, sigma: Sequence[int]) -> int:
    out = 0
    for v in iter_bits(f):
        out |= 1 << sigma[v]
    return out


def apply_permutation(A: Complex, sigma: Sequence[int]) -> Complex:
    """Relabel every vertex ``i`` as ``sigma[i]``."""
    sigma = check_permutation(sigma, A.n)
    bits = 0
    for f in A.faces:
        bits |= 1 << permute_face(f, sigma)
    return Complex(A.n, bits, check=False)


def invert(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def _better(c: int, best: int) -> int:
    """-1 if chunk ``c`` beats ``best``, 0 on a tie, 1 if worse."""
    d = c ^ best
    if d == 0:
        return 0
    return -1 if c & d & -d else 1


def encoding_less(a: int, b: int) -> bool:
    """Order of characteristic vectors as ascending face lists (equal sizes)."""
    return _better(a, b) < 0


def _swap_invariant(bits: int, faces, u: int, v: int) -> bool:
    """Whether transposing ``u`` and ``v`` maps the family onto itself.

    Assumes equal invariants, so checking faces with ``u`` but not ``v``
    suffices.
    """
    ub, vb = 1 << u, 1 << v
    for f in faces:
        if f & ub and not f & vb and not (bits >> (f ^ ub ^ vb)) & 1:
            return False
    return True


def canonicalize(A: Complex) -> tuple[CanonicalKey, tuple[int, ...]]:
    """Return the canonical key of ``A`` and a witness permutation.

    ``apply_permutation(A, witness)`` equals ``key.representative()``.
    """
    n, bits = A.n, A.bits
    inv = vertex_invariants(A)
    order = sorted(range(n), key=lambda v: (inv[v], v))

    # twin[v]: smallest vertex u with the same invariant such that swapping
    # u and v is an automorphism; branching on twins gives identical images
    twin = list(range(n))
    reps: list[int] = []
    for v in order:
        for u in reps:
            if inv[u] == inv[v] and _swap_invariant(bits, A.faces, u, v):
                twin[v] = u
                break
        else:
            reps.append(v)

    survivors: list[tuple[int, ...]] = [()]
    key = bits & 1
    for t in range(n):
        cls = inv[order[t]]
        candidates = [v for v in order if inv[v] == cls]
        best = None
        nxt: list[tuple[int, ...]] = []
        for seq in survivors:
            images = [0]
            for old in seq:
                b = 1 << old
                images += [m | b for m in images]
            tried = set()
            for v in candidates:
                if v in seq or twin[v] in tried:
                    continue
                tried.add(twin[v])
                vb = 1 << v
                chunk = 0
                for s, m in enumerate(images):
                    if (bits >> (m | vb)) & 1:
                        chunk |= 1 << s
                cmp = -1 if best is None else _better(chunk, best)
                if cmp < 0:
                    best = chunk
                    nxt = [seq + (v,)]
                elif cmp == 0:
                    nxt.append(seq + (v,))
        survivors = nxt
        key |= best << (1 << t)

    witness = [0] * n
    for label, old in enumerate(survivors[0]):
        witness[old] = label
    return CanonicalKey(n, key), tuple(witness)


def canonical_key(A: Complex) -> CanonicalKey:
    """Canonical key only; uses the compiled search."""
    from . import _kernels

    return CanonicalKey(A.n, _kernels.canonical_bits(A.n, A.bits))


def is_canonical(A: Complex) -> bool:
    return canonical_key(A).bits == A.bits
