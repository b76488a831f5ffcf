"""Downward-closed set families over a small ground set.

A face is an ``n``-bit mask (vertex ``i`` is bit ``i``). A :class:`Complex`
stores its faces as a characteristic vector: a Python int whose bit ``f`` is
set when the face with mask ``f`` belongs to the family. For ``n <= 8`` the
vector has at most 256 bits, so membership, Chomp moves and element
deletion are single big-int operations.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterable, Iterator

from .errors import IllegalMoveError, InvalidParameterError

MAX_N = 8


def face(*vertices: int) -> int:
    """Mask of the face with the given vertices, e.g. ``face(0, 2) == 0b101``."""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def face_vertices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def face_size(mask: int) -> int:
    return bin(mask).count("1")


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 0 or n > MAX_N:
        raise InvalidParameterError(f"ground-set size must be in 0..{MAX_N}, got {n!r}")


@lru_cache(maxsize=None)
def down_mask(f: int) -> int:
    """Characteristic vector of all subsets of ``f``."""
    out = 0
    s = f
    while True:
        out |= 1 << s
        if s == 0:
            break
        s = (s - 1) & f
    return out


@lru_cache(maxsize=None)
def up_mask(n: int, f: int) -> int:
    """Characteristic vector of all supersets of ``f`` inside ``{0..n-1}``."""
    full = (1 << n) - 1
    rest = full & ~f
    out = 0
    s = rest
    while True:
        out |= 1 << (f | s)
        if s == 0:
            break
        s = (s - 1) & rest
    return out


def iter_bits(x: int) -> Iterator[int]:
    """Positions of set bits of ``x`` in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def is_downward_closed(n: int, bits: int) -> bool:
    for f in iter_bits(bits):
        g = f
        while g:
            low = g & -g
            if not (bits >> (f ^ low)) & 1:
                return False
            g ^= low
    return True


class Complex:
    """An immutable downward-closed family of faces on ``n`` points.

    The empty family (no faces at all) and ``{∅}`` are distinct values.
    """

    __slots__ = ("n", "bits", "_faces")

    def __init__(self, n: int, bits: int, *, check: bool = True):
        if check:
            _check_n(n)
            if bits < 0 or bits >> (1 << n):
                raise InvalidParameterError("face outside the ground set")
            if not is_downward_closed(n, bits):
                raise InvalidParameterError("family is not downward closed")
        self.n = n
        self.bits = bits
        self._faces = None

    @classmethod
    def from_faces(cls, n: int, faces: Iterable[int]) -> "Complex":
        _check_n(n)
        bits = 0
        for f in faces:
            if f < 0 or f >> n:
                raise InvalidParameterError(f"face {f:#x} has a vertex >= {n}")
            bits |= 1 << f
        return cls(n, bits)

    @property
    def faces(self) -> tuple[int, ...]:
        """Face masks in ascending order."""
        if self._faces is None:
            self._faces = tuple(iter_bits(self.bits))
        return self._faces

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, f: int) -> bool:
        return f >= 0 and bool((self.bits >> f) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.faces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self.n == other.n and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        if self.bits == 0:
            body = "{}"
        else:
            body = ",".join("".join(map(str, face_vertices(m))) or "∅" for m in maximal_faces(self))
        return f"Complex(n={self.n}, max=[{body}])"

    @property
    def is_position(self) -> bool:
        """True when the family contains ∅ and so can be played as Chomp."""
        return bool(self.bits & 1)


def build_pnk(n: int, k: int) -> Complex:
    """All subsets of ``{0..n-1}`` with at most ``k`` elements; ``build_pnk(n, n)`` is B_n."""
    _check_n(n)
    if not isinstance(k, int) or k < 0 or k > n:
        raise InvalidParameterError(f"need 0 <= k <= n, got n={n}, k={k}")
    bits = 0
    for f in range(1 << n):
        if face_size(f) <= k:
            bits |= 1 << f
    return Complex(n, bits, check=False)


def closure_of(maximal: Iterable[int], n: int) -> Complex:
    """Downward closure of the given faces. An empty list gives the empty family."""
    _check_n(n)
    bits = 0
    for f in maximal:
        if f < 0 or f >> n:
            raise InvalidParameterError(f"face {f:#x} has a vertex >= {n}")
        bits |= down_mask(f)
    return Complex(n, bits, check=False)


def maximal_faces(A: Complex) -> list[int]:
    out = []
    bits = A.bits
    for f in A.faces:
        if bits & up_mask(A.n, f) == 1 << f:
            out.append(f)
    return out


def chomp_move(A: Complex, x: int) -> Complex:
    """Remove ``x`` and every face containing it."""
    if x == 0:
        raise IllegalMoveError("the empty face cannot be chosen")
    if x not in A:
        raise IllegalMoveError(f"face {x:#x} is not in the position")
    return Complex(A.n, A.bits & ~up_mask(A.n, x), check=False)


def delete_element(A: Complex, m: int) -> Complex:
    """Remove the single maximal face ``m``."""
    if m not in A or A.bits & up_mask(A.n, m) != 1 << m:
        raise InvalidParameterError(f"face {m:#x} is not a maximal face")
    return Complex(A.n, A.bits & ~(1 << m), check=False)


def pnk_face_count(n: int, k: int) -> int:
    return sum(comb(n, j) for j in range(k + 1))
