"""Plain-text complex format.

::

    n=7
    01,02,03,04,05,06,12,13,14,15,23,24,35,46

The second line lists maximal faces as digit strings. ``empty`` stands for
the family ``{∅}``; a blank or missing line is the empty family.
"""
from __future__ import annotations

import re

from .complex import Complex, closure_of, face_vertices, maximal_faces
from .errors import ParseError, PosetrecError

MAX_TEXT_N = 10

_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")


def format_face(mask: int) -> str:
    return "".join(str(v) for v in face_vertices(mask))


def parse_face(token: str, n: int) -> int:
    token = token.strip()
    if not token.isdigit():
        raise ParseError(f"bad face {token!r}: expected vertex digits")
    mask = 0
    for ch in token:
        v = int(ch)
        if v >= n:
            raise ParseError(f"vertex {v} in face {token!r} is outside 0..{n - 1}")
        if mask >> v & 1:
            raise ParseError(f"repeated vertex {v} in face {token!r}")
        mask |= 1 << v
    return mask


def format_faces(masks) -> str:
    return ",".join(format_face(m) if m else "empty" for m in masks)


def parse_faces(line: str, n: int) -> list[int]:
    line = line.strip()
    if not line:
        return []
    out = []
    for tok in line.split(","):
        tok = tok.strip()
        out.append(0 if tok == "empty" else parse_face(tok, n))
    return out


def dumps(A: Complex) -> str:
    if A.n > MAX_TEXT_N:
        raise ValueError("text format supports n <= 10")
    return f"n={A.n}\n{format_faces(maximal_faces(A))}\n"


def loads(text: str) -> Complex:
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("missing header line 'n=<int>'")
    m = _HEADER.match(lines[0])
    if not m:
        raise ParseError(f"bad header {lines[0]!r}: expected 'n=<int>'")
    n = int(m.group(1))
    rest = [ln for ln in lines[1:] if ln.strip()]
    if len(rest) > 1:
        raise ParseError("expected a single line of maximal faces")
    faces = parse_faces(rest[0], n) if rest else []
    try:
        return closure_of(faces, n)
    except PosetrecError as exc:
        raise ParseError(str(exc)) from exc


def load(path) -> Complex:
    with open(path) as fh:
        return loads(fh.read())
