"""Command-line front end.

Results go to stdout as ``key=value`` lines (or one JSON object with
``--json``); diagnostics go to stderr. Exit codes: 0 success, 2 parse or
usage error, 3 illegal position or move, 4 memo cap exceeded, 5 reduction
not applicable.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Optional

from . import textio
from .complex import Complex, build_pnk, chomp_move
from .engine import MemoTable, RunStats
from .errors import ParseError, PosetrecError
from .games import fixed_subcomplex, grundy, winloss, winning_moves
from .linext import count_linear_extensions, count_linear_extensions_layered, e_pn2_closed_form

log = logging.getLogger("posetrec")


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Permutation of ``0..n-1`` from cycle notation such as ``(6 7)`` or ``(67)(01)``."""
    perm = list(range(n))
    groups = re.findall(r"\(([^()]*)\)", text)
    if not groups or re.sub(r"\([^()]*\)", "", text).strip():
        raise ParseError(f"bad cycle notation {text!r}")
    seen = set()
    for g in groups:
        parts = [p for p in re.split(r"[\s,]+", g.strip()) if p]
        if len(parts) == 1 and len(parts[0]) > 1:
            parts = list(parts[0])
        try:
            cycle = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"bad cycle {g!r}") from None
        for v in cycle:
            if v < 0 or v >= n or v in seen:
                raise ParseError(f"bad or repeated vertex {v} in {text!r}")
            seen.add(v)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            perm[a] = b
    return tuple(perm)


def _position(args) -> tuple[Complex, str]:
    if args.input is not None:
        if args.n is not None or args.k is not None:
            raise ParseError("give either --input or --n/--k, not both")
        A = textio.load(args.input)
        desc = args.input
    else:
        if args.n is None:
            raise ParseError("a position needs --n (and optionally --k) or --input")
        k = args.n if args.k is None else args.k
        A = build_pnk(args.n, k)
        desc = f"P({args.n},{k})"
    for token in args.move or ():
        A = chomp_move(A, textio.parse_face(token, A.n))
    if args.move:
        desc += " after " + " ".join(args.move)
    return A, desc


def _approx(value: int) -> str:
    digits = str(value)
    if len(digits) <= 6:
        return digits
    return f"{digits[0]}.{digits[1]}e{len(digits) - 1}"


def _emit(args, record: dict, stats: Optional[RunStats]) -> None:
    if stats is not None and args.stats:
        record.update(stats.as_dict())
    if args.json:
        print(json.dumps(record))
    else:
        for key, value in record.items():
            print(f"{key}={value}")


def cmd_grundy(args):
    A, desc = _position(args)
    value, stats = grundy(A, MemoTable(args.memo_limit))
    return {"command": "grundy", "input": desc, "value": str(value)}, stats


def cmd_winloss(args):
    A, desc = _position(args)
    value, stats = winloss(A, MemoTable(args.memo_limit), largest_first=args.largest_first)
    return {"command": "winloss", "input": desc, "value": str(value)}, stats


def cmd_moves(args):
    A, desc = _position(args)
    if args.threads < 1:
        raise ParseError("--threads must be at least 1")
    moves, stats = winning_moves(A, MemoTable(args.memo_limit), find_first=args.find_first,
                                 limit=args.memo_limit, threads=args.threads)
    return {"command": "moves", "input": desc, "value": textio.format_faces(moves),
            "count": str(len(moves))}, stats


def cmd_linext(args):
    A, desc = _position(args)
    if args.method == "layers":
        value, stats = count_linear_extensions_layered(A)
    else:
        value, stats = count_linear_extensions(A, MemoTable(args.memo_limit))
    record = {"command": "linext", "input": desc, "value": str(value)}
    if value >= 10**6:
        record["approx"] = _approx(value)
    return record, stats


def cmd_linext_formula(args):
    value = e_pn2_closed_form(args.n)
    return {"command": "linext-formula", "input": f"P({args.n},2)", "value": str(value)}, None


def cmd_enumerate(args):
    from .enumeration import census, count_unlabeled_complexes

    if args.method == "layers":
        value = count_unlabeled_complexes(args.n, method="layers")
        return {"command": "enumerate", "input": f"n={args.n}", "value": str(value)}, None
    c = census(args.n, keep_representatives=args.stream is not None)
    if args.stream is not None:
        with open(args.stream, "w") as fh:
            for key in c.representatives:
                fh.write(f"{key}\n")
    return {"command": "enumerate", "input": f"n={args.n}", "value": str(c.unlabeled_count),
            "labeled": str(c.labeled_count)}, None


def cmd_reduce(args):
    A, desc = _position(args)
    phi = parse_cycles(args.involution, A.n)
    P0 = fixed_subcomplex(A, phi)
    faces = textio.dumps(P0).splitlines()[1] if len(P0) else ""
    return {"command": "reduce", "input": desc, "value": faces, "n": str(P0.n)}, None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="posetrec", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, position=True):
        if position:
            sp.add_argument("--n", type=int, help="ground-set size (builds P(n,k))")
            sp.add_argument("--k", type=int, help="max face size (default: n)")
            sp.add_argument("--input", help="complex file in text format")
            sp.add_argument("--move", action="append", metavar="FACE",
                            help="apply a Chomp move first, e.g. --move 67 (repeatable)")
        sp.add_argument("--stats", action="store_true", help="report positions and time")
        sp.add_argument("--json", action="store_true", help="emit one JSON object")
        sp.add_argument("--memo-limit", type=int, default=None, metavar="COUNT",
                        help="abort when the memo table would exceed COUNT entries")

    sp = sub.add_parser("grundy", help="Grundy value of a Chomp position")
    common(sp)
    sp.set_defaults(func=cmd_grundy)

    sp = sub.add_parser("winloss", help="first-player outcome")
    common(sp)
    sp.add_argument("--largest-first", action="store_true", help="try large faces first")
    sp.set_defaults(func=cmd_winloss)

    sp = sub.add_parser("moves", help="winning moves")
    common(sp)
    sp.add_argument("--find-first", action="store_true", help="stop at the first winning move")
    sp.add_argument("--threads", type=int, default=1,
                    help="check root moves in parallel, one memo table per thread")
    sp.set_defaults(func=cmd_moves)

    sp = sub.add_parser("linext", help="number of linear extensions")
    common(sp)
    sp.add_argument("--method", choices=["memo", "layers"], default="memo",
                    help="'layers' pushes counts down by face count in compiled code")
    sp.set_defaults(func=cmd_linext)

    sp = sub.add_parser("linext-formula", help="closed form for e(P(n,2))")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_linext_formula, stats=False)

    sp = sub.add_parser("enumerate", help="count complexes on n points")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--stream", metavar="FILE", help="write canonical keys, one per line")
    sp.add_argument("--method", choices=["labeled", "layers"], default="labeled",
                    help="'layers' counts classes only, by deletion from B_n")
    sp.set_defaults(func=cmd_enumerate, stats=False)

    sp = sub.add_parser("reduce", help="fixed subcomplex of an involution")
    common(sp)
    sp.add_argument("--involution", required=True, help="cycle notation, e.g. '(6 7)'")
    sp.set_defaults(func=cmd_reduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        record, stats = args.func(args)
    except PosetrecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        stats = getattr(exc, "stats", None)
        if stats is not None:
            print(f"partial stats: {stats.as_dict()}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, record, stats)
    return 0


if __name__ == "__main__":
    sys.exit(main())
