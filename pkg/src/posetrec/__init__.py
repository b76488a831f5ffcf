"""Memoized recursion over downward-closed set families.

Chomp/Subset Takeaway outcomes and Grundy values, linear-extension counts,
and censuses of simplicial complexes, all keyed by canonical forms under
vertex relabeling.
"""
from .canonical import CanonicalKey, apply_permutation, canonical_key, canonicalize, vertex_invariants
from .complex import (
    Complex,
    build_pnk,
    chomp_move,
    closure_of,
    delete_element,
    face,
    maximal_faces,
)
from .engine import MemoTable, RunStats, Valuation, evaluate, evaluate_shortcircuit
from .games import Outcome, fixed_subcomplex, grundy, mex, winloss, winning_moves
from .linext import (
    brute_force_extensions,
    count_linear_extensions,
    count_linear_extensions_layered,
    e_pn2_closed_form,
)

__all__ = [
    "CanonicalKey", "Complex", "MemoTable", "Outcome", "RunStats", "Valuation",
    "apply_permutation", "brute_force_extensions", "build_pnk", "canonical_key",
    "canonicalize", "chomp_move", "closure_of", "count_linear_extensions",
    "count_linear_extensions_layered",
    "delete_element", "e_pn2_closed_form", "evaluate", "evaluate_shortcircuit",
    "face", "fixed_subcomplex", "grundy", "maximal_faces", "mex",
    "vertex_invariants", "winloss", "winning_moves",
]
