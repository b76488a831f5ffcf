import pytest

from posetrec.canonical import canonical_key
from posetrec.complex import build_pnk, chomp_move, closure_of
from posetrec.engine import MemoTable, RunStats, Valuation, evaluate, evaluate_shortcircuit
from posetrec.errors import InvalidParameterError, ResourceLimitError, ValuationMismatchError
from posetrec.games import GrundyValuation, Outcome, WinLossValuation
from posetrec.linext import LinearExtensionValuation

from conftest import all_complexes, as_sets, naive_extensions, naive_grundy, naive_loses


def test_grundy_p22():
    value, stats = evaluate(build_pnk(2, 2), GrundyValuation())
    assert value == 2
    assert stats.positions_stored <= stats.positions_visited


def test_linext_single_face_not_stored():
    value, stats = evaluate(closure_of([0], 3), LinearExtensionValuation())
    assert value == 1
    assert stats.positions_stored == 0 and stats.positions_visited == 1


def test_grundy_p66_storage_bound():
    value, stats = evaluate(build_pnk(6, 6), GrundyValuation())
    assert value == 3
    assert stats.positions_stored <= 16352


def test_shortcircuit_examples():
    value, stats = evaluate_shortcircuit(build_pnk(1, 1), WinLossValuation())
    assert value is Outcome.WIN
    assert stats.positions_visited == 2  # the root and its single child
    for n in range(5):
        assert evaluate_shortcircuit(build_pnk(n, 0), WinLossValuation())[0] is Outcome.LOSS


def test_shortcircuit_needs_decisive_valuation():
    with pytest.raises(InvalidParameterError):
        evaluate_shortcircuit(build_pnk(2, 2), GrundyValuation())


@pytest.mark.parametrize("compiled", [True, False])
def test_oracle_equivalence_all_small_complexes(compiled):
    """Memoized, canonicalized evaluation matches plain recursion on n <= 4."""
    tables = {name: MemoTable() for name in ("g", "w", "ws", "e")}
    for A in all_complexes(4):
        fam = as_sets(A)
        e, _ = evaluate(A, LinearExtensionValuation(), tables["e"], compiled=compiled)
        assert e == naive_extensions(fam)
        if not A.is_position:
            continue
        g, _ = evaluate(A, GrundyValuation(), tables["g"], compiled=compiled)
        w, _ = evaluate(A, WinLossValuation(), tables["w"], compiled=compiled)
        ws, _ = evaluate_shortcircuit(A, WinLossValuation(), tables["ws"], compiled=compiled)
        assert g == naive_grundy(fam)
        assert (w is Outcome.LOSS) == naive_loses(fam)
        assert ws is w


def test_fresh_tables_agree_with_shared():
    for A in all_complexes(3):
        if A.is_position:
            g1, _ = evaluate(A, GrundyValuation(), compiled=False)
            g2, _ = evaluate(A, GrundyValuation(), compiled=True)
            assert g1 == g2


@pytest.mark.parametrize("compiled", [True, False])
def test_memo_purity(compiled):
    memo = MemoTable()
    A = build_pnk(5, 3)
    v1, s1 = evaluate(A, GrundyValuation(), memo, compiled=compiled)
    size = len(memo)
    v2, s2 = evaluate(A, GrundyValuation(), memo, compiled=compiled)
    assert v1 == v2 == 1
    assert s1.positions_stored == size
    assert s2.positions_stored == 0 and len(memo) == size


def test_memo_get_and_items():
    memo = MemoTable()
    evaluate(build_pnk(4, 4), GrundyValuation(), memo)
    assert memo.get(canonical_key(build_pnk(4, 4))) == 1
    assert memo.get(canonical_key(build_pnk(4, 3))) == 0
    assert canonical_key(build_pnk(4, 2)) in memo
    assert len(list(memo.items())) == len(memo)


def test_determinism():
    counts = {evaluate(build_pnk(5, 4), WinLossValuation())[1].positions_stored for _ in range(3)}
    assert len(counts) == 1
    counts = {evaluate(build_pnk(5, 5), LinearExtensionValuation())[1].positions_stored
              for _ in range(2)}
    assert len(counts) == 1


def test_valuation_tag_rejects_mixing():
    memo = MemoTable()
    evaluate(build_pnk(3, 3), GrundyValuation(), memo)
    with pytest.raises(ValuationMismatchError):
        evaluate(build_pnk(3, 3), LinearExtensionValuation(), memo)
    with pytest.raises(ValuationMismatchError):
        evaluate(build_pnk(3, 3), GrundyValuation(), memo, compiled=False)


@pytest.mark.parametrize("compiled", [True, False])
def test_memo_limit_aborts_with_partial_stats(compiled):
    memo = MemoTable(limit=50)
    with pytest.raises(ResourceLimitError) as info:
        evaluate(build_pnk(5, 5), GrundyValuation(), memo, compiled=compiled)
    stats = info.value.stats
    assert isinstance(stats, RunStats)
    assert stats.positions_stored == 50 == len(memo)
    assert stats.positions_visited > 50


def test_memo_limit_on_linext():
    with pytest.raises(ResourceLimitError):
        evaluate(build_pnk(4, 4), LinearExtensionValuation(), limit=10)


def test_stored_values_are_exact_after_abort():
    memo = MemoTable(limit=100)
    with pytest.raises(ResourceLimitError):
        evaluate_shortcircuit(build_pnk(6, 3), WinLossValuation(), memo)
    for key, value in memo.items():
        fam = as_sets(key.representative())
        assert (value is Outcome.LOSS) == naive_loses(fam)


class LongestGame(Valuation):
    """Length of the longest Chomp play from a position."""

    name = "longest-game"

    def base(self, A):
        return 0 if A.bits == 1 else None

    def children(self, A):
        return [chomp_move(A, x) for x in A.faces if x]

    def combine(self, values):
        return 1 + max(values)


def test_custom_valuation_runs_on_generic_engine():
    # every play removes at least one face, and removing maximal faces one
    # at a time is a legal play, so the longest game removes one face per move
    for A in list(all_complexes(3)):
        if A.is_position:
            value, _ = evaluate(A, LongestGame())
            assert value == len(A) - 1


def test_runstats_dict():
    s = RunStats(3, 7, 0.0123)
    assert s.as_dict() == {"positions_stored": 3, "positions_visited": 7, "elapsed_ms": 12}
