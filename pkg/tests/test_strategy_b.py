"""Player-B strategy tests: fracturing bookkeeping and invariants, tier
separation rules, and the non-extending baseline."""

import copy
import itertools
import random

import pytest

from eso.core import (
    Board,
    StrategyError,
    TierBoard,
    TieredState,
    is_terminal,
    longest_down_run,
    longest_up_run,
)
from eso.strategy_b import (
    BoundaryTierStrategy,
    FracturingStrategy,
    NonExtenderStrategy,
    TierSeparationStrategy,
    fracturing_guarantee,
    fracturing_width,
)


# ---------------------------------------------------------------------------
# Width and guarantee arithmetic
# ---------------------------------------------------------------------------

def test_width_and_guarantee_values():
    assert fracturing_width(27) == 4
    assert fracturing_guarantee(27) == 31
    assert fracturing_width(9) == 2
    assert fracturing_guarantee(9) == 11
    assert fracturing_width(5) == 2
    assert fracturing_guarantee(5) == 7


def test_guarantee_beats_closed_form_lower_display():
    for m in range(3, 60):
        assert fracturing_guarantee(m) > m + (6 * m) ** (1 / 3) - 2


def test_z_table():
    fs = FracturingStrategy(4)
    assert [fs.z(j) for j in range(1, 7)] == [7, 4, 2, 1, 1, 1]
    fs1 = FracturingStrategy(1)
    assert fs1.z(1) == 1


# ---------------------------------------------------------------------------
# Fracturing bookkeeping
# ---------------------------------------------------------------------------

def run_fracturing(w, columns, m=9):
    board = Board()
    fs = FracturingStrategy(w)
    for col in columns:
        row = fs.respond(board, col)
        pid = board.insert(col, row)
        if is_terminal(board.ranks(), m, 3) is not None:
            return board, fs, True
        fs.observe(board, pid)
        fs.validate(board)
    return board, fs, False


def test_first_moves_build_the_central_run():
    board, fs, _ = run_fracturing(3, [0, 1, 2, 0])
    assert len(fs.c_all) == 4
    assert not fs.bins_left and not fs.bins_right
    # Central points in x-order ascend in y: the consistent-row rule.
    ys = [board.y_index(p) for p in fs.c_all]
    assert ys == sorted(ys)


def test_left_fracture_creates_wastebin_and_banks():
    # w=2: z1=2: the outer regions open once the run has 2 points.
    board, fs, _ = run_fracturing(2, [0, 1, 0])
    assert len(fs.bins_left) == 1
    assert fs.i == 2
    bin_ = fs.bins_left[0]
    assert len(bin_["members"]) == 1
    q = bin_["members"][0]
    # The wastebin point was lifted w-i+1 = 2 notches: above both run points.
    assert board.y_index(q) == board.t - 1
    assert fs.c_ref == q
    # The bank took the run points at or left of the anchor.
    assert fs.banked and fs.banked[0][0] == 1


def test_wastebin_columns_reuse_the_bin_row_band():
    board, fs, _ = run_fracturing(2, [0, 1, 0, 0, 0])
    members = fs.bins_left[0]["members"]
    assert len(members) == 3
    # The bin stays an up-run on its own.
    run = sorted(members, key=board.x_index)
    ys = [board.y_index(p) for p in run]
    assert ys == sorted(ys)


def test_fracturing_never_loses_to_down_run_random_games():
    rng = random.Random(99)
    for m in (5, 7, 9, 12):
        for trial in range(40):
            board = Board()
            fs = FracturingStrategy.for_game(m)
            for turn in range(40):
                col = rng.randint(0, board.t)
                row = fs.respond(board, col)
                pid = board.insert(col, row)
                cause = is_terminal(board.ranks(), m, 3)
                if cause is not None:
                    assert cause.value == "up-run"
                    assert board.t >= fracturing_guarantee(m), (m, trial)
                    break
                fs.observe(board, pid)
                fs.validate(board)
            else:
                pytest.fail("game did not terminate")
            assert longest_down_run(board.ranks().ranks) <= 2


def test_fracturing_partition_is_two_up_runs():
    rng = random.Random(7)
    board = Board()
    fs = FracturingStrategy(3)
    observed = []
    for _ in range(18):
        col = rng.randint(0, board.t)
        row = fs.respond(board, col)
        pid = board.insert(col, row)
        if is_terminal(board.ranks(), 12, 3) is not None:
            break
        observed.append(pid)
        fs.observe(board, pid)
        fs.validate(board)
    members = [p for b in fs.bins_left + fs.bins_right for p in b["members"]]
    assert sorted(members + fs.c_all) == sorted(observed)
    assert len(observed) >= 12


def test_banked_runs_respect_their_size_bounds():
    # Exhaustive over all A-column sequences for a short horizon.
    def walk(board, fs, depth):
        if depth == 0:
            return
        for col in range(board.t + 1):
            b2 = copy.deepcopy(board)
            f2 = copy.deepcopy(fs)
            row = f2.respond(b2, col)
            pid = b2.insert(col, row)
            if is_terminal(b2.ranks(), 9, 3) is not None:
                continue
            f2.observe(b2, pid)
            f2.validate(b2)  # includes the bank bounds
            walk(b2, f2, depth - 1)

    walk(Board(), FracturingStrategy(2), 6)


# ---------------------------------------------------------------------------
# Tier strategies
# ---------------------------------------------------------------------------

def test_tier_separation_examples():
    strat = TierSeparationStrategy(4)
    board = TierBoard(4)
    assert strat.respond(board, 0) == 1
    board.insert(0, 1)
    # Adjacent column: tier 1 is blocked (separation 0 < 1), tier 2 is free.
    assert strat.respond(board, 1) == 2
    assert strat.respond(board, 0) == 2


def test_tier_separation_always_finds_a_tier():
    rng = random.Random(3)
    for k in (4, 5, 6):
        strat = TierSeparationStrategy(k)
        board = TierBoard(k)
        for _ in range(30):
            col = rng.randint(0, board.t)
            tier = strat.respond(board, col)
            board.insert(col, tier)
    # Same-tier points separated by >= floor(k/2)-1 everywhere.
    need = 6 // 2 - 1
    for i, p in enumerate(board.xorder):
        for j, q in enumerate(board.xorder):
            if i < j and board.tier_of[p] == board.tier_of[q]:
                assert j - i - 1 >= need


def test_boundary_tier_examples():
    strat = BoundaryTierStrategy(4)
    board = TierBoard(4)
    assert strat.respond(board, 0) == 2  # c = max(1, 2-0) = 2 on empty
    strat5 = BoundaryTierStrategy(5)
    board5 = TierBoard(5)
    rng = random.Random(5)
    for _ in range(25):
        col = rng.randint(0, board5.t)
        tier = strat5.respond(board5, col)
        assert tier != 4  # odd k never uses the top tier
        board5.insert(col, tier)


def test_boundary_tier_edge_windows():
    strat = BoundaryTierStrategy(6)
    board = TierBoard(6)
    t1 = strat.respond(board, 0)
    assert t1 == 3  # max(1, 3-0)
    board.insert(0, t1)
    # Far left of one point: window starts at 3 - |L| = 2.
    assert strat.respond(board, 0) >= 2


# ---------------------------------------------------------------------------
# Non-extender
# ---------------------------------------------------------------------------

def test_non_extender_examples():
    strat = NonExtenderStrategy()
    board = Board()
    assert strat.respond(board, 0) == 0
    board.insert(0, 0)
    assert strat.respond(board, 0) == 1  # just above the single point


def test_non_extender_preserves_longest_up_run():
    rng = random.Random(13)
    strat = NonExtenderStrategy()
    for _ in range(60):
        t = rng.randint(1, 8)
        perm = list(range(1, t + 1))
        rng.shuffle(perm)
        board = Board()
        from eso.core import moves_from_points
        for col, row in moves_from_points(list(enumerate(perm))):
            board.insert(col, row)
        before = longest_up_run(board.ranks().ranks)
        col = rng.randint(0, board.t)
        row = strat.respond(board, col)
        board.insert(col, row)
        assert longest_up_run(board.ranks().ranks) == before
