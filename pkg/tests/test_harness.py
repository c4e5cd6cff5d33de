"""Harness tests: the strategy registry, match runner, transcripts, and the
adversary drivers."""

import json

import pytest

from eso.core import StrategyError
from eso.harness import (
    BoundReport,
    Transcript,
    check_sandwich,
    exhaustive_adversary,
    make_strategy,
    new_board,
    random_match_lengths,
    replay,
    run_match,
    verify_all,
    _OptimalA,
    _OptimalB,
)
from eso.solver import solve
from eso.strategy_a import CombinedStrategy, HalvingStrategy
from eso.strategy_b import FracturingStrategy, NonExtenderStrategy


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def test_registry_parses_ids():
    assert isinstance(make_strategy("a:combined", 5, 3), CombinedStrategy)
    assert isinstance(make_strategy("a:halving", 4, 4, "b"), HalvingStrategy)
    assert isinstance(make_strategy("b:nonextend", 5, 3), NonExtenderStrategy)
    frac = make_strategy("b:fracturing(4)", 5, 3)
    assert isinstance(frac, FracturingStrategy) and frac.w == 4
    default = make_strategy("b:fracturing", 9, 3)
    assert default.w == 2


def test_registry_rejects_unknown_ids():
    with pytest.raises(ValueError):
        make_strategy("a:wizard", 3, 3)
    with pytest.raises(ValueError):
        make_strategy("optimal", 3, 3)


# ---------------------------------------------------------------------------
# Matches and transcripts
# ---------------------------------------------------------------------------

def test_optimal_versus_optimal_hits_exact_value():
    tr = run_match("a:optimal", "b:optimal", 3, 3)
    assert tr.turns == 4 and tr.cause == "up-run"


def test_combined_versus_nonextender_small():
    tr = run_match("a:combined", "b:nonextend", 3, 3)
    assert tr.cause in ("up-run", "down-run")
    assert tr.turns <= 7  # comfortably inside the certified window


def test_halving_versus_boundary_tiers_tier_game():
    # The halving upper bound and the boundary-tier lower bound coincide at
    # 2m-1 = 7 for (4,4), pinning the match length exactly.
    tr = run_match("a:halving", "b:boundary-tiers", 4, 4, kind="b")
    assert tr.turns == 7
    assert tr.cause == "up-run"
    # Plain tier separation only promises its weaker bound.
    tr2 = run_match("a:halving", "b:tiers", 4, 4, kind="b")
    assert 5 <= tr2.turns <= 7


def test_match_replays_deterministically():
    t1 = run_match("a:random", "b:random", 5, 3, seed=42)
    t2 = run_match("a:random", "b:random", 5, 3, seed=42)
    assert t1.to_json() == t2.to_json()
    t3 = run_match("a:random", "b:random", 5, 3, seed=43)
    assert t3.to_json() != t1.to_json()


def test_transcript_json_roundtrip_and_replay():
    tr = run_match("a:combined", "b:random", 6, 3, seed=7)
    text = tr.to_json()
    data = json.loads(text)
    assert list(data.keys()) == ["v", "kind", "m", "k", "moves", "strategies",
                                 "seed", "result"]
    back = Transcript.from_json(text)
    assert back.moves == tr.moves
    board = replay(back)
    assert board.t == tr.turns


def test_replay_rejects_mismatched_result():
    tr = run_match("a:optimal", "b:optimal", 3, 3)
    tr.cause = "down-run" if tr.cause == "up-run" else "up-run"
    with pytest.raises(ValueError):
        replay(tr)


def test_match_never_reaches_classical_cap():
    for a_id, b_id in (("a:combined", "b:fracturing"), ("a:optimal", "b:random")):
        tr = run_match(a_id, b_id, 5, 3, seed=1)
        assert tr.cause in ("up-run", "down-run")
        assert tr.turns <= (5 - 1) * (3 - 1) + 1


# ---------------------------------------------------------------------------
# Adversary drivers
# ---------------------------------------------------------------------------

def test_exhaustive_of_optimal_equals_solver_value():
    for m, k in ((3, 3), (4, 3)):
        want = solve("a", m, k).value
        assert exhaustive_adversary(lambda m=m, k=k: _OptimalA(m, k), "a", m, k) == want
        assert exhaustive_adversary(lambda m=m, k=k: _OptimalB(m, k), "b", m, k) == want


def test_random_match_lengths_are_replayable():
    lens1 = random_match_lengths("a:combined", "a", 5, 3, "a", range(20))
    lens2 = random_match_lengths("a:combined", "a", 5, 3, "a", range(20))
    assert lens1 == lens2


# ---------------------------------------------------------------------------
# Bound reports
# ---------------------------------------------------------------------------

def test_bound_report_json_lines():
    rep = check_sandwich()
    assert rep.passed
    data = json.loads(rep.to_json())
    assert set(data) >= {"claim", "instances", "bound", "observed", "pass",
                         "runtime_s"}


def test_fast_suite_runs_and_reports(tmp_path):
    reports = verify_all("fast")
    assert all(isinstance(r, BoundReport) for r in reports)
    claims = {r.claim for r in reports}
    assert "table-small-values" in claims
    assert "fracturing-lower" in claims


def test_every_registered_strategy_id_plays_a_full_game():
    a_ids = ["a:optimal", "a:random", "a:combined", "a:middling", "a:wbarb"]
    b_ids = ["b:optimal", "b:random", "b:nonextend", "b:fracturing"]
    for a_id in a_ids:
        tr = run_match(a_id, "b:random", 4, 3, seed=5)
        assert tr.cause in ("up-run", "down-run"), (a_id, tr.error)
    for b_id in b_ids:
        tr = run_match("a:random", b_id, 4, 3, seed=5)
        assert tr.cause in ("up-run", "down-run"), (b_id, tr.error)
    for b_id in ["b:tiers", "b:boundary-tiers", "b:optimal", "b:random"]:
        tr = run_match("a:halving", b_id, 4, 4, kind="b", seed=5)
        assert tr.cause == "up-run", (b_id, tr.error)
