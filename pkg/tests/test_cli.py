"""CLI tests: subcommands, exit codes, machine output and fault injection."""

import json

import pytest

import eso.harness as harness
from eso.cli import EXIT_BUDGET, EXIT_FLAGS, EXIT_OK, EXIT_VERIFY, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_prints_exact_value(capsys):
    code, out, _ = run_cli(capsys, "solve", "--game", "a", "--m", "3", "--k", "3")
    assert code == EXIT_OK
    assert "ESO(3,3) = 4" in out


def test_solve_tier_game(capsys):
    code, out, _ = run_cli(capsys, "solve", "--game", "b", "--m", "5", "--k", "3")
    assert code == EXIT_OK
    assert "B(5,3) = 5" in out


def test_solve_json_and_cache(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ESO_CACHE_DIR", str(tmp_path))
    code, out, _ = run_cli(capsys, "solve", "--m", "4", "--k", "3", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["lo"] == data["hi"] == 6
    assert list(tmp_path.glob("*.memo"))


def test_solve_budget_exhausted_reports_interval(capsys):
    code, out, _ = run_cli(capsys, "solve", "--m", "6", "--k", "4",
                           "--budget", "0.05")
    assert code == EXIT_BUDGET
    assert "∈ [" in out


def test_table_matches_known_row(capsys):
    code, out, _ = run_cli(capsys, "table", "--game", "a", "--max-m", "5",
                           "--k", "3", "--csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "m,k,value,classical"
    data = {tuple(map(int, ln.split(",")[:2])): ln.split(",")[2:]
            for ln in lines[1:]}
    assert data[(3, 3)] == ["4", "5"]
    assert data[(4, 3)] == ["6", "7"]
    assert data[(5, 3)] == ["7", "9"]


def test_match_roundtrips_through_replay(tmp_path, capsys):
    out_file = tmp_path / "game.json"
    code, _, _ = run_cli(capsys, "match", "--a", "a:combined", "--b", "b:random",
                         "--m", "5", "--k", "3", "--seed", "9",
                         "--out", str(out_file))
    assert code == EXIT_OK
    code, out, _ = run_cli(capsys, "replay", str(out_file), "--json")
    assert code == EXIT_OK
    view = json.loads(out)
    assert view["m"] == 5 and view["cause"] in ("up-run", "down-run")
    assert len(view["final"]) == view["turns"]


def test_bad_flags_exit_code(capsys):
    assert main(["solve", "--m", "3"]) == EXIT_FLAGS
    assert main(["nonsense"]) == EXIT_FLAGS


def test_verify_fast_suite_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "fast", "--json")
    assert code == EXIT_OK
    reports = [json.loads(line) for line in out.strip().splitlines()]
    assert all(r["pass"] for r in reports)


def test_verify_detects_injected_fault(capsys, monkeypatch):
    # An off-by-one in a bound formula must surface as a nonzero exit with
    # the failing claim identified.
    real = harness.check_sandwich

    def broken():
        rep = real()
        rep.passed = False
        rep.counterexample = "injected off-by-one"
        return rep

    monkeypatch.setattr(harness, "check_sandwich", broken)
    code, out, _ = run_cli(capsys, "verify", "--suite", "fast")
    assert code == EXIT_VERIFY
    assert "injected off-by-one" in out
