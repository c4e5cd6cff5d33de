"""Game service tests over the in-process HTTP client."""

import json

import pytest
from fastapi.testclient import TestClient

from eso.harness import Transcript, replay
from eso.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def new_game(client, **kwargs):
    body = {"kind": "a", "m": 3, "k": 3, "human": "A", "engine": "b:optimal"}
    body.update(kwargs)
    resp = client.post("/games", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()


def test_human_a_versus_optimal_b_lasts_exactly_four_turns(client):
    view = new_game(client)
    gid = view["id"]
    turn = 0
    while view["status"] == "playing":
        # The human plays optimally too by asking for a hint.
        hint = client.get(f"/games/{gid}/hint").json()
        assert hint["source"] == "optimal"
        resp = client.post(f"/games/{gid}/moves", json=hint["move"])
        assert resp.status_code == 200
        view = resp.json()
        turn += 1
        assert turn <= 5
    assert view["turn"] == 4
    assert view["cause"] == "up-run" or view["cause"] == "down-run"


def test_hint_on_empty_board_reports_value_four(client):
    view = new_game(client)
    hint = client.get(f"/games/{view['id']}/hint").json()
    assert hint["source"] == "optimal"
    assert hint["value"] == 4
    assert "column" in hint["move"]


def test_human_b_against_combined_engine(client):
    view = new_game(client, m=5, human="B", engine="a:combined")
    gid = view["id"]
    assert view["pending_column"] is not None
    rounds = 0
    while view["status"] == "playing":
        rows = view["legal"]["rows"]
        resp = client.post(f"/games/{gid}/moves", json={"row": rows[0]})
        assert resp.status_code == 200
        view = resp.json()
        rounds += 1
        assert rounds <= 12
    # Certified window for the combined strategy at m=5 (loose spec value).
    assert view["turn"] <= 9


def test_view_tracks_runs_and_points(client):
    view = new_game(client, m=4, engine="b:nonextend")
    gid = view["id"]
    for column in (0, 1, 0):
        resp = client.post(f"/games/{gid}/moves", json={"column": column})
        if resp.status_code != 200:
            break
        view = resp.json()
        assert len(view["points"]) == view["turn"]
        assert view["up_run"] and len(view["up_run"]) == view["lis"]
        assert len(view["down_run"]) == view["lds"]


def test_error_codes(client):
    assert client.get("/games/zzz").status_code == 404
    view = new_game(client)
    gid = view["id"]
    # Wrong side: human is A, sending a row is out of turn.
    assert client.post(f"/games/{gid}/moves", json={"row": 0}).status_code == 409
    # Out-of-range column is unprocessable.
    assert client.post(f"/games/{gid}/moves",
                       json={"column": 99}).status_code == 422


def test_moves_rejected_after_terminal(client):
    view = new_game(client, m=1)
    gid = view["id"]
    resp = client.post(f"/games/{gid}/moves", json={"column": 0})
    assert resp.json()["status"] == "finished"
    assert client.post(f"/games/{gid}/moves",
                       json={"column": 0}).status_code == 409


def test_tier_game_session(client):
    view = new_game(client, kind="b", m=4, k=4, human="B", engine="a:halving")
    gid = view["id"]
    while view["status"] == "playing":
        tiers = view["legal"]["tiers"]
        hint = client.get(f"/games/{gid}/hint").json()
        tier = hint["move"].get("tier", tiers[0])
        view = client.post(f"/games/{gid}/moves", json={"tier": tier}).json()
    assert view["turn"] <= 7  # halving bound at (4,4)
    assert view["cause"] == "up-run"


def test_solve_endpoint(client):
    data = client.get("/solve", params={"game": "a", "m": 4, "k": 3}).json()
    assert data == {"game": "a", "m": 4, "k": 3, "lo": 6, "hi": 6,
                    "complete": True}


def test_session_persistence(tmp_path, monkeypatch):
    monkeypatch.setenv("ESO_SESSION_DIR", str(tmp_path))
    client = TestClient(create_app())
    view = new_game(client, m=1)
    client.post(f"/games/{view['id']}/moves", json={"column": 0})
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    tr = Transcript.from_json(files[0].read_text())
    board = replay(tr)
    assert board.t == 1


def test_replay_endpoint_steps_through_a_recorded_game(client):
    from eso.harness import run_match

    tr = run_match("a:optimal", "b:optimal", 3, 3)
    body = json.loads(tr.to_json())
    views = []
    for step in range(tr.turns + 1):
        resp = client.post("/replay", json={"transcript": body, "step": step})
        assert resp.status_code == 200
        views.append(resp.json())
    assert [len(v["points"]) for v in views] == list(range(tr.turns + 1))
    assert views[-1]["status"] == "finished"
    assert views[-1]["cause"] == tr.cause
    assert views[0]["lis"] == 0
    bad = client.post("/replay", json={"transcript": body, "step": 99})
    assert bad.status_code == 422


def test_engine_must_oppose_the_human(client):
    resp = client.post("/games", json={"kind": "a", "m": 3, "k": 3,
                                       "human": "A", "engine": "a:optimal"})
    assert resp.status_code == 422
    resp = client.post("/games", json={"kind": "a", "m": 3, "k": 3,
                                       "human": "B", "engine": "b:optimal"})
    assert resp.status_code == 422
