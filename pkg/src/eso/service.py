"""JSON-over-HTTP game service backing the browser UI.

Sessions live in memory; every response's state view is derived from the
session transcript, so the client never computes game logic itself.  The
engine reply to a human move is computed synchronously in the same
response.  When the engine plays the column side its proposed column is
exposed as ``pending_column`` and fixed until the human answers it.
"""

from __future__ import annotations

import os
import uuid
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from eso.core import (
    StrategyError,
    is_terminal,
    longest_down_run,
    longest_up_run,
)
from eso.harness import Transcript, make_strategy, new_board
from eso.solver import solve, value_within_budget

HINT_NODE_BUDGET = 500_000


class NewGame(BaseModel):
    kind: str = Field("a", pattern="^[ab]$")
    m: int = Field(..., ge=1, le=12)
    k: int = Field(..., ge=1, le=8)
    human: str = Field(..., pattern="^[AB]$")
    engine: str = "b:optimal"


class HumanMove(BaseModel):
    column: Optional[int] = None
    row: Optional[int] = None
    tier: Optional[int] = None


class ReplayStep(BaseModel):
    transcript: dict
    step: int = Field(..., ge=0)


class Session:
    def __init__(self, game_id: str, req: NewGame):
        self.id = game_id
        self.kind = req.kind
        self.m = req.m
        self.k = req.k
        self.human = req.human
        self.engine_id = req.engine
        self.board = new_board(req.kind, req.k)
        self.engine = make_strategy(req.engine, req.m, req.k, req.kind, seed=0)
        self.moves: list[tuple[int, int]] = []
        self.cause: Optional[str] = None
        self.pending_column: Optional[int] = None

    @property
    def finished(self) -> bool:
        return self.cause is not None

    def state(self):
        return self.board.ranks() if self.kind == "a" else self.board.tiers()

    def values(self) -> tuple[int, ...]:
        s = self.state()
        return s.ranks if self.kind == "a" else s.tiers

    def advance_engine_column(self) -> None:
        """When the engine owns the columns, lock in its next proposal."""
        if self.human == "B" and not self.finished and self.pending_column is None:
            self.pending_column = self.engine.next(self.board)

    def play_turn(self, column: int, row: int) -> None:
        pid = self.board.insert(column, row)
        self.moves.append((column, row))
        cause = is_terminal(self.state(), self.m, self.k)
        if cause is not None:
            self.cause = cause.value
            self._maybe_persist()
            return
        self.engine.observe(self.board, pid)

    def transcript(self) -> Transcript:
        ids = {"a": self.engine_id if self.human == "B" else "human",
               "b": self.engine_id if self.human == "A" else "human"}
        return Transcript(self.kind, self.m, self.k, list(self.moves), ids,
                          None, len(self.moves), self.cause or "max-turns")

    def _maybe_persist(self) -> None:
        out_dir = os.environ.get("ESO_SESSION_DIR")
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            with open(os.path.join(out_dir, f"{self.id}.json"), "w") as fh:
                fh.write(self.transcript().to_json() + "\n")


def _maximal_run_indices(values, up: bool, ties: bool) -> list[int]:
    """Indices (x-order) of one longest up- or down-run, smallest-index
    witness, by quadratic DP."""
    n = len(values)
    if n == 0:
        return []
    best = [1] * n
    prev = [-1] * n
    for i in range(n):
        for j in range(i):
            if up:
                ok = values[j] <= values[i] if ties else values[j] < values[i]
            else:
                ok = values[j] > values[i]
            if ok and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
                prev[i] = j
    end = max(range(n), key=lambda i: best[i])
    out = []
    while end != -1:
        out.append(end)
        end = prev[end]
    return out[::-1]


def _view(session: Session) -> dict:
    values = session.values()
    ties = session.kind == "b"
    lis = longest_up_run(values, ties_extend=ties)
    lds = longest_down_run(values)
    legal: dict = {}
    if not session.finished:
        if session.human == "A":
            legal = {"columns": list(range(session.board.t + 1))}
        elif session.kind == "a":
            legal = {"rows": list(range(session.board.t + 1))}
        else:
            legal = {"tiers": list(range(1, session.k))}
    return {
        "id": session.id,
        "kind": session.kind,
        "m": session.m,
        "k": session.k,
        "human": session.human,
        "engine": session.engine_id,
        "points": list(values),
        "turn": len(session.moves),
        "status": "finished" if session.finished else "playing",
        "cause": session.cause,
        "lis": lis,
        "lds": lds,
        "up_run": _maximal_run_indices(values, True, ties),
        "down_run": _maximal_run_indices(values, False, ties),
        "pending_column": session.pending_column,
        "legal": legal,
        "to_move": None if session.finished else session.human,
    }


def create_app() -> FastAPI:
    app = FastAPI(title="eso game service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}

    def get_session(game_id: str) -> Session:
        session = sessions.get(game_id)
        if session is None:
            raise HTTPException(404, "unknown game id")
        return session

    @app.post("/games")
    def create_game(req: NewGame):
        if req.kind == "b" and req.k < 2:
            raise HTTPException(422, "tier games need k >= 2")
        needed = "b" if req.human == "A" else "a"
        if not req.engine.startswith(needed + ":"):
            raise HTTPException(
                422, f"engine must play the other side ({needed}:...)")
        game_id = uuid.uuid4().hex[:12]
        session = Session(game_id, req)
        try:
            session.advance_engine_column()
        except StrategyError as exc:
            raise HTTPException(422, f"engine failed to open: {exc}")
        sessions[game_id] = session
        return _view(session)

    @app.get("/games/{game_id}")
    def get_game(game_id: str):
        return _view(get_session(game_id))

    @app.post("/games/{game_id}/moves")
    def post_move(game_id: str, move: HumanMove):
        session = get_session(game_id)
        if session.finished:
            raise HTTPException(409, "game already finished")
        t = session.board.t
        if session.human == "A":
            if move.column is None:
                raise HTTPException(409, "it is the column player's turn")
            if not 0 <= move.column <= t:
                raise HTTPException(422, "column out of range")
            try:
                reply = session.engine.respond(session.board, move.column)
            except StrategyError as exc:
                raise HTTPException(422, f"engine reply failed: {exc}")
            session.play_turn(move.column, reply)
            out = _view(session)
            out["engine_reply"] = {"row" if session.kind == "a" else "tier": reply}
            return out
        # Human plays rows (or tiers) against the engine's pending column.
        answer = move.tier if session.kind == "b" else move.row
        if answer is None:
            raise HTTPException(409, "it is the row player's turn")
        if session.pending_column is None:
            raise HTTPException(409, "no engine column is pending")
        if session.kind == "a" and not 0 <= answer <= t:
            raise HTTPException(422, "row out of range")
        if session.kind == "b" and not 1 <= answer <= session.k - 1:
            raise HTTPException(422, "tier out of range")
        column = session.pending_column
        session.pending_column = None
        session.play_turn(column, answer)
        try:
            session.advance_engine_column()
        except StrategyError as exc:
            raise HTTPException(422, f"engine failed to move: {exc}")
        out = _view(session)
        out["engine_reply"] = {"column": session.pending_column}
        return out

    def _optimal_hint(session: Session):
        """Best move and value if the solver finishes within its budget."""
        state = session.state()
        table: dict = {}
        value = value_within_budget(state, session.m, session.k,
                                    HINT_NODE_BUDGET, table)
        if value is None:
            return None
        t = session.board.t
        key = "tier" if session.kind == "b" else "row"
        replies = range(1, session.k) if session.kind == "b" else range(t + 1)

        def child_value(c, r):
            child = state.insert(c, r)
            return value_within_budget(child, session.m, session.k,
                                       HINT_NODE_BUDGET, table)

        if session.human == "A":
            for col in range(t + 1):
                worst = 0
                for r in replies:
                    v = child_value(col, r)
                    if v is None:
                        return None
                    worst = max(worst, v)
                if 1 + worst == value:
                    return {"move": {"column": col}, "source": "optimal",
                            "value": value}
            return None
        column = session.pending_column
        best_r, best_v = None, -1
        for r in replies:
            v = child_value(column, r)
            if v is None:
                return None
            if v > best_v:
                best_r, best_v = r, v
        return {"move": {key: best_r}, "source": "optimal", "value": value}

    @app.get("/games/{game_id}/hint")
    def hint(game_id: str):
        session = get_session(game_id)
        if session.finished:
            raise HTTPException(409, "game already finished")
        if session.human == "B" and session.pending_column is None:
            raise HTTPException(409, "no engine column is pending")
        answer = _optimal_hint(session)
        if answer is not None:
            return answer
        # Fall back to a named strategy replayed over this game's history.
        key = "tier" if session.kind == "b" else "row"
        if session.human == "A":
            sid = ("a:combined" if session.kind == "a" and session.k == 3
                   else "a:halving" if session.kind == "b" else "a:random")
        else:
            sid = ("b:fracturing" if session.kind == "a" and session.k == 3
                   else "b:tiers" if session.kind == "b" else "b:nonextend")
        strat = make_strategy(sid, session.m, session.k, session.kind, seed=0)
        board = new_board(session.kind, session.k)
        try:
            for col, row in session.moves:
                pid = board.insert(col, row)
                strat.observe(board, pid)
            if session.human == "A":
                return {"move": {"column": strat.next(board)}, "source": "strategy"}
            reply = strat.respond(board, session.pending_column)
            return {"move": {key: reply}, "source": "strategy"}
        except StrategyError:
            fallback = {"column": session.board.t // 2} if session.human == "A" \
                else {key: 0 if session.kind == "a" else 1}
            return {"move": fallback, "source": "strategy"}

    @app.get("/solve")
    def solve_endpoint(game: str = "a", m: int = 3, k: int = 3,
                       budget: float = 10.0):
        if game not in ("a", "b") or m < 1 or k < 1 or (game == "b" and k < 2):
            raise HTTPException(422, "bad instance")
        report = solve(game, m, k, budget_seconds=budget)
        return {"game": game, "m": m, "k": k, "lo": report.lo,
                "hi": report.hi, "complete": report.complete}

    @app.post("/replay")
    def replay_step(req: ReplayStep):
        """State view after the first ``step`` moves of a recorded game, so
        the replay viewer never computes runs itself."""
        import json as _json

        from eso.harness import Transcript

        try:
            tr = Transcript.from_json(_json.dumps(req.transcript))
        except (KeyError, ValueError) as exc:
            raise HTTPException(422, f"bad transcript: {exc}")
        if req.step > len(tr.moves):
            raise HTTPException(422, "step beyond the recorded game")
        board = new_board(tr.kind, tr.k)
        for col, row in tr.moves[: req.step]:
            if not (0 <= col <= board.t):
                raise HTTPException(422, "transcript has an illegal column")
            try:
                board.insert(col, row)
            except ValueError as exc:
                raise HTTPException(422, f"transcript has an illegal move: {exc}")
        values = (board.ranks().ranks if tr.kind == "a"
                  else board.tiers().tiers)
        ties = tr.kind == "b"
        cause = is_terminal(board.ranks() if tr.kind == "a" else board.tiers(),
                            tr.m, tr.k)
        return {
            "kind": tr.kind, "m": tr.m, "k": tr.k,
            "step": req.step, "total": len(tr.moves),
            "points": list(values),
            "lis": longest_up_run(values, ties_extend=ties),
            "lds": longest_down_run(values),
            "up_run": _maximal_run_indices(values, True, ties),
            "down_run": _maximal_run_indices(values, False, ties),
            "status": "finished" if cause is not None else "playing",
            "cause": cause.value if cause else None,
        }

    return app
