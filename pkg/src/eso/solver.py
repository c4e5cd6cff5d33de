"""Exact minimax solver for the A-game and the tiered B-game.

The value of a position is the total number of turns the game lasts from
there under optimal play: 0 on terminal positions, otherwise
``1 + min over columns of max over rows (or tiers) of the child value``.

Machinery, in rough order of impact:

* transposition table keyed by the lexicographic minimum of the position
  and its 180-degree rotation (reverse the x-order, complement the values),
  which preserves both run statistics and the move structure;
* fail-soft alpha-beta over the a-priori window
  [max(1, min(m,k) - t), (m-1)(k-1)+1 - t], with the upper end tightened to
  max(1, (m-1)(k-1) - t) for m,k >= 3 (one forcing turn always exists from a
  non-terminal position of (m-1)(k-1)-1 points);
* O(t) child terminal checks from per-parent run arrays, so child positions
  are only materialised when they must be searched;
* iterative deepening on the value from the lower bound upwards, so a
  budgeted solve always ends with certified bounds, never a wrong value.

Branches never recurse past (m-1)(k-1)+1 points: positions that large are
terminal by the classical pigeonhole bound, and the window collapses first.
"""

from __future__ import annotations

import os
import struct
import time
from dataclasses import dataclass
from typing import Optional

from eso.core import RankedState, TieredState, is_terminal

CACHE_MAGIC = b"ESO1"
CACHE_VERSION = 1


@dataclass(frozen=True)
class GameValue:
    """Exact number of turns to termination under optimal play."""

    turns: int


@dataclass(frozen=True)
class SolveReport:
    game: str
    m: int
    k: int
    lo: int
    hi: int
    nodes: int
    seconds: float

    @property
    def complete(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.complete:
            raise BudgetExceeded(self)
        return self.lo


class BudgetExceeded(Exception):
    """Raised when a budgeted solve stops early; carries certified bounds."""

    def __init__(self, report: SolveReport):
        self.report = report
        super().__init__(
            f"budget exceeded: {report.game.upper()}({report.m},{report.k}) "
            f"in [{report.lo},{report.hi}] after {report.nodes} nodes"
        )


class _Stats:
    __slots__ = ("nodes", "deadline", "node_budget")

    def __init__(self, deadline: Optional[float], node_budget: Optional[int]):
        self.nodes = 0
        self.deadline = deadline
        self.node_budget = node_budget

    def tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _OutOfBudget
        if self.deadline is not None and self.nodes % 4096 == 0:
            if time.monotonic() > self.deadline:
                raise _OutOfBudget


class _OutOfBudget(Exception):
    pass


def canonical_key(state: RankedState | TieredState) -> tuple:
    """Transposition key: the lexicographic minimum of the position and its
    180-degree rotation, which preserves run statistics and move structure."""
    if isinstance(state, TieredState):
        rot = tuple(state.k - v for v in reversed(state.tiers))
        return min(state.tiers, rot)
    t = state.t
    rot = tuple(t + 1 - r for r in reversed(state.ranks))
    return min(state.ranks, rot)


# ---------------------------------------------------------------------------
# A-game search
# ---------------------------------------------------------------------------

def _window_a(t: int, m: int, k: int) -> tuple[int, int]:
    lo = min(m, k) - t
    if lo < 1:
        lo = 1
    es_minus1 = (m - 1) * (k - 1)
    hi = es_minus1 + 1 - t
    if m >= 3 and k >= 3:
        cap = es_minus1 - t
        if cap < 1:
            cap = 1
        if cap < hi:
            hi = cap
    return lo, hi


def _search_a(state: tuple, m: int, k: int, table: dict, alpha: int, beta: int,
              stats: _Stats) -> int:
    """Fail-soft value of a non-terminal A-game position.

    Returns v with: v exact if alpha < v < beta; true value <= v if
    v <= alpha; true value >= v if v >= beta.
    """
    stats.tick()
    t = len(state)
    rot = tuple(t + 1 - r for r in reversed(state))
    key = state if state <= rot else rot
    ent = table.get(key)
    if ent is None:
        lo, hi = _window_a(t, m, k)
    else:
        lo, hi = ent
    if lo == hi:
        return lo
    if lo >= beta:
        return lo
    if hi <= alpha:
        return hi

    ranks = state
    # Longest run ending/starting at each point, for O(t) child checks.
    u_end = [1] * t
    d_end = [1] * t
    u_start = [1] * t
    d_start = [1] * t
    for i in range(t):
        ri = ranks[i]
        for j in range(i):
            if ranks[j] < ri:
                if u_end[j] >= u_end[i]:
                    u_end[i] = u_end[j] + 1
            elif d_end[j] >= d_end[i]:
                d_end[i] = d_end[j] + 1
    for i in range(t - 1, -1, -1):
        ri = ranks[i]
        for j in range(i + 1, t):
            if ranks[j] > ri:
                if u_start[j] >= u_start[i]:
                    u_start[i] = u_start[j] + 1
            elif d_start[j] >= d_start[i]:
                d_start[i] = d_start[j] + 1

    best = hi + 1
    minlb = None
    half = t // 2
    cols = sorted(range(t + 1), key=lambda c: (abs(c - half), c))
    for c in cols:
        cap = best if best < beta else beta
        col_beta = cap - 1
        cur = 0
        pruned = False
        # Rows that mimic a neighbour are usually B's strongest replies.
        first: list[int] = []
        if c < t:
            first.append(ranks[c])
        if c > 0:
            r2 = ranks[c - 1] - 1
            if r2 not in first:
                first.append(r2)
        rows = first + [r for r in range(t + 1) if r not in first]
        for r in rows:
            if cur >= col_beta:
                pruned = True
                break
            up = 1
            down = 1
            for i in range(c):
                if ranks[i] <= r:
                    if u_end[i] >= up:
                        up = u_end[i] + 1
                else:
                    if d_end[i] >= down:
                        down = d_end[i] + 1
            upt = up
            downt = down
            for j in range(c, t):
                if ranks[j] > r:
                    if u_start[j] + upt > up:
                        up = u_start[j] + upt
                else:
                    if d_start[j] + downt > down:
                        down = d_start[j] + downt
            if up >= m or down >= k:
                continue  # terminal child, value 0
            nr = r + 1
            child = tuple(x + 1 if x >= nr else x for x in ranks[:c]) + (nr,) + tuple(
                x + 1 if x >= nr else x for x in ranks[c:])
            ca = alpha - 1
            if cur > ca:
                ca = cur
            v = _search_a(child, m, k, table, ca, col_beta, stats)
            if v > cur:
                cur = v
        if pruned or 1 + cur >= beta:
            lb = 1 + cur
            if minlb is None or lb < minlb:
                minlb = lb
            continue
        cand = 1 + cur
        if cand < best:
            best = cand
            if best <= alpha or best <= lo:
                break

    if best >= beta:
        res = minlb if minlb is not None else best
        if res > lo:
            table[key] = (res, hi)
        return res
    if best <= alpha:
        if best < hi:
            table[key] = (lo, best)
        return best
    table[key] = (best, best)
    return best


# ---------------------------------------------------------------------------
# B-game search
# ---------------------------------------------------------------------------

def _window_b(t: int, m: int, k: int) -> tuple[int, int]:
    lo = m - t
    if lo < 1:
        lo = 1
    hi = (m - 1) * (k - 1) + 1 - t
    return lo, hi


def _search_b(state: tuple, m: int, k: int, table: dict, alpha: int, beta: int,
              stats: _Stats) -> int:
    """Fail-soft value of a non-terminal B-game position (tier sequence)."""
    stats.tick()
    t = len(state)
    rot = tuple(k - v for v in reversed(state))
    key = state if state <= rot else rot
    ent = table.get(key)
    if ent is None:
        lo, hi = _window_b(t, m, k)
    else:
        lo, hi = ent
    if lo == hi:
        return lo
    if lo >= beta:
        return lo
    if hi <= alpha:
        return hi

    tiers = state
    # Longest weak up-run ending/starting at each point.
    u_end = [1] * t
    u_start = [1] * t
    for i in range(t):
        vi = tiers[i]
        for j in range(i):
            if tiers[j] <= vi and u_end[j] >= u_end[i]:
                u_end[i] = u_end[j] + 1
    for i in range(t - 1, -1, -1):
        vi = tiers[i]
        for j in range(i + 1, t):
            if tiers[j] >= vi and u_start[j] >= u_start[i]:
                u_start[i] = u_start[j] + 1

    best = hi + 1
    minlb = None
    half = t // 2
    cols = sorted(range(t + 1), key=lambda c: (abs(c - half), c))
    for c in cols:
        cap = best if best < beta else beta
        col_beta = cap - 1
        cur = 0
        pruned = False
        for v in range(1, k):
            if cur >= col_beta:
                pruned = True
                break
            up = 1
            for i in range(c):
                if tiers[i] <= v and u_end[i] >= up:
                    up = u_end[i] + 1
            upt = up
            for j in range(c, t):
                if tiers[j] >= v and u_start[j] + upt > up:
                    up = u_start[j] + upt
            if up >= m:
                continue  # terminal child
            child = tiers[:c] + (v,) + tiers[c:]
            ca = alpha - 1
            if cur > ca:
                ca = cur
            val = _search_b(child, m, k, table, ca, col_beta, stats)
            if val > cur:
                cur = val
        if pruned or 1 + cur >= beta:
            lb = 1 + cur
            if minlb is None or lb < minlb:
                minlb = lb
            continue
        cand = 1 + cur
        if cand < best:
            best = cand
            if best <= alpha or best <= lo:
                break

    if best >= beta:
        res = minlb if minlb is not None else best
        if res > lo:
            table[key] = (res, hi)
        return res
    if best <= alpha:
        if best < hi:
            table[key] = (lo, best)
        return best
    table[key] = (best, best)
    return best


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def value_a(state: RankedState, m: int, k: int, table: Optional[dict] = None) -> int:
    """Exact turns to termination from an A-game position under optimal play."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    if is_terminal(state, m, k) is not None:
        return 0
    if table is None:
        table = {}
    lo, hi = _window_a(state.t, m, k)
    stats = _Stats(None, None)
    return _search_a(state.ranks, m, k, table, lo - 1, hi + 1, stats)


def value_b(state: TieredState, m: int, k: int, table: Optional[dict] = None) -> int:
    """Exact turns to termination from a B-game position under optimal play."""
    if m < 1 or k < 2:
        raise ValueError("need m >= 1 and k >= 2")
    if is_terminal(state, m, k) is not None:
        return 0
    if table is None:
        table = {}
    lo, hi = _window_b(state.t, m, k)
    stats = _Stats(None, None)
    return _search_b(state.tiers, m, k, table, lo - 1, hi + 1, stats)


def value_within_budget(state: RankedState | TieredState, m: int, k: int,
                        node_budget: int,
                        table: Optional[dict] = None) -> Optional[int]:
    """Exact position value, or None once the node budget runs out."""
    if is_terminal(state, m, k) is not None:
        return 0
    if table is None:
        table = {}
    stats = _Stats(None, node_budget)
    try:
        if isinstance(state, TieredState):
            lo, hi = _window_b(state.t, m, k)
            return _search_b(state.tiers, m, k, table, lo - 1, hi + 1, stats)
        lo, hi = _window_a(state.t, m, k)
        return _search_a(state.ranks, m, k, table, lo - 1, hi + 1, stats)
    except _OutOfBudget:
        return None


def _solve(game: str, m: int, k: int, budget_seconds: Optional[float],
           node_budget: Optional[int], table: Optional[dict],
           cache_dir: Optional[str]) -> SolveReport:
    if game not in ("a", "b"):
        raise ValueError("game must be 'a' or 'b'")
    start = time.monotonic()
    if table is None:
        table = {}
        if cache_dir:
            path = cache_path(cache_dir, game, m, k)
            if os.path.exists(path):
                table.update(load_table(path, game, m, k))

    if game == "a":
        empty: RankedState | TieredState = RankedState()
        search, window = _search_a, _window_a
    else:
        empty = TieredState((), k)
        search, window = _search_b, _window_b

    if is_terminal(empty, m, k) is not None:
        return SolveReport(game, m, k, 0, 0, 0, 0.0)

    lo, hi = window(0, m, k)
    deadline = start + budget_seconds if budget_seconds is not None else None
    stats = _Stats(deadline, node_budget)
    try:
        # Deepen the certified lower bound; each failed test raises it, the
        # first passed test pins the value.
        while lo < hi:
            v = search((), m, k, table, lo, lo + 1, stats)
            if v <= lo:
                hi = v
            else:
                lo = v
    except _OutOfBudget:
        pass
    finally:
        if cache_dir:
            save_table(cache_path(cache_dir, game, m, k), game, m, k, table)
    return SolveReport(game, m, k, lo, hi, stats.nodes, time.monotonic() - start)


def solve(game: str, m: int, k: int, budget_seconds: Optional[float] = None,
          node_budget: Optional[int] = None, table: Optional[dict] = None,
          cache_dir: Optional[str] = None) -> SolveReport:
    """Solve from the empty position, honouring an optional budget.

    The report always carries certified bounds; ``value`` raises
    :class:`BudgetExceeded` when they have not met."""
    return _solve(game, m, k, budget_seconds, node_budget, table, cache_dir)


def solve_eso(m: int, k: int, table: Optional[dict] = None) -> GameValue:
    """Exact ESO(m,k): optimal-play length of the A-game from empty."""
    return GameValue(solve("a", m, k, table=table).value)


def solve_b(m: int, k: int, table: Optional[dict] = None) -> GameValue:
    """Exact B(m,k): optimal-play length of the tiered game from empty."""
    return GameValue(solve("b", m, k, table=table).value)


def best_a_move(state: RankedState | TieredState, m: int, k: int,
                table: Optional[dict] = None) -> int:
    """A column achieving the minimax value; smallest index on ties."""
    if is_terminal(state, m, k) is not None:
        raise ValueError("no moves from a terminal state")
    if table is None:
        table = {}
    tiered = isinstance(state, TieredState)
    value_fn = value_b if tiered else value_a
    target = value_fn(state, m, k, table)  # type: ignore[arg-type]
    for c in range(state.t + 1):
        replies = range(1, k) if tiered else range(state.t + 1)
        worst = 0
        for r in replies:
            child = state.insert(c, r)
            v = 0 if is_terminal(child, m, k) else value_fn(child, m, k, table)  # type: ignore[arg-type]
            worst = max(worst, v)
        if 1 + worst == target:
            return c
    raise AssertionError("no column achieves the minimax value")


def best_b_reply(state: RankedState | TieredState, column: int, m: int, k: int,
                 table: Optional[dict] = None) -> int:
    """The row (or tier) maximising the value after A played ``column``;
    smallest index on ties."""
    if table is None:
        table = {}
    tiered = isinstance(state, TieredState)
    value_fn = value_b if tiered else value_a
    replies = range(1, k) if tiered else range(state.t + 1)
    best_r = None
    best_v = -1
    for r in replies:
        child = state.insert(column, r)
        v = 0 if is_terminal(child, m, k) else value_fn(child, m, k, table)  # type: ignore[arg-type]
        if v > best_v:
            best_v = v
            best_r = r
    assert best_r is not None
    return best_r


# ---------------------------------------------------------------------------
# On-disk memo cache: "ESO1", little-endian throughout
# ---------------------------------------------------------------------------
#
# Layout: magic (4s) | version (B) | game (B: 0=A, 1=B) | m (<H) | k (<H)
# | count (<I) | count records of: t (B), t value bytes, lo (<h), hi (<h).

def cache_path(cache_dir: str, game: str, m: int, k: int) -> str:
    return os.path.join(cache_dir, f"eso-{game}-{m}-{k}.memo")


def save_table(path: str, game: str, m: int, k: int, table: dict) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<BBHHI", CACHE_VERSION, 0 if game == "a" else 1,
                             m, k, len(table)))
        for key, (lo, hi) in table.items():
            fh.write(struct.pack("<B", len(key)))
            fh.write(bytes(key))
            fh.write(struct.pack("<hh", lo, hi))


def load_table(path: str, game: str, m: int, k: int) -> dict:
    with open(path, "rb") as fh:
        if fh.read(4) != CACHE_MAGIC:
            raise ValueError(f"{path}: not a memo cache file")
        version, game_byte, fm, fk, count = struct.unpack("<BBHHI", fh.read(10))
        if version != CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        if (game_byte, fm, fk) != (0 if game == "a" else 1, m, k):
            raise ValueError(f"{path}: cache is for a different game instance")
        table = {}
        for _ in range(count):
            (t,) = struct.unpack("<B", fh.read(1))
            key = tuple(fh.read(t))
            lo, hi = struct.unpack("<hh", fh.read(4))
            table[key] = (lo, hi)
        return table
