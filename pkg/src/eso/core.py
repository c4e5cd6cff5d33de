"""Rank-based model of the on-line monotone-subsequence game.

Positions are order types: only the relative x/y order of the placed points
matters, so a position is a permutation (A-game) or a tier sequence (B-game).
Player A picks a column (a gap between existing x-values), player B picks a
row (a gap between existing y-values) or a tier.  The game ends as soon as
the points contain an m-up-run (weakly increasing in the tiered game,
strictly increasing in the rank game where all y-values are distinct) or a
k-down-run (strictly decreasing).

Column and row indices are always gap indices 0..t, where t is the number of
points on the board: column 0 is left of everything, column t right of
everything, and likewise for rows.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence


class TerminationCause(Enum):
    UP_RUN = "up-run"
    DOWN_RUN = "down-run"


class StrategyError(Exception):
    """A strategy was driven outside its contract (bad entry structure or a
    reply it proves impossible in a live game)."""


# ---------------------------------------------------------------------------
# Run statistics
# ---------------------------------------------------------------------------

def longest_up_run(values: Sequence[int], ties_extend: bool = False) -> int:
    """Length of the longest increasing subsequence of ``values``.

    With ``ties_extend`` the subsequence may be weakly increasing (equal
    neighbours allowed), which is the reading used for tier sequences.
    Patience sorting, O(t log t).
    """
    piles: list[int] = []
    locate = bisect_right if ties_extend else bisect_left
    for v in values:
        i = locate(piles, v)
        if i == len(piles):
            piles.append(v)
        else:
            piles[i] = v
    return len(piles)


def longest_down_run(values: Sequence[int]) -> int:
    """Length of the longest strictly decreasing subsequence of ``values``.

    Equal values never extend a down-run.
    """
    piles: list[int] = []
    for v in values:
        # Strictly decreasing subsequences of the input are strictly
        # increasing subsequences of the negated input.
        i = bisect_left(piles, -v)
        if i == len(piles):
            piles.append(-v)
        else:
            piles[i] = -v
    return len(piles)


# ---------------------------------------------------------------------------
# Positions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RankedState:
    """An A-game position: each point's y-rank listed in x-order.

    ``ranks`` is a permutation of 1..t.  The empty board is ``RankedState()``.
    """

    ranks: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        t = len(self.ranks)
        if sorted(self.ranks) != list(range(1, t + 1)):
            raise ValueError(f"ranks must be a permutation of 1..{t}: {self.ranks}")

    @property
    def t(self) -> int:
        return len(self.ranks)

    def insert(self, column: int, row: int) -> "RankedState":
        """Place a point between x-neighbours at ``column`` with y strictly
        between rank ``row`` and rank ``row + 1`` (0 = below all, t = above
        all).  Pre-existing relative order is preserved."""
        t = len(self.ranks)
        if not 0 <= column <= t:
            raise ValueError(f"column {column} out of range 0..{t}")
        if not 0 <= row <= t:
            raise ValueError(f"row {row} out of range 0..{t}")
        new_rank = row + 1
        bumped = tuple(r + 1 if r >= new_rank else r for r in self.ranks)
        return RankedState(bumped[:column] + (new_rank,) + bumped[column:])

    @classmethod
    def from_points(cls, points: Iterable[tuple[float, float]]) -> "RankedState":
        """Build the order type of a set of points with distinct coordinates."""
        pts = list(points)
        xs = sorted(p[0] for p in pts)
        ys = sorted(p[1] for p in pts)
        if len(set(xs)) != len(pts) or len(set(ys)) != len(pts):
            raise ValueError("points must have distinct x and distinct y values")
        by_x = sorted(pts)
        return cls(tuple(ys.index(p[1]) + 1 for p in by_x))

    def rotate180(self) -> "RankedState":
        """Image under the 180-degree board rotation (preserves run lengths)."""
        t = len(self.ranks)
        return RankedState(tuple(t + 1 - r for r in reversed(self.ranks)))


@dataclass(frozen=True)
class TieredState:
    """A B-game position: tier values in 1..k-1 listed in x-order."""

    tiers: tuple[int, ...] = ()
    k: int = 2

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("tier games need k >= 2")
        if any(not 1 <= v <= self.k - 1 for v in self.tiers):
            raise ValueError(f"tiers must lie in 1..{self.k - 1}: {self.tiers}")

    @property
    def t(self) -> int:
        return len(self.tiers)

    def insert(self, column: int, tier: int) -> "TieredState":
        t = len(self.tiers)
        if not 0 <= column <= t:
            raise ValueError(f"column {column} out of range 0..{t}")
        if not 1 <= tier <= self.k - 1:
            raise ValueError(f"tier {tier} out of range 1..{self.k - 1}")
        return TieredState(self.tiers[:column] + (tier,) + self.tiers[column:], self.k)


State = RankedState | TieredState


def _values(state: State) -> tuple[int, ...]:
    return state.ranks if isinstance(state, RankedState) else state.tiers


def is_terminal(state: State, m: int, k: int) -> Optional[TerminationCause]:
    """Up-runs win checks use weak runs for tier sequences (repeats extend)
    and strict runs for rank sequences, where ranks are distinct anyway."""
    values = _values(state)
    ties = isinstance(state, TieredState)
    if longest_up_run(values, ties_extend=ties) >= m:
        return TerminationCause.UP_RUN
    if longest_down_run(values) >= k:
        return TerminationCause.DOWN_RUN
    return None


def quadrant_counts(state: State, index: int) -> tuple[int, int, int, int]:
    """Counts (ne, nw, sw, se) of points strictly inside each open quadrant
    of the indexed point.  Ties (equal tiers) fall in no quadrant."""
    values = _values(state)
    if not 0 <= index < len(values):
        raise ValueError(f"index {index} out of range")
    v = values[index]
    ne = nw = sw = se = 0
    for i, u in enumerate(values):
        if i < index:
            if u > v:
                nw += 1
            elif u < v:
                sw += 1
        elif i > index:
            if u > v:
                ne += 1
            elif u < v:
                se += 1
    return ne, nw, sw, se


def separation(state: State, c1: int, c2: int) -> int:
    """Number of points strictly between two column positions."""
    t = len(_values(state))
    for c in (c1, c2):
        if not 0 <= c <= t:
            raise ValueError(f"column {c} out of range 0..{t}")
    return abs(c2 - c1)


# ---------------------------------------------------------------------------
# Labels and the constructive endgame move
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Label:
    """(i, j): longest up-run / down-run lengths having the point leftmost."""

    i: int
    j: int


def labels(state: RankedState) -> list[Label]:
    ranks = state.ranks
    t = len(ranks)
    up = [1] * t
    down = [1] * t
    for p in range(t - 1, -1, -1):
        for q in range(p + 1, t):
            if ranks[q] > ranks[p] and up[q] + 1 > up[p]:
                up[p] = up[q] + 1
            if ranks[q] < ranks[p] and down[q] + 1 > down[p]:
                down[p] = down[q] + 1
    return [Label(up[p], down[p]) for p in range(t)]


def endgame_move(state: RankedState, m: int, k: int) -> int:
    """The forcing column from a non-terminal position of (m-1)(k-1)-1
    points: every row reply to it completes an m-up-run or a k-down-run.

    If some label other than (m-1, k-1) is missing, play immediately left of
    the point labelled (m-1, k-1); otherwise play immediately right of the
    point labelled (1, 1).
    """
    if m < 3 or k < 3:
        raise ValueError("the forcing move needs m >= 3 and k >= 3")
    expected = (m - 1) * (k - 1) - 1
    if state.t != expected:
        raise ValueError(f"state must have exactly {expected} points, has {state.t}")
    if is_terminal(state, m, k) is not None:
        raise ValueError("state is already terminal")
    labs = labels(state)
    present = {(lab.i, lab.j) for lab in labs}
    if (m - 1, k - 1) in present:
        return next(p for p, lab in enumerate(labs) if (lab.i, lab.j) == (m - 1, k - 1))
    # Missing label is (m-1, k-1); the point labelled (1, 1) exists and is
    # the right-most point of both a (k-1)-down-run and an (m-1)-up-run.
    q = next(p for p, lab in enumerate(labs) if (lab.i, lab.j) == (1, 1))
    return q + 1


# ---------------------------------------------------------------------------
# Mutable boards with stable point ids
# ---------------------------------------------------------------------------

class Board:
    """A-game board that keeps a stable id per point (the turn number).

    Strategies hold id references across insertions, so the board maintains
    the x-order and y-order of ids and answers order queries.  All indices
    are O(t) lookups, which is fine at the desk scales the strategies run at.
    """

    def __init__(self) -> None:
        self.xorder: list[int] = []
        self.yorder: list[int] = []
        self._next_id = 1

    def __deepcopy__(self, memo) -> "Board":
        clone = Board.__new__(Board)
        clone.xorder = self.xorder[:]
        clone.yorder = self.yorder[:]
        clone._next_id = self._next_id
        return clone

    @property
    def t(self) -> int:
        return len(self.xorder)

    def insert(self, column: int, row: int) -> int:
        t = len(self.xorder)
        if not (0 <= column <= t and 0 <= row <= t):
            raise ValueError(f"move ({column}, {row}) out of range 0..{t}")
        pid = self._next_id
        self._next_id += 1
        self.xorder.insert(column, pid)
        self.yorder.insert(row, pid)
        return pid

    def x_index(self, pid: int) -> int:
        return self.xorder.index(pid)

    def y_index(self, pid: int) -> int:
        return self.yorder.index(pid)

    def ranks(self) -> RankedState:
        ypos = {pid: i + 1 for i, pid in enumerate(self.yorder)}
        return RankedState(tuple(ypos[pid] for pid in self.xorder))

    def is_terminal(self, m: int, k: int) -> Optional[TerminationCause]:
        return is_terminal(self.ranks(), m, k)

    # Order predicates between two points.
    def left_of(self, p: int, q: int) -> bool:
        return self.x_index(p) < self.x_index(q)

    def below(self, p: int, q: int) -> bool:
        return self.y_index(p) < self.y_index(q)

    def ne_of(self, p: int, q: int) -> bool:
        """Is p strictly north-east of q?"""
        return self.x_index(p) > self.x_index(q) and self.y_index(p) > self.y_index(q)

    def nw_of(self, p: int, q: int) -> bool:
        return self.x_index(p) < self.x_index(q) and self.y_index(p) > self.y_index(q)

    def sw_of(self, p: int, q: int) -> bool:
        return self.x_index(p) < self.x_index(q) and self.y_index(p) < self.y_index(q)

    def se_of(self, p: int, q: int) -> bool:
        return self.x_index(p) > self.x_index(q) and self.y_index(p) < self.y_index(q)


class BoardView:
    """A board, optionally seen rotated by 180 degrees.

    Rotation preserves up-runs and down-runs and swaps left/right and
    above/below, so a strategy proved for one orientation can run on the
    other by looking through a flipped view and mapping its columns back.
    """

    def __init__(self, board: Board, flipped: bool = False) -> None:
        self.board = board
        self.flipped = flipped

    @property
    def t(self) -> int:
        return self.board.t

    def x_index(self, pid: int) -> int:
        i = self.board.x_index(pid)
        return self.board.t - 1 - i if self.flipped else i

    def y_index(self, pid: int) -> int:
        i = self.board.y_index(pid)
        return self.board.t - 1 - i if self.flipped else i

    def to_board_column(self, column: int) -> int:
        return self.board.t - column if self.flipped else column

    def ne_of(self, p: int, q: int) -> bool:
        return self.x_index(p) > self.x_index(q) and self.y_index(p) > self.y_index(q)

    def nw_of(self, p: int, q: int) -> bool:
        return self.x_index(p) < self.x_index(q) and self.y_index(p) > self.y_index(q)

    def sw_of(self, p: int, q: int) -> bool:
        return self.x_index(p) < self.x_index(q) and self.y_index(p) < self.y_index(q)

    def se_of(self, p: int, q: int) -> bool:
        return self.x_index(p) > self.x_index(q) and self.y_index(p) < self.y_index(q)


class TierBoard:
    """B-game board: stable ids in x-order plus the tier of each point."""

    def __init__(self, k: int) -> None:
        if k < 2:
            raise ValueError("tier games need k >= 2")
        self.k = k
        self.xorder: list[int] = []
        self.tier_of: dict[int, int] = {}
        self._next_id = 1

    @property
    def t(self) -> int:
        return len(self.xorder)

    def insert(self, column: int, tier: int) -> int:
        t = len(self.xorder)
        if not 0 <= column <= t:
            raise ValueError(f"column {column} out of range 0..{t}")
        if not 1 <= tier <= self.k - 1:
            raise ValueError(f"tier {tier} out of range 1..{self.k - 1}")
        pid = self._next_id
        self._next_id += 1
        self.xorder.insert(column, pid)
        self.tier_of[pid] = tier
        return pid

    def tiers(self) -> TieredState:
        return TieredState(tuple(self.tier_of[p] for p in self.xorder), self.k)

    def is_terminal(self, m: int) -> Optional[TerminationCause]:
        return is_terminal(self.tiers(), m, self.k)

    def separation_from_column(self, column: int, index: int) -> int:
        """Points strictly between the gap ``column`` and the point at
        x-position ``index``."""
        if index >= column:
            return index - column
        return column - index - 1


def moves_from_points(points: Sequence[tuple[float, float]]) -> list[tuple[int, int]]:
    """Convert a coordinate trace (in turn order) into (column, row) gap
    indices, the form transcripts store."""
    moves = []
    xs: list[float] = []
    ys: list[float] = []
    for x, y in points:
        moves.append((bisect_left(xs, x), bisect_left(ys, y)))
        insort(xs, x)
        insort(ys, y)
    return moves
