"""Player-B strategies: fracturing for the k = 3 rank game, tier-separation
and boundary-tier play for the tiered game, and the non-extending baseline.

The fracturing strategy keeps a central up-run C on which it answers columns
consistently, and answers columns near the ends of the active x-range by
jumping w-i+1 run-notches away, creating a wastebin: a frozen x-interval
whose future replies stay inside their own thin y-band.  The bands are
stacked so that the wastebins together form a second up-run, hence the game
can never end with a 3-down-run while B follows the strategy.

All row choices are made at order-type level: the strategy picks the unique
board row consistent with the construction rather than a real number.
``respond`` is pure (proposes a row); ``observe`` ingests the placed point
and performs the bookkeeping, so recorded games replay exactly.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Optional

from eso.core import Board, StrategyError, TierBoard

_LO = "lo"
_HI = "hi"


def _icbrt(n: int) -> int:
    """Largest integer c with c**3 <= n."""
    if n < 0:
        raise ValueError("needs a nonnegative integer")
    c = round(n ** (1 / 3))
    while c ** 3 > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


def fracturing_width(m: int) -> int:
    """Width parameter floor((6m)^(1/3)) - 1 used for the survival bound."""
    if m < 2:
        raise ValueError("fracturing needs m >= 2")
    return _icbrt(6 * m) - 1


def fracturing_guarantee(m: int) -> int:
    """Certified minimum game length m + w against any column player."""
    w = fracturing_width(m)
    if not (w + 1) ** 3 - (w + 1) < 6 * m:
        raise AssertionError("width precondition violated")
    return m + w


class FracturingStrategy:
    """Row player for the k = 3 rank game guaranteeing m + w turns."""

    def __init__(self, w: int) -> None:
        if w < 1:
            raise ValueError("width parameter must be positive")
        self.w = w
        self.i = 1
        self.a = _LO
        self.ap = _LO
        self.app = _LO
        self.bpp = _HI
        self.bp = _HI
        self.b = _HI
        self.c_ref = _LO
        self.d_ref = _HI
        self.c_all: list[int] = []   # every central point, x-sorted
        self.c_cur: list[int] = []   # active central segment, x-sorted
        self.bins_left: list[dict] = []
        self.bins_right: list[dict] = []
        self.banked: list[tuple[int, tuple[int, ...], str]] = []
        self.seg_def_size = 0        # |C_i| when the current era began
        self.literal_cap_breaches = 0

    @classmethod
    def for_game(cls, m: int) -> "FracturingStrategy":
        return cls(fracturing_width(m))

    def z(self, j: int) -> int:
        if 1 <= j <= self.w - 1:
            n = self.w - j
            return n * (n + 1) // 2 + 1
        return 1

    def digest(self) -> tuple:
        return (
            self.i, self.a, self.ap, self.app, self.bpp, self.bp, self.b,
            self.c_ref, self.d_ref, tuple(self.c_all), tuple(self.c_cur),
            tuple((b["refL"], b["refR"], tuple(b["members"])) for b in self.bins_left),
            tuple((b["refL"], b["refR"], tuple(b["members"])) for b in self.bins_right),
        )

    def __deepcopy__(self, memo) -> "FracturingStrategy":
        clone = FracturingStrategy.__new__(FracturingStrategy)
        clone.__dict__.update(self.__dict__)
        clone.c_all = self.c_all[:]
        clone.c_cur = self.c_cur[:]
        clone.banked = self.banked[:]
        clone.bins_left = [dict(b, members=b["members"][:]) for b in self.bins_left]
        clone.bins_right = [dict(b, members=b["members"][:]) for b in self.bins_right]
        return clone

    # -- geometric helpers ---------------------------------------------------

    def _xpos(self, board: Board, ref) -> float:
        if ref is _LO:
            return -1.0
        if ref is _HI:
            return float(board.t)
        return float(board.x_index(ref))

    def _gap_min(self, board: Board, ref) -> int:
        """Lowest gap index strictly right of ref."""
        if ref is _LO:
            return 0
        if ref is _HI:
            return board.t + 1
        return board.x_index(ref) + 1

    def _gap_max(self, board: Board, ref) -> int:
        """Highest gap index strictly left of ref."""
        if ref is _HI:
            return board.t
        if ref is _LO:
            return -1
        return board.x_index(ref)

    def _col_in(self, board: Board, refL, refR, col: int) -> bool:
        return self._gap_min(board, refL) <= col <= self._gap_max(board, refR)

    def _pt_in(self, board: Board, refL, refR, pid: int) -> bool:
        x = board.x_index(pid)
        return self._xpos(board, refL) < x < self._xpos(board, refR)

    def _row_min(self, board: Board, ref) -> int:
        """Lowest row strictly above ref."""
        return 0 if ref is _LO else board.y_index(ref) + 1

    def _row_max(self, board: Board, ref) -> int:
        """Highest row strictly below ref."""
        return board.t if ref is _HI else board.y_index(ref)

    def _ref_lt(self, board: Board, r1, r2) -> bool:
        if r1 is _LO:
            return r2 is not _LO
        if r1 is _HI:
            return False
        if r2 is _HI:
            return True
        if r2 is _LO:
            return False
        return board.x_index(r1) < board.x_index(r2)

    # -- row selection ---------------------------------------------------------

    def _central_neighbours(self, board: Board, col: int) -> tuple[int, Optional[int]]:
        """(index of rightmost central point left of col, or -1; ...)."""
        xs = [board.x_index(p) for p in self.c_all]
        return bisect_left(xs, col) - 1, None

    def _single_row(self, board: Board, lo_row: int, hi_row: int) -> int:
        if lo_row > hi_row:
            raise StrategyError("required row is empty (should be impossible)")
        if lo_row != hi_row:
            raise StrategyError("required row is ambiguous (bookkeeping bug)")
        return lo_row

    def _run_row(self, board: Board, col: int) -> int:
        """The unique row consistent with the central run, inside (c, d).

        Between two already-banked run points the band can exclude the run
        gap entirely (the interpolation is undefined there); the reply then
        extends the run unclamped, which keeps both partition classes
        up-runs."""
        base, _ = self._central_neighbours(board, col)
        lo_run = 0 if base < 0 else board.y_index(self.c_all[base]) + 1
        hi_run = (board.t if base + 1 >= len(self.c_all)
                  else board.y_index(self.c_all[base + 1]))
        lo_row = max(lo_run, self._row_min(board, self.c_ref))
        hi_row = min(hi_run, self._row_max(board, self.d_ref))
        if lo_row > hi_row:
            if lo_run > hi_run:
                raise StrategyError("central run admits no consistent row")
            return lo_run if base >= 0 else hi_run
        return self._single_row(board, lo_row, hi_row)

    def _shift_row(self, board: Board, col: int, n: int, up: bool) -> int:
        """The row n central-run notches above (or below) the consistent row.

        When the target row lies entirely outside the (c, d) band on the
        near side, the value clamps onto the band boundary (the row hugging
        the boundary point); crossing the far side is impossible while the
        construction is well-defined."""
        if n <= 0:
            return self._run_row(board, col)
        base, _ = self._central_neighbours(board, col)
        size = len(self.c_all)
        if up:
            lo_idx = base + n
            if lo_idx > size - 1:
                raise StrategyError("shifted row does not exist above the run")
            floor = self._row_min(board, self.c_ref)
            lo_row = board.y_index(self.c_all[lo_idx]) + 1
            hi_row = self._row_max(board, self.d_ref)
            if lo_row > hi_row:
                raise StrategyError("shifted row starts above the band")
            if lo_idx + 1 < size:
                hi_row = min(hi_row, board.y_index(self.c_all[lo_idx + 1]))
            if floor > hi_row:
                return floor  # clamp onto the band floor
            return self._single_row(board, max(lo_row, floor), hi_row)
        hi_idx = base - n + 1
        if hi_idx < 0:
            raise StrategyError("shifted row does not exist below the run")
        ceil = self._row_max(board, self.d_ref)
        hi_row = board.y_index(self.c_all[hi_idx])
        lo_row = self._row_min(board, self.c_ref)
        if hi_row < lo_row:
            raise StrategyError("shifted row ends below the band")
        if hi_idx - 1 >= 0:
            lo_row = max(lo_row, board.y_index(self.c_all[hi_idx - 1]) + 1)
        if ceil < lo_row:
            return ceil  # clamp onto the band ceiling
        return self._single_row(board, lo_row, min(hi_row, ceil))

    def _bin_for_column(self, board: Board, col: int) -> dict:
        for bin_ in self.bins_left + self.bins_right:
            if self._col_in(board, bin_["refL"], bin_["refR"], col):
                return bin_
        raise StrategyError("column outside every frozen wastebin interval")

    def _bin_row(self, board: Board, bin_: dict, col: int) -> int:
        members = sorted(bin_["members"], key=board.x_index)
        left = [p for p in members if board.x_index(p) < col]
        if left:
            return board.y_index(left[-1]) + 1
        right = [p for p in members if board.x_index(p) >= col]
        return board.y_index(right[0])

    # -- strategy interface ----------------------------------------------------

    def respond(self, board: Board, column: int) -> int:
        if self.a is not _LO and column <= self._gap_max(board, self.a):
            return self._bin_row(board, self._bin_for_column(board, column), column)
        if self.b is not _HI and column >= self._gap_min(board, self.b):
            return self._bin_row(board, self._bin_for_column(board, column), column)
        n = self.w - self.i + 1
        # Once the eras are exhausted (n <= 0) the shifted rows coincide
        # with the run row, so the fracture regions collapse into the
        # central one.
        if n >= 1 and self._col_in(board, self.a, self.app, column):
            return self._shift_row(board, column, n, up=True)
        if n >= 1 and self._col_in(board, self.bpp, self.b, column):
            return self._shift_row(board, column, n, up=False)
        return self._run_row(board, column)

    def observe(self, board: Board, q: int) -> None:
        if self.a is not _LO and board.x_index(q) < board.x_index(self.a):
            self._observe_bin(board, q)
            return
        if self.b is not _HI and board.x_index(q) > board.x_index(self.b):
            self._observe_bin(board, q)
            return
        if self._pt_in(board, self.a, self.app, q):
            if self._in_band(board, q):
                self._fracture(board, q, left=True)
            else:
                self._insort_run(board, q)  # extends the banked run part
            return
        if self._pt_in(board, self.bpp, self.b, q):
            if self._in_band(board, q):
                self._fracture(board, q, left=False)
            else:
                self._insort_run(board, q)
            return
        self._insort_run(board, q)
        self._insort_segment(board, q)
        self._refresh_segment(board)

    def _in_band(self, board: Board, q: int) -> bool:
        """Replies that fell back below (or above) the wastebin band extend
        the central run instead of fracturing."""
        if self.c_ref is not _LO and board.y_index(q) < board.y_index(self.c_ref):
            return False
        if self.d_ref is not _HI and board.y_index(q) > board.y_index(self.d_ref):
            return False
        return True

    def _observe_bin(self, board: Board, q: int) -> None:
        for side, bins in (("left", self.bins_left), ("right", self.bins_right)):
            for bin_ in bins:
                if self._pt_in(board, bin_["refL"], bin_["refR"], q):
                    bin_["members"].append(q)
                    if side == "left" and bin_ is self.bins_left[-1]:
                        if self.c_ref is _LO or board.y_index(q) > board.y_index(self.c_ref):
                            self.c_ref = q
                    if side == "right" and bin_ is self.bins_right[-1]:
                        if self.d_ref is _HI or board.y_index(q) < board.y_index(self.d_ref):
                            self.d_ref = q
                    return
        raise StrategyError("point landed outside every wastebin interval")

    def _insort_run(self, board: Board, q: int) -> None:
        xq = board.x_index(q)
        self.c_all.insert(bisect_left([board.x_index(p) for p in self.c_all], xq), q)

    def _insort_segment(self, board: Board, q: int) -> None:
        xq = board.x_index(q)
        self.c_cur.insert(bisect_left([board.x_index(p) for p in self.c_cur], xq), q)

    def _fracture(self, board: Board, q: int, left: bool) -> None:
        if self.i > self.w:
            # Exhausted eras answer with the plain run row, which has no
            # anchor diagonally below; the point opens a one-point wastebin
            # anchored at itself.
            l_pt = r_pt = q
        else:
            if left:
                anchor = [p for p in board.xorder if board.se_of(p, q)]
            else:
                anchor = [p for p in board.xorder if board.nw_of(p, q)]
            if not anchor:
                raise StrategyError("fracture without an anchoring run point")
            l_pt = min(anchor, key=board.x_index)
            r_pt = max(anchor, key=board.x_index)
        outer = (self._pt_in(board, self.a, self.ap, q) if left
                 else self._pt_in(board, self.bp, self.b, q))
        if left:
            self.bins_left.append({"refL": self.a, "refR": l_pt, "members": [q]})
            cut = board.x_index(r_pt)
            kept = [p for p in self.c_cur if board.x_index(p) > cut]
            bank = tuple(p for p in self.c_cur if board.x_index(p) <= cut)
            self.a, self.ap, self.c_ref = l_pt, r_pt, q
        else:
            self.bins_right.append({"refL": r_pt, "refR": self.b, "members": [q]})
            cut = board.x_index(l_pt)
            kept = [p for p in self.c_cur if board.x_index(p) < cut]
            bank = tuple(p for p in self.c_cur if board.x_index(p) >= cut)
            self.bp, self.b, self.d_ref = l_pt, r_pt, q
        self.banked.append((self.i, bank, "outer" if outer else "inner"))
        self.c_cur = kept
        self.i += 1
        self.seg_def_size = len(kept)
        self._refresh_segment(board)

    def _refresh_segment(self, board: Board) -> None:
        size = len(self.c_cur)
        z = self.z(self.i)
        self.app = self.c_cur[size - z] if size >= z else self.ap
        self.bpp = self.c_cur[z - 1] if size >= z else self.bp

    # -- invariant checker -------------------------------------------------

    def validate(self, board: Board) -> None:
        """Check the structural invariants the survival bound rests on;
        raises StrategyError at the first violation.

        The segment cap is enforced in its mechanism form: the active
        segment never grows beyond max(2z_i - 1, its size when the era
        began).  A fracture near the left edge of a full segment can define
        the next segment slightly above 2z-1, which the growth-stall rule
        then freezes; ``literal_cap_breaches`` counts those positions."""
        cap = 2 * self.z(self.i) - 1
        if len(self.c_cur) > max(cap, self.seg_def_size):
            raise StrategyError("active central segment grew past its cap")
        if len(self.c_cur) > cap:
            self.literal_cap_breaches += 1
        for era, bank, cls in self.banked:
            if era < self.w:
                limit = (self.w - era if cls == "outer"
                         else self.z(era) + self.w - era)
                if len(bank) > limit:
                    raise StrategyError("banked run exceeds its size bound")
        # The segment-floor clause, in the form the update rule supports:
        # whenever the inner boundary update found a qualifying point
        # (a' < a'' or b'' < b'), the segment holds at least z_i points.
        if self.i <= self.w and (self._ref_lt(board, self.ap, self.app)
                                 or self._ref_lt(board, self.bpp, self.bp)):
            if len(self.c_cur) < self.z(self.i):
                raise StrategyError("active central segment below z after update")
        if not self._row_min(board, self.c_ref) <= self._row_max(board, self.d_ref):
            raise StrategyError("band boundaries crossed")
        # The placed points split into the central up-run and the wastebins,
        # each an up-run, so no 3-down-run can exist.
        members = [p for bin_ in self.bins_left + self.bins_right
                   for p in bin_["members"]]
        if sorted(members + self.c_all) != sorted(board.xorder):
            raise StrategyError("central run and wastebins do not partition the board")
        for group in (self.c_all, members):
            run = sorted(group, key=board.x_index)
            for p1, p2 in zip(run, run[1:]):
                if not board.y_index(p1) < board.y_index(p2):
                    raise StrategyError("expected up-run is not an up-run")


# ---------------------------------------------------------------------------
# Tiered-game strategies
# ---------------------------------------------------------------------------

class TierSeparationStrategy:
    """Repeat a tier only when every earlier point of that tier is separated
    from the column by at least floor(k/2) - 1 points.  Any winning up-run
    then needs floor(k/2)(m-k+1) + k - 1 points in total."""

    def __init__(self, k: int) -> None:
        if k < 2:
            raise ValueError("needs k >= 2")
        self.k = k
        self.needed = k // 2 - 1

    @staticmethod
    def turn_bound(m: int, k: int) -> int:
        return (k // 2) * (m - k + 1) + k - 1

    def _admissible(self, board: TierBoard, column: int, tier: int) -> bool:
        for idx, pid in enumerate(board.xorder):
            if board.tier_of[pid] == tier:
                if board.separation_from_column(column, idx) < self.needed:
                    return False
        return True

    def respond(self, board: TierBoard, column: int) -> int:
        for tier in range(1, self.k):
            if self._admissible(board, column, tier):
                return tier
        raise StrategyError("no admissible tier (cannot happen)")

    def observe(self, board: TierBoard, q: int) -> None:
        pass

    def digest(self) -> tuple:
        return ()


class BoundaryTierStrategy:
    """Tier separation plus edge awareness: avoid low tiers far left and
    high tiers far right.  For odd k, plays the k-1 strategy (never the top
    tier)."""

    def __init__(self, k: int) -> None:
        if k < 4:
            raise ValueError("the boundary refinement needs k >= 4")
        self.k = k
        self.keff = k if k % 2 == 0 else k - 1
        self.half = self.keff // 2
        self.needed = self.half - 1

    @staticmethod
    def turn_bound(m: int, k: int) -> int:
        if k % 2 == 0:
            return (k // 2) * (m - k + 5) - 3
        return ((k - 1) // 2) * (m - k + 6) - 3

    def respond(self, board: TierBoard, column: int) -> int:
        left = column
        right = board.t - column
        lo = max(1, self.half - left)
        hi = min(self.keff - 1, self.half + right)
        for tier in range(lo, hi + 1):
            ok = True
            for idx, pid in enumerate(board.xorder):
                if board.tier_of[pid] == tier:
                    if board.separation_from_column(column, idx) < self.needed:
                        ok = False
                        break
            if ok:
                return tier
        raise StrategyError("no admissible boundary tier (cannot happen)")

    def observe(self, board: TierBoard, q: int) -> None:
        pass

    def digest(self) -> tuple:
        return ()


# ---------------------------------------------------------------------------
# Non-extending baseline for the rank game
# ---------------------------------------------------------------------------

class NonExtenderStrategy:
    """Mimic the nearest x-neighbour: just above the right neighbour, or
    just below the left one at the right edge.  The new point is then
    interchangeable with its neighbour in any up-run, so the longest up-run
    never grows."""

    def respond(self, board: Board, column: int) -> int:
        if board.t == 0:
            return 0
        if column < board.t:
            return board.y_index(board.xorder[column]) + 1
        return board.y_index(board.xorder[column - 1])

    def observe(self, board: Board, q: int) -> None:
        pass

    def digest(self) -> tuple:
        return ()
