"""Match runner, adversary generators and theorem-bound verification.

Strategies are referenced by id ("a:combined", "b:fracturing(3)", ...),
matches produce replayable transcripts, and the exhaustive adversary walks
every opponent reply against a fixed strategy, memoising on the pair
(position, strategy digest): the strategies are pure state machines, so two
histories reaching the same position with the same bookkeeping behave
identically from there on.
"""

from __future__ import annotations

import copy
import json
import random
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from eso.core import (
    Board,
    StrategyError,
    TerminationCause,
    TierBoard,
    is_terminal,
)
from eso.solver import best_a_move, best_b_reply, solve, value_a, value_b
from eso.strategy_a import (
    CombinedStrategy,
    EagerBarbStrategy,
    HalvingStrategy,
    MiddlingStrategy,
    combined_rounds,
)
from eso.strategy_b import (
    BoundaryTierStrategy,
    FracturingStrategy,
    NonExtenderStrategy,
    TierSeparationStrategy,
    fracturing_guarantee,
    fracturing_width,
)

TRANSCRIPT_VERSION = 1


# ---------------------------------------------------------------------------
# Strategy registry
# ---------------------------------------------------------------------------

class _OptimalA:
    def __init__(self, m: int, k: int):
        self.m, self.k = m, k
        self.table: dict = {}

    def next(self, board) -> int:
        state = board.ranks() if isinstance(board, Board) else board.tiers()
        return best_a_move(state, self.m, self.k, self.table)

    def observe(self, board, q: int) -> None:
        pass

    def digest(self) -> tuple:
        return ()


class _OptimalB:
    def __init__(self, m: int, k: int):
        self.m, self.k = m, k
        self.table: dict = {}

    def respond(self, board, column: int) -> int:
        state = board.ranks() if isinstance(board, Board) else board.tiers()
        return best_b_reply(state, column, self.m, self.k, self.table)

    def observe(self, board, q: int) -> None:
        pass

    def digest(self) -> tuple:
        return ()


class _RandomA:
    def __init__(self, seed: Optional[int]):
        self.rng = random.Random(seed)

    def next(self, board) -> int:
        return self.rng.randint(0, board.t)

    def observe(self, board, q: int) -> None:
        pass

    def digest(self) -> tuple:
        return self.rng.getstate()


class _RandomB:
    def __init__(self, seed: Optional[int], k: int):
        self.rng = random.Random(seed)
        self.k = k

    def respond(self, board, column: int) -> int:
        if isinstance(board, TierBoard):
            return self.rng.randint(1, self.k - 1)
        return self.rng.randint(0, board.t)

    def observe(self, board, q: int) -> None:
        pass

    def digest(self) -> tuple:
        return self.rng.getstate()


_ID_RE = re.compile(r"^([ab]):([a-z-]+)(?:\((\d*)\))?$")


def make_strategy(spec: str, m: int, k: int, game: str = "a",
                  seed: Optional[int] = None):
    """Instantiate a strategy from its id, e.g. "a:combined" or
    "b:fracturing(3)".  ``seed`` feeds the randomised ids unless the id
    carries an explicit parameter."""
    match = _ID_RE.match(spec)
    if not match:
        raise ValueError(f"malformed strategy id: {spec!r}")
    side, name, arg = match.groups()
    num = int(arg) if arg else None
    if side == "a":
        if name == "optimal":
            return _OptimalA(m, k)
        if name == "random":
            return _RandomA(num if num is not None else seed)
        if name == "combined":
            return CombinedStrategy(m)
        if name == "middling":
            return MiddlingStrategy()
        if name == "wbarb":
            return EagerBarbStrategy(m)
        if name == "halving":
            return HalvingStrategy(k)
    else:
        if name == "optimal":
            return _OptimalB(m, k)
        if name == "random":
            return _RandomB(num if num is not None else seed, k)
        if name == "nonextend":
            return NonExtenderStrategy()
        if name == "fracturing":
            return FracturingStrategy(num) if num else FracturingStrategy.for_game(m)
        if name == "tiers":
            return TierSeparationStrategy(k)
        if name == "boundary-tiers":
            return BoundaryTierStrategy(k)
    raise ValueError(f"unknown strategy id: {spec!r}")


# ---------------------------------------------------------------------------
# Transcripts
# ---------------------------------------------------------------------------

@dataclass
class Transcript:
    kind: str                      # "a" or "b"
    m: int
    k: int
    moves: list[tuple[int, int]]   # (column, row) or (column, tier)
    strategies: dict[str, str]
    seed: Optional[int]
    turns: int
    cause: str                     # "up-run", "down-run", "max-turns", "error"
    error: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps({
            "v": TRANSCRIPT_VERSION,
            "kind": self.kind,
            "m": self.m,
            "k": self.k,
            "moves": [list(mv) for mv in self.moves],
            "strategies": self.strategies,
            "seed": self.seed,
            "result": {"turns": self.turns, "cause": self.cause},
        })

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        data = json.loads(text)
        if data.get("v") != TRANSCRIPT_VERSION:
            raise ValueError(f"unsupported transcript version: {data.get('v')}")
        return cls(
            kind=data["kind"], m=data["m"], k=data["k"],
            moves=[tuple(mv) for mv in data["moves"]],
            strategies=dict(data.get("strategies", {})),
            seed=data.get("seed"),
            turns=data["result"]["turns"],
            cause=data["result"]["cause"],
        )


def new_board(kind: str, k: int):
    return Board() if kind == "a" else TierBoard(k)


def replay(transcript: Transcript):
    """Rebuild the final board from a transcript; raises if the recorded
    result does not match."""
    board = new_board(transcript.kind, transcript.k)
    cause = None
    for col, row in transcript.moves:
        board.insert(col, row)
        state = board.ranks() if transcript.kind == "a" else board.tiers()
        cause = is_terminal(state, transcript.m, transcript.k)
    expected = {None: "max-turns",
                TerminationCause.UP_RUN: "up-run",
                TerminationCause.DOWN_RUN: "down-run"}[cause]
    if transcript.cause not in (expected, "error"):
        raise ValueError("transcript result does not match its replay")
    return board


def run_match(a_id: str, b_id: str, m: int, k: int, kind: str = "a",
              seed: Optional[int] = None, max_turns: Optional[int] = None) -> Transcript:
    """Alternate the two strategies until the game ends.

    ``max_turns`` defaults to one past the classical pigeonhole bound, which
    an honest pair of strategies can never reach."""
    if max_turns is None:
        max_turns = (m - 1) * (k - 1) + 2
    a = make_strategy(a_id, m, k, kind, seed)
    b = make_strategy(b_id, m, k, kind, seed if seed is None else seed + 1)
    board = new_board(kind, k)
    moves: list[tuple[int, int]] = []
    cause = "max-turns"
    error = None
    try:
        for _ in range(max_turns):
            col = a.next(board)
            if not 0 <= col <= board.t:
                raise StrategyError(f"column {col} out of range")
            row = b.respond(board, col)
            pid = board.insert(col, row)
            moves.append((col, row))
            state = board.ranks() if kind == "a" else board.tiers()
            term = is_terminal(state, m, k)
            if term is not None:
                cause = term.value
                break
            a.observe(board, pid)
            b.observe(board, pid)
    except StrategyError as exc:
        cause = "error"
        error = str(exc)
    return Transcript(kind, m, k, moves, {"a": a_id, "b": b_id}, seed,
                      len(moves), cause, error)


# ---------------------------------------------------------------------------
# Adversaries
# ---------------------------------------------------------------------------

CheckFn = Callable[[Optional[object], object, Optional[TerminationCause]], None]


def exhaustive_adversary(factory: Callable[[], object], side: str, m: int,
                         k: int, kind: str = "a",
                         check: Optional[CheckFn] = None) -> int:
    """Worst-case game length of the fixed strategy over every opponent
    reply sequence: the opponent maximises against a fixed A, minimises
    against a fixed B.

    ``check`` is invoked after every completed turn with the (branched)
    fixed strategy, the board, and the termination cause (None while the
    game goes on).
    """
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    memo: dict = {}

    def state_of(board):
        return board.ranks().ranks if kind == "a" else board.tiers().tiers

    def replies(board) -> range:
        return range(1, k) if kind == "b" else range(board.t + 1)

    def step(board, strat, col, row):
        pid = board.insert(col, row)
        state = board.ranks() if kind == "a" else board.tiers()
        cause = is_terminal(state, m, k)
        if cause is None:
            strat.observe(board, pid)
            if check:
                check(strat, board, None)
            return strat, False
        if check:
            check(None, board, cause)
        return strat, True

    def rec_fixed_a(board, strat) -> int:
        key = (state_of(board), strat.digest())
        hit = memo.get(key)
        if hit is not None:
            return hit
        col = strat.next(board)
        worst = 0
        for row in replies(board):
            b2 = copy.deepcopy(board)
            s2 = copy.deepcopy(strat)
            s2, done = step(b2, s2, col, row)
            worst = max(worst, 1 if done else 1 + rec_fixed_a(b2, s2))
        memo[key] = worst
        return worst

    def rec_fixed_b(board, strat) -> int:
        key = (state_of(board), strat.digest())
        hit = memo.get(key)
        if hit is not None:
            return hit
        best: Optional[int] = None
        for col in range(board.t + 1):
            row = strat.respond(board, col)
            b2 = copy.deepcopy(board)
            s2 = copy.deepcopy(strat)
            s2, done = step(b2, s2, col, row)
            val = 1 if done else 1 + rec_fixed_b(b2, s2)
            if best is None or val < best:
                best = val
        memo[key] = best
        return best  # type: ignore[return-value]

    board = new_board(kind, k)
    strat = factory()
    if side == "a":
        return rec_fixed_a(board, strat)
    return rec_fixed_b(board, strat)


def random_match_lengths(fixed_id: str, side: str, m: int, k: int,
                         kind: str, seeds: range,
                         max_turns: Optional[int] = None) -> list[int]:
    """Game lengths of the fixed strategy against seeded random opponents."""
    out = []
    for seed in seeds:
        if side == "a":
            tr = run_match(fixed_id, "b:random", m, k, kind, seed=seed,
                           max_turns=max_turns)
        else:
            tr = run_match("a:random", fixed_id, m, k, kind, seed=seed,
                           max_turns=max_turns)
        if tr.cause == "error":
            raise StrategyError(f"{fixed_id} failed under seed {seed}: {tr.error}")
        if tr.cause == "max-turns":
            raise StrategyError(f"{fixed_id} hit the turn cap under seed {seed}")
        out.append(tr.turns)
    return out


# ---------------------------------------------------------------------------
# Bound reports
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    claim: str
    instances: str
    bound: str
    observed: str
    passed: bool
    seconds: float
    counterexample: Optional[str] = None

    def to_json(self) -> str:
        data = {
            "claim": self.claim,
            "instances": self.instances,
            "bound": self.bound,
            "observed": self.observed,
            "pass": self.passed,
            "runtime_s": round(self.seconds, 3),
        }
        if self.counterexample:
            data["counterexample"] = self.counterexample
        return json.dumps(data)


def _report(claim: str, instances: str, bound: str, started: float,
            passed: bool, observed: str, counterexample: Optional[str] = None
            ) -> BoundReport:
    return BoundReport(claim, instances, bound, observed, passed,
                       time.monotonic() - started, counterexample)


TABLE_SMALL = {
    (3, 3): 4, (4, 3): 6, (5, 3): 7, (6, 3): 9, (7, 3): 10,
    (4, 4): 8, (5, 4): 11,
}


def check_table(deep: bool = False) -> BoundReport:
    start = time.monotonic()
    failures = []
    observed = {}
    for m in range(1, 7):
        got = solve("a", m, 1).value
        observed[(m, 1)] = got
        if got != 1:
            failures.append(((m, 1), got))
    for m in range(2, 7):
        got = solve("a", m, 2).value
        observed[(m, 2)] = got
        if got != m:
            failures.append(((m, 2), got))
    cases = dict(TABLE_SMALL)
    if not deep:
        cases.pop((5, 4))
    for (m, k), want in sorted(cases.items()):
        got = solve("a", m, k).value
        observed[(m, k)] = got
        if got != want:
            failures.append(((m, k), got))
    return _report(
        "table-small-values",
        "degenerate rows plus " + ", ".join(map(str, sorted(cases))),
        "exact dynamic-programming table",
        start, not failures,
        "all match" if not failures else f"mismatches: {failures}",
        str(failures) if failures else None,
    )


def check_symmetry_monotonicity() -> BoundReport:
    start = time.monotonic()
    vals: dict[tuple[int, int], int] = {}
    pairs = [(2, 2), (3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (5, 3), (6, 3),
             (7, 3), (4, 4)]
    for m, k in pairs:
        vals[(m, k)] = solve("a", m, k).value
        vals[(k, m)] = solve("a", k, m).value
    bad = []
    for m, k in pairs:
        if vals[(m, k)] != vals[(k, m)]:
            bad.append(f"ESO({m},{k}) != ESO({k},{m})")
    for (m, k), v in list(vals.items()):
        for up in ((m + 1, k), (m, k + 1)):
            if up in vals and m >= 2 and k >= 2 and not vals[up] > v:
                bad.append(f"ESO{up} not above ESO({m},{k})")
        if m >= 3 and k >= 3 and not v <= (m - 1) * (k - 1):
            bad.append(f"ESO({m},{k}) above the constructive cap")
    return _report("symmetry-monotonicity", f"{len(vals)} solved pairs",
                   "reflection equality, strict growth in each argument",
                   start, not bad, "all hold" if not bad else "; ".join(bad),
                   "; ".join(bad) if bad else None)


def check_combined_bound(exhaustive_max_m: int = 7, random_max_m: int = 12,
                         seeds_per_m: int = 1000) -> BoundReport:
    start = time.monotonic()
    bad = []
    for m in range(3, exhaustive_max_m + 1):
        bound = m + combined_rounds(m) + 1
        worst = exhaustive_adversary(lambda m=m: CombinedStrategy(m), "a", m, 3)
        if worst > bound:
            bad.append(f"m={m} exhaustive worst {worst} > {bound}")
    for m in range(3, random_max_m + 1):
        bound = m + combined_rounds(m) + 1
        lengths = random_match_lengths("a:combined", "a", m, 3, "a",
                                       range(seeds_per_m),
                                       max_turns=bound + 1)
        if max(lengths) > bound:
            bad.append(f"m={m} randomized worst {max(lengths)} > {bound}")
    return _report(
        "combined-upper", f"exhaustive m<={exhaustive_max_m}, "
        f"{seeds_per_m} seeds for m<={random_max_m}",
        "m+T+1 turns", start, not bad,
        "within bound everywhere" if not bad else "; ".join(bad),
        "; ".join(bad) if bad else None)


def fracturing_check(strat: Optional[object], board, cause) -> None:
    if cause is TerminationCause.DOWN_RUN:
        raise StrategyError("fracturing lost to a 3-down-run")
    if strat is not None:
        strat.validate(board)


def check_fracturing_bound(exhaustive_max_m: int = 7, random_max_m: int = 12,
                           seeds_per_m: int = 1000) -> BoundReport:
    start = time.monotonic()
    bad = []
    for m in range(3, exhaustive_max_m + 1):
        bound = fracturing_guarantee(m)
        worst = exhaustive_adversary(
            lambda m=m: FracturingStrategy.for_game(m), "b", m, 3,
            check=fracturing_check)
        if worst < bound:
            bad.append(f"m={m} exhaustive worst {worst} < {bound}")
    for m in range(3, random_max_m + 1):
        bound = fracturing_guarantee(m)
        lengths = random_match_lengths("b:fracturing", "b", m, 3, "a",
                                       range(seeds_per_m))
        if min(lengths) < bound:
            bad.append(f"m={m} randomized worst {min(lengths)} < {bound}")
    return _report(
        "fracturing-lower", f"exhaustive m<={exhaustive_max_m}, "
        f"{seeds_per_m} seeds for m<={random_max_m}",
        "survives to m+w, never loses to a 3-down-run", start, not bad,
        "bound holds everywhere" if not bad else "; ".join(bad),
        "; ".join(bad) if bad else None)


def check_tier_bounds(exhaustive: tuple = ((4, 4), (5, 4), (5, 5)),
                      random_case: tuple = (8, 4),
                      seeds: int = 300) -> BoundReport:
    start = time.monotonic()
    bad = []
    for m, k in exhaustive:
        hi = HalvingStrategy.turn_bound(m, k)
        worst = exhaustive_adversary(lambda k=k: HalvingStrategy(k), "a", m, k,
                                     kind="b")
        if worst > hi:
            bad.append(f"halving ({m},{k}): {worst} > {hi}")
        lo = TierSeparationStrategy.turn_bound(m, k)
        worst = exhaustive_adversary(lambda k=k: TierSeparationStrategy(k),
                                     "b", m, k, kind="b")
        if worst < lo:
            bad.append(f"tiers ({m},{k}): {worst} < {lo}")
        lo = BoundaryTierStrategy.turn_bound(m, k)
        worst = exhaustive_adversary(lambda k=k: BoundaryTierStrategy(k),
                                     "b", m, k, kind="b")
        if worst < lo:
            bad.append(f"boundary-tiers ({m},{k}): {worst} < {lo}")
    m, k = random_case
    cap = (m - 1) * (k - 1) + 2
    lengths = random_match_lengths("a:halving", "a", m, k, "b", range(seeds),
                                   max_turns=cap)
    if max(lengths) > HalvingStrategy.turn_bound(m, k):
        bad.append(f"halving randomized ({m},{k}) exceeded its bound")
    for fixed, bound in (("b:tiers", TierSeparationStrategy.turn_bound(m, k)),
                         ("b:boundary-tiers", BoundaryTierStrategy.turn_bound(m, k))):
        lengths = random_match_lengths(fixed, "b", m, k, "b", range(seeds),
                                       max_turns=cap)
        if min(lengths) < bound:
            bad.append(f"{fixed} randomized ({m},{k}) fell below {bound}")
    return _report(
        "tier-strategy-bounds",
        f"exhaustive {exhaustive}, randomized {random_case}",
        "halving <= floor(k/2)(m-1)+1; separation strategies >= their bounds",
        start, not bad, "all hold" if not bad else "; ".join(bad),
        "; ".join(bad) if bad else None)


def check_b_identities(max_m: int = 7) -> BoundReport:
    start = time.monotonic()
    bad = []
    for m in range(2, max_m + 1):
        for k in (2, 3):
            got = solve("b", m, k).value
            if got != m:
                bad.append(f"B({m},{k}) = {got} != {m}")
    for (m, k), want in (((4, 4), 7), ((5, 4), 9)):
        got = solve("b", m, k).value
        if got != want:
            bad.append(f"B({m},{k}) = {got} != {want}")
    return _report("tier-game-identities", f"m<={max_m} and (4,4),(5,4)",
                   "B(m,2)=B(m,3)=m; B(m,4)=2m-1 at m=4,5", start, not bad,
                   "all match" if not bad else "; ".join(bad),
                   "; ".join(bad) if bad else None)


def check_sandwich() -> BoundReport:
    start = time.monotonic()
    bad = []
    for m in range(3, 8):
        v = solve("a", m, 3).value
        root = (6 * m) ** (1 / 3)
        if not (m + root - 2 < v < m + root + 3):
            bad.append(f"m={m}: {v} outside ({m + root - 2:.2f}, {m + root + 3:.2f})")
    return _report("k3-sandwich", "m in 3..7",
                   "m+(6m)^(1/3)-2 < value < m+(6m)^(1/3)+3", start, not bad,
                   "holds" if not bad else "; ".join(bad),
                   "; ".join(bad) if bad else None)


def check_optimal_adversary_consistency() -> BoundReport:
    start = time.monotonic()
    bad = []
    for m, k in ((3, 3), (4, 3)):
        want = solve("a", m, k).value
        got_a = exhaustive_adversary(lambda m=m, k=k: _OptimalA(m, k), "a", m, k)
        got_b = exhaustive_adversary(lambda m=m, k=k: _OptimalB(m, k), "b", m, k)
        if got_a != want or got_b != want:
            bad.append(f"({m},{k}): optimal-A {got_a}, optimal-B {got_b}, solver {want}")
    return _report("optimal-adversary-consistency", "(3,3), (4,3)",
                   "exhaustive worst case of an optimal player equals the value",
                   start, not bad, "equal" if not bad else "; ".join(bad),
                   "; ".join(bad) if bad else None)


SUITES = ("fast", "standard", "deep")


def verify_all(suite: str = "standard") -> list[BoundReport]:
    """Run the bound suite at the requested cost tier and return reports."""
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {SUITES}")
    if suite == "fast":
        return [
            check_table(deep=False),
            check_b_identities(max_m=5),
            check_combined_bound(exhaustive_max_m=5, random_max_m=7,
                                 seeds_per_m=100),
            check_fracturing_bound(exhaustive_max_m=5, random_max_m=7,
                                   seeds_per_m=100),
            check_tier_bounds(exhaustive=((4, 4),), seeds=50),
            check_sandwich(),
            check_optimal_adversary_consistency(),
        ]
    if suite == "standard":
        return [
            check_table(deep=False),
            check_symmetry_monotonicity(),
            check_b_identities(),
            check_combined_bound(),
            check_fracturing_bound(),
            check_tier_bounds(),
            check_sandwich(),
            check_optimal_adversary_consistency(),
        ]
    return [
        check_table(deep=True),
        check_symmetry_monotonicity(),
        check_b_identities(),
        check_combined_bound(),
        check_fracturing_bound(),
        check_tier_bounds(seeds=1000),
        check_sandwich(),
        check_optimal_adversary_consistency(),
    ]
