"""Solver, strategies and verification harness for the ESO(m,k) game."""

from eso.core import (
    Board,
    Label,
    RankedState,
    TerminationCause,
    TierBoard,
    TieredState,
    endgame_move,
    is_terminal,
    labels,
    longest_down_run,
    longest_up_run,
    quadrant_counts,
    separation,
)
from eso.harness import Transcript, make_strategy, run_match, verify_all
from eso.solver import GameValue, solve, solve_b, solve_eso, value_a, value_b

__all__ = [
    "Board",
    "GameValue",
    "Label",
    "RankedState",
    "TerminationCause",
    "TierBoard",
    "TieredState",
    "Transcript",
    "endgame_move",
    "is_terminal",
    "labels",
    "longest_down_run",
    "longest_up_run",
    "make_strategy",
    "quadrant_counts",
    "run_match",
    "separation",
    "solve",
    "solve_b",
    "solve_eso",
    "value_a",
    "value_b",
    "verify_all",
]
