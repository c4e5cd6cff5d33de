"""Command-line front end: solve, table, match, verify, replay, serve.

Every command is deterministic given its flags and seed, prints
machine-first output with --json, and uses the exit codes
0 success / 2 flag error / 3 verification failure / 4 budget exhausted.
The solver's on-disk memo cache location comes from ESO_CACHE_DIR.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from eso.harness import SUITES, Transcript, replay, run_match, verify_all
from eso.solver import solve

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_VERIFY = 3
EXIT_BUDGET = 4


def _cache_dir() -> Optional[str]:
    return os.environ.get("ESO_CACHE_DIR") or None


def cmd_solve(args: argparse.Namespace) -> int:
    report = solve(args.game, args.m, args.k, budget_seconds=args.budget,
                   cache_dir=_cache_dir())
    name = "ESO" if args.game == "a" else "B"
    if args.json:
        print(json.dumps({
            "game": args.game, "m": args.m, "k": args.k,
            "lo": report.lo, "hi": report.hi,
            "complete": report.complete, "nodes": report.nodes,
        }))
    elif report.complete:
        print(f"{name}({args.m},{args.k}) = {report.lo}")
    else:
        print(f"{name}({args.m},{args.k}) ∈ [{report.lo},{report.hi}]")
    return EXIT_OK if report.complete else EXIT_BUDGET


def cmd_table(args: argparse.Namespace) -> int:
    rows = []
    for m in range(args.k, args.max_m + 1):
        report = solve(args.game, m, args.k, budget_seconds=args.budget,
                       cache_dir=_cache_dir())
        classical = (m - 1) * (args.k - 1) + 1
        rows.append({
            "m": m, "k": args.k,
            "value": report.lo if report.complete else None,
            "lo": report.lo, "hi": report.hi,
            "classical": classical,
        })
    if args.json:
        print(json.dumps(rows))
    elif args.csv:
        print("m,k,value,classical")
        for r in rows:
            value = r["value"] if r["value"] is not None else f"{r['lo']}-{r['hi']}"
            print(f"{r['m']},{r['k']},{value},{r['classical']}")
    else:
        name = "ESO" if args.game == "a" else "B"
        print(f"{'(m,k)':>8} {name:>6} {'ES':>5}")
        for r in rows:
            value = r["value"] if r["value"] is not None else f"[{r['lo']},{r['hi']}]"
            print(f"({r['m']},{r['k']})".rjust(8) + f" {value!s:>6} {r['classical']:>5}")
    if any(r["value"] is None for r in rows):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_match(args: argparse.Namespace) -> int:
    tr = run_match(args.a, args.b, args.m, args.k, kind=args.game,
                   seed=args.seed)
    text = tr.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json or not args.out:
        print(text)
    else:
        print(f"{tr.turns} turns, {tr.cause} -> {args.out}", file=sys.stderr)
    return EXIT_OK if tr.cause in ("up-run", "down-run") else EXIT_VERIFY


def cmd_verify(args: argparse.Namespace) -> int:
    reports = verify_all(args.suite)
    ok = True
    for rep in reports:
        print(rep.to_json())
        ok = ok and rep.passed
    if not args.json:
        summary = "all bounds hold" if ok else "BOUND FAILURES PRESENT"
        print(summary, file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_replay(args: argparse.Namespace) -> int:
    with open(args.file) as fh:
        tr = Transcript.from_json(fh.read())
    board = replay(tr)
    view = {
        "kind": tr.kind, "m": tr.m, "k": tr.k, "turns": tr.turns,
        "cause": tr.cause,
        "final": list(board.ranks().ranks) if tr.kind == "a"
                 else list(board.tiers().tiers),
    }
    if args.json:
        print(json.dumps(view))
    else:
        print(f"replayed {tr.turns} turns ({tr.cause}); final: {view['final']}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from eso.service import create_app

    addr = args.addr or os.environ.get("ESO_ADDR", "127.0.0.1:8000")
    host, _, port = addr.rpartition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eso",
        description="Exact solver and strategy harness for the ESO(m,k) game")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance exactly")
    p.add_argument("--game", choices=("a", "b"), default="a")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=float, default=None,
                   help="seconds before returning certified bounds")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("table", help="tabulate values up to --max-m")
    p.add_argument("--game", choices=("a", "b"), default="a")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("match", help="run one match between two strategies")
    p.add_argument("--a", required=True, help='e.g. "a:combined"')
    p.add_argument("--b", required=True, help='e.g. "b:fracturing(2)"')
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--game", choices=("a", "b"), default="a")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="write the transcript here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_match)

    p = sub.add_parser("verify", help="run a bound-verification suite")
    p.add_argument("--suite", choices=SUITES, default="standard")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("replay", help="replay and validate a transcript file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("serve", help="start the JSON game service")
    p.add_argument("--addr", default=None, help="host:port (or ESO_ADDR)")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_FLAGS if exc.code not in (0, None) else EXIT_OK
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
