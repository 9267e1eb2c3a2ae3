"""Command-line entry point: ``gpnmcts {play,sweep,bench,solve,oracle}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import pns
from .games import GameSpecError, make_game
from .mcts import SearchBudget
from .oracle import Oracle, OracleBudgetExceeded
from .tournament import (
    WORKERS_ENV,
    ConfigError,
    EngineError,
    bench_throughput,
    run_series,
    run_sweep,
    write_series_json,
    write_summary_csv,
    write_sweep_json,
)

GAME_HELP = (
    "game spec name[:param[xparam...]]: tictactoe, tri-tictactoe, "
    "knightthrough:N or knightthrough:NxHOME_ROWS (default 8x2), "
    "connect4:CxRxK (default 5x4x3)"
)
AGENT_HELP = (
    "agent spec, e.g. random, mcts:c=1.41421,sb=true,reuse=true or "
    "gpn:c=1.41421,cpn=1,bias=rank|max|sum,sb=true,reuse=true,mobility=false"
)


def _budget(args) -> SearchBudget:
    if args.iterations is not None:
        return SearchBudget(iterations=args.iterations)
    return SearchBudget(time_ms=args.time_ms)


def _add_budget(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--time-ms", type=float, help="wall-clock budget per move")
    g.add_argument("--iterations", type=int, help="iteration budget per move")


def _add_series(p: argparse.ArgumentParser) -> None:
    p.add_argument("--game", required=True, help=GAME_HELP)
    p.add_argument("--games", type=int, default=10, help="number of matches (seats rotate every match)")
    _add_budget(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None, help=f"parallel matches (default: ${WORKERS_ENV} or 1)")
    p.add_argument("--out", help="write results JSON here")
    p.add_argument("--csv", help="write summary CSV (value,p,ci95,n) here")


def _position(game, line: str | None):
    """Replay a comma-separated list of legal-move indices from the start."""
    state = game.initial_state()
    if not line:
        return state
    for token in line.split(","):
        moves = game.legal_moves(state)
        try:
            state = game.apply(state, moves[int(token)])
        except (ValueError, IndexError):
            raise ConfigError(f"bad move index {token!r} at ply {state.ply}") from None
    return state


def cmd_play(args) -> int:
    specs = args.agent or [args.a, args.b]
    if any(s is None for s in specs):
        raise ConfigError("give --a and --b, or one --agent per seat")
    result = run_series(args.game, specs, args.games, _budget(args), args.seed, args.workers)
    print(f"{specs[0]} vs {', '.join(specs[1:])} on {args.game}: {result.summary.format()} "
          f"(n={result.summary.n}, score={result.summary.score:g})")
    if args.out:
        write_series_json(args.out, result)
    if args.csv:
        write_summary_csv(args.csv, [(specs[0], result.summary)])
    return 0


def cmd_sweep(args) -> int:
    values = [v for v in args.values.split(",") if v.strip()]
    rows = run_sweep(args.game, args.a, args.param, values, args.b, args.games, _budget(args), args.seed, args.workers)
    for row in rows:
        print(f"{args.param}={row.value}\t{row.summary.format()}\tn={row.summary.n}")
    if args.out:
        write_sweep_json(args.out, rows, {"game": args.game, "base": args.a, "opponent": args.b,
                                          "param": args.param, "budget": _budget(args).describe(),
                                          "seed": args.seed})
    if args.csv:
        write_summary_csv(args.csv, [(r.value, r.summary) for r in rows])
    return 0


def cmd_bench(args) -> int:
    rate = bench_throughput(args.game, args.agent, args.seconds, args.warmup, args.seed)
    print(f"{args.agent} on {args.game}: {rate:.1f} iterations/s")
    return 0


def cmd_solve(args) -> int:
    game = make_game(args.game)
    state = _position(game, args.line)
    result = pns.solve(game, state, args.goal, args.max_nodes, args.mobility)
    print(f"{result.verdict.value} nodes={result.nodes}")
    return 0


def cmd_oracle(args) -> int:
    game = make_game(args.game)
    state = _position(game, args.line)
    oracle = Oracle(game, args.node_cap)
    out = {"game": game.name, "ply": state.ply, "mover": state.mover, **oracle.verdict(state).as_dict()}
    if args.goal is not None:
        if not 0 <= args.goal < game.num_players:
            raise ConfigError(f"--goal must be below {game.num_players}, got {args.goal}")
        out["goal"] = args.goal
        out["paranoid"] = oracle.paranoid_win(state, args.goal)
        out["optimistic"] = oracle.optimistic_win(state, args.goal)
    print(json.dumps(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpnmcts", description="Proof-number guided MCTS experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="seat-swapped series between agents")
    p.add_argument("--a", help=AGENT_HELP)
    p.add_argument("--b", help="opponent agent spec")
    p.add_argument("--agent", action="append", help="agent spec per seat (multiplayer games); repeatable")
    _add_series(p)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("sweep", help="one series per value of a parameter of agent A")
    p.add_argument("--a", required=True, help="base agent spec (" + AGENT_HELP + ")")
    p.add_argument("--b", required=True, help="opponent agent spec")
    p.add_argument("--param", required=True, help="parameter of agent A to vary, e.g. cpn or bias")
    p.add_argument("--values", required=True, help="comma-separated values, e.g. 0,0.1,0.5,1,2,5")
    _add_series(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="iterations per second from the initial position")
    p.add_argument("--game", required=True, help=GAME_HELP)
    p.add_argument("--agent", required=True, help=AGENT_HELP)
    p.add_argument("--seconds", type=float, default=1.0)
    p.add_argument("--warmup", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    for name, helptext in (("solve", "classic proof-number search"), ("oracle", "exhaustive verdicts as JSON")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--game", required=True, help=GAME_HELP)
        p.add_argument("--line", help="comma-separated legal-move indices to replay before solving")
        if name == "solve":
            p.add_argument("--goal", type=int, default=0, help="player whose forced win is sought")
            p.add_argument("--max-nodes", type=int, default=1_000_000)
            p.add_argument("--mobility", action="store_true", help="mobility-initialized leaves")
            p.set_defaults(func=cmd_solve)
        else:
            p.add_argument("--goal", type=int, default=None)
            p.add_argument("--node-cap", type=int, default=5_000_000)
            p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, GameSpecError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (EngineError, OracleBudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
