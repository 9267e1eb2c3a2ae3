"""Seat-swapped match series, parameter sweeps and throughput benchmarks.

Agent specs look like ``mcts:c=1.4,sb=true,reuse=true``,
``gpn:cpn=5,bias=rank,sb=false`` or ``random``. Draws score half a win
and every summary reports a 95% normal-approximation half-width.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import os
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

from .game import Game, IllegalMoveError
from .games import GameSpecError, make_game
from .gpn import BiasFormula, Gpn, GpnConfig
from .mcts import SQRT2, Mcts, MctsConfig, SearchBudget

log = logging.getLogger(__name__)

WORKERS_ENV = "GPNMCTS_WORKERS"
Z95 = 1.96


class ConfigError(ValueError):
    pass


class EngineError(RuntimeError):
    def __init__(self, message: str, seed: int):
        super().__init__(message)
        self.seed = seed

    def __reduce__(self):
        return (type(self), (str(self), self.seed))


# -- agent specs ----------------------------------------------------------------


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _real(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"must be a non-negative real: {text!r}")
    return value


def _bias(text: str) -> str:
    return BiasFormula(text.strip().lower()).value


_PARAMS: dict[str, dict[str, tuple[Callable, object]]] = {
    "random": {},
    "mcts": {"c": (_real, SQRT2), "sb": (_bool, True), "reuse": (_bool, True)},
    "gpn": {
        "c": (_real, SQRT2),
        "cpn": (_real, 0.0),
        "bias": (_bias, "rank"),
        "sb": (_bool, True),
        "reuse": (_bool, True),
        "mobility": (_bool, False),
    },
}


@dataclass(frozen=True)
class AgentSpec:
    kind: str
    params: tuple[tuple[str, object], ...] = ()

    @property
    def options(self) -> dict:
        return dict(self.params)

    def with_param(self, key: str, raw: str) -> "AgentSpec":
        return parse_agent_spec(f"{self.kind}:" + ",".join(
            [f"{k}={_fmt(v)}" for k, v in self.params if k != key] + [f"{key}={raw}"]))

    def config(self):
        opts = self.options
        if self.kind == "mcts":
            return MctsConfig(**opts)
        if self.kind == "gpn":
            return GpnConfig(**{**opts, "bias": BiasFormula(opts["bias"])})
        return None

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(f"{k}={_fmt(v)}" for k, v in self.params)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_agent_spec(text: str) -> AgentSpec:
    kind, _, rest = text.strip().partition(":")
    if kind not in _PARAMS:
        raise ConfigError(f"unknown agent kind {kind!r}; expected one of {', '.join(_PARAMS)}")
    allowed = _PARAMS[kind]
    values = {k: default for k, (_, default) in allowed.items()}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, raw = item.partition("=")
        key = key.strip()
        if key not in allowed:
            raise ConfigError(f"{kind}: unknown parameter {key!r}")
        if not eq:
            raise ConfigError(f"{kind}: parameter {key!r} needs a value")
        try:
            values[key] = allowed[key][0](raw)
        except ValueError as e:
            raise ConfigError(f"{kind}: bad value for {key}: {e}") from None
    return AgentSpec(kind, tuple(values.items()))


# -- agents -----------------------------------------------------------------------


class RandomAgent:
    def __init__(self, game: Game, rng: random.Random):
        self.game = game
        self.rng = rng
        self.last_iterations = 0

    def choose(self, state, history: Sequence) -> object:
        moves = self.game.legal_moves(state)
        self.last_iterations = 1
        return moves[self.rng.randrange(len(moves))]


class SearchAgent:
    """Wraps one search engine; feeds it the moves played since its last turn."""

    def __init__(self, engine: Mcts, budget: SearchBudget):
        self.engine = engine
        self.budget = budget
        self._seen: Optional[int] = None
        self.last_iterations = 0

    def choose(self, state, history: Sequence) -> object:
        since = None if self._seen is None else list(history[self._seen:])
        move = self.engine.search(state, self.budget, since)
        self._seen = len(history)
        self.last_iterations = self.engine.last_iterations
        return move


def make_agent(spec: AgentSpec, game: Game, budget: SearchBudget, seed: int):
    rng = random.Random(seed)
    if spec.kind == "random":
        return RandomAgent(game, rng)
    engine_cls = Gpn if spec.kind == "gpn" else Mcts
    return SearchAgent(engine_cls(game, spec.config(), rng), budget)


# -- matches --------------------------------------------------------------------------


def derive_seed(seed: int, *path: int) -> int:
    text = ":".join(str(x) for x in (seed, *path)).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "big")


def seat_assignment(match_index: int, num_agents: int) -> list[int]:
    """Agent index sitting at each player seat; cycles through all rotations."""
    return [(p + match_index) % num_agents for p in range(num_agents)]


@dataclass
class MatchRecord:
    game: str
    agents: list[str]
    seats: list[int]
    winner: Optional[int]
    utilities: list[float]
    plies: int
    iterations: list[int]
    seed: int
    index: int = 0


def play_match(
    game_spec: str,
    agent_specs: Sequence[str],
    seats: Sequence[int],
    budget: SearchBudget,
    seed: int,
    index: int = 0,
    observer: Callable | None = None,
) -> MatchRecord:
    """Play one game. ``seats[p]`` is the index of the agent playing as player ``p``.

    ``observer(seat, agent, state_before, move)`` is called after every decision.
    """
    game = make_game(game_spec)
    specs = [parse_agent_spec(s) for s in agent_specs]
    agents = [make_agent(specs[seats[p]], game, budget, derive_seed(seed, p)) for p in range(game.num_players)]
    state = game.initial_state()
    history: list = []
    iterations: list[int] = []
    while not game.is_terminal(state):
        agent = agents[state.mover]
        move = agent.choose(state, history)
        if observer is not None:
            observer(state.mover, agent, state, move)
        try:
            nxt = game.apply(state, move)
        except IllegalMoveError as e:
            raise EngineError(f"agent {seats[state.mover]} played an illegal move: {e}", seed) from e
        history.append(move)
        iterations.append(agent.last_iterations)
        state = nxt
    outcome = game.outcome(state)
    utilities = [0.0] * len(specs)
    for p, u in enumerate(outcome.utilities):
        utilities[seats[p]] = u
    winner = None if outcome.winner is None else seats[outcome.winner]
    return MatchRecord(game.name, [str(s) for s in specs], list(seats), winner, utilities,
                       len(history), iterations, seed, index)


# -- summaries ----------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesSummary:
    """Score of the first agent: wins plus half the draws."""

    n: int
    score: float
    p: float
    ci95: float

    @classmethod
    def from_scores(cls, scores: Sequence[float]) -> "SeriesSummary":
        n = len(scores)
        if n == 0:
            raise ValueError("no games")
        total = math.fsum(scores)
        spread = statistics.stdev(scores) if n > 1 else 0.0
        return cls(n, total, total / n, Z95 * spread / math.sqrt(n))

    @classmethod
    def from_counts(cls, n: int, score: float) -> "SeriesSummary":
        """Summary of ``n`` decisive games worth ``score`` points in total."""
        if n <= 0 or not 0 <= score <= n:
            raise ValueError("need 0 <= score <= n and n > 0")
        p = score / n
        return cls(n, score, p, ci95_halfwidth(p, n))

    def format(self) -> str:
        return f"{100 * self.p:.1f}±{100 * self.ci95:.2f}"

    def __str__(self) -> str:
        return self.format()


def ci95_halfwidth(p: float, n: int) -> float:
    """1.96 times the standard error of a win/loss sample (sample variance)."""
    if n < 2:
        return 0.0
    return Z95 * math.sqrt(p * (1.0 - p) / (n - 1))


@dataclass
class SeriesResult:
    summary: SeriesSummary
    records: list[MatchRecord] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"summary": {**asdict(self.summary), "text": self.summary.format()},
                "matches": [asdict(r) for r in self.records]}


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def _validate(game_spec: str, agent_specs: Sequence[str]) -> Game:
    try:
        game = make_game(game_spec)
    except GameSpecError as e:
        raise ConfigError(str(e)) from None
    for s in agent_specs:
        parse_agent_spec(s)
    if len(agent_specs) != game.num_players:
        raise ConfigError(f"{game.name} needs {game.num_players} agents, got {len(agent_specs)}")
    return game


def _play_indexed(args) -> MatchRecord:
    game_spec, agent_specs, seats, budget, seed, index = args
    try:
        return play_match(game_spec, agent_specs, seats, budget, seed, index)
    except EngineError:
        raise
    except Exception as e:  # surfaced with the reproducing seed
        raise EngineError(f"match {index} failed with seed {seed}: {e!r}", seed) from e


def run_series(
    game_spec: str,
    agent_specs: Sequence[str],
    games: int,
    budget: SearchBudget,
    seed: int,
    workers: int | None = None,
    observer: Callable | None = None,
) -> SeriesResult:
    """Play ``games`` matches rotating seats; summarize the first agent's score."""
    if games < 1:
        raise ConfigError("games must be at least 1")
    game = _validate(game_spec, agent_specs)
    k = len(agent_specs)
    if games % k:
        log.warning("%d games do not split evenly over %d seats", games, k)
    jobs = [
        (game_spec, list(agent_specs), seat_assignment(i, k), budget, derive_seed(seed, i), i)
        for i in range(games)
    ]
    workers = default_workers() if workers is None else workers
    if observer is not None or workers <= 1:
        records = []
        for job in jobs:
            if observer is None:
                records.append(_play_indexed(job))
            else:
                records.append(play_match(*job, observer=observer))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_play_indexed, jobs))
    records.sort(key=lambda r: r.index)
    summary = SeriesSummary.from_scores([r.utilities[0] for r in records])
    log.info("%s: %s over %d games of %s", agent_specs[0], summary.format(), games, game.name)
    return SeriesResult(summary, records)


@dataclass
class SweepRow:
    value: str
    agent: str
    summary: SeriesSummary

    def to_json(self) -> dict:
        return {"value": self.value, "agent": self.agent, **asdict(self.summary), "text": self.summary.format()}


def run_sweep(
    game_spec: str,
    base_spec: str,
    param: str,
    values: Sequence[str],
    opponent_spec: str,
    games: int,
    budget: SearchBudget,
    seed: int,
    workers: int | None = None,
) -> list[SweepRow]:
    """One series per value of ``param`` on the first agent against a fixed opponent."""
    if not values:
        raise ConfigError("sweep needs at least one value")
    base = parse_agent_spec(base_spec)
    if param not in _PARAMS[base.kind]:
        raise ConfigError(f"{base.kind} has no parameter {param!r}")
    opponent = parse_agent_spec(opponent_spec)
    variants = [base.with_param(param, str(v)) for v in values]
    game = _validate(game_spec, [str(variants[0]), str(opponent)])
    rows = []
    for value, agent in zip(values, variants):
        specs = [str(agent)] + [str(opponent)] * (game.num_players - 1)
        result = run_series(game_spec, specs, games, budget, seed, workers)
        rows.append(SweepRow(str(value), str(agent), result.summary))
    return rows


def bench_throughput(game_spec: str, agent_spec: str, seconds: float, warmup: float = 1.0, seed: int = 0) -> float:
    """Iterations per second from the initial position after a warmup run."""
    game = make_game(game_spec)
    spec = parse_agent_spec(agent_spec)
    rng = random.Random(seed)
    state = game.initial_state()
    if spec.kind == "random":
        agent = RandomAgent(game, rng)
        count = 0
        start = time.perf_counter()
        end = start + seconds
        while time.perf_counter() < end:
            agent.choose(state, ())
            count += 1
        return count / (time.perf_counter() - start)
    engine_cls = Gpn if spec.kind == "gpn" else Mcts
    if warmup > 0:
        engine = engine_cls(game, spec.config(), rng)
        engine.set_root(state)
        engine.run(SearchBudget(time_ms=warmup * 1000))
    engine = engine_cls(game, spec.config(), rng)
    engine.set_root(state)
    start = time.perf_counter()
    done = engine.run(SearchBudget(time_ms=seconds * 1000))
    return done / (time.perf_counter() - start)


# -- output files -------------------------------------------------------------------


def write_series_json(path: str, result: SeriesResult) -> None:
    with open(path, "w") as fh:
        json.dump(result.to_json(), fh, indent=2)


def write_sweep_json(path: str, rows: Sequence[SweepRow], meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        json.dump({"meta": meta or {}, "rows": [r.to_json() for r in rows]}, fh, indent=2)


def write_summary_csv(path: str, rows: Sequence[tuple[str, SeriesSummary]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "p", "ci95", "n"])
        for value, s in rows:
            writer.writerow([value, f"{s.p:.6f}", f"{s.ci95:.6f}", s.n])
