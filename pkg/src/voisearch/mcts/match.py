"""Equal-budget matches between two engines.

Games are played in pairs on the same starting position with colors swapped.
Every search draws its randomness from (seed, budget, pair, ply), not from the
engine, so identical engines replay each pair as mirror images.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from voisearch.bandit import PreconditionError
from voisearch.mcts.games import GameSpec, GameState
from voisearch.mcts.search import Engine

MATCH_CSV_HEADER = ("budget", "games", "voi_wins", "uct_wins", "draws", "voi_winrate", "ci_low", "ci_high")


def wilson_interval(p_hat: float, n: int, z: float = 1.96) -> tuple[float, float]:
    if n <= 0:
        return 0.0, 1.0
    denom = 1.0 + z * z / n
    center = (p_hat + z * z / (2 * n)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _seed(*keys: int) -> int:
    return int(np.random.SeedSequence(list(keys)).generate_state(1, np.uint64)[0])


def play_game(first: Engine, second: Engine, state: GameState, budget: int, seed_keys: tuple[int, ...]) -> float:
    """Play to the end; ``first`` moves as player 1. Returns the value for player 1."""
    ply = 0
    while not state.is_terminal():
        engine = first if state.player == 1 else second
        rng = random.Random(_seed(*seed_keys, ply))
        state = state.apply(engine.search(state, budget, rng).move)
        ply += 1
    return state.value()


@dataclass(frozen=True)
class MatchRow:
    budget: int
    games: int
    a_wins: int
    b_wins: int
    draws: int

    @property
    def winrate(self) -> float:
        return (self.a_wins + 0.5 * self.draws) / self.games

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.winrate, self.games)


@dataclass
class MatchReport:
    rows: list[MatchRow] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.config:
            buf.write("# " + json.dumps(self.config, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(MATCH_CSV_HEADER)
        for r in self.rows:
            lo, hi = r.interval
            writer.writerow([r.budget, r.games, r.a_wins, r.b_wins, r.draws,
                             f"{r.winrate:.17g}", f"{lo:.17g}", f"{hi:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "MatchReport":
        lines = text.splitlines()
        config = {}
        if lines and lines[0].startswith("#"):
            config = json.loads(lines[0][1:])
            lines = lines[1:]
        rows = [
            MatchRow(int(d["budget"]), int(d["games"]), int(d["voi_wins"]), int(d["uct_wins"]), int(d["draws"]))
            for d in csv.DictReader(lines)
        ]
        return cls(rows, config)


def _play_one(args) -> float:
    engine_a, engine_b, game, budget, seed, g = args
    pair = g // 2
    state = game.initial(_seed(seed, pair))
    keys = (seed, budget, pair)
    if g % 2 == 0:
        return play_game(engine_a, engine_b, state, budget, keys)
    return 1.0 - play_game(engine_b, engine_a, state, budget, keys)


def play_match(engine_a: Engine, engine_b: Engine, game: GameSpec, budget: int, games: int,
               seed: int = 0, workers: int = 1) -> MatchRow:
    """Tally ``games`` games at a fixed samples-per-ply budget, from engine A's side."""
    if games < 1:
        raise PreconditionError("need at least one game")
    if budget < 1:
        raise PreconditionError("need a positive samples-per-ply budget")
    tasks = [(engine_a, engine_b, game, budget, seed, g) for g in range(games)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_play_one, tasks, chunksize=max(1, games // (8 * workers))))
    else:
        results = [_play_one(t) for t in tasks]
    a_wins = sum(1 for v in results if v == 1.0)
    b_wins = sum(1 for v in results if v == 0.0)
    return MatchRow(budget, games, a_wins, b_wins, games - a_wins - b_wins)


def run_match(engine_a: Engine, engine_b: Engine, game: GameSpec, budgets, games: int,
              seed: int = 0, workers: int = 1) -> MatchReport:
    rows = [play_match(engine_a, engine_b, game, b, games, seed, workers) for b in budgets]
    config = {
        "engine_a": repr(engine_a),
        "engine_b": repr(engine_b),
        "game": str(game),
        "budgets": list(budgets),
        "games": games,
        "seed": seed,
        "colors": "alternate",
    }
    return MatchReport(rows, config)
