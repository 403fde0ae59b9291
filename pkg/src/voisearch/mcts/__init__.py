"""Game abstraction, UCT and VOI-at-root search, and the match runner."""

from voisearch.mcts.games import (
    Connect4State,
    FlippedState,
    GameSpec,
    GameState,
    PTreeState,
    TreeGameState,
    minimax_value,
    new_ptree,
    optimal_moves,
)
from voisearch.mcts.match import MatchReport, MatchRow, play_match, run_match, wilson_interval
from voisearch.mcts.search import (
    DEFAULT_UCT_C,
    Engine,
    UCTEngine,
    VOIRootEngine,
    make_engine,
    uct_search,
    voi_root_search,
)

__all__ = [
    "Connect4State",
    "DEFAULT_UCT_C",
    "Engine",
    "FlippedState",
    "GameSpec",
    "GameState",
    "MatchReport",
    "MatchRow",
    "PTreeState",
    "TreeGameState",
    "UCTEngine",
    "VOIRootEngine",
    "make_engine",
    "minimax_value",
    "new_ptree",
    "optimal_moves",
    "play_match",
    "run_match",
    "uct_search",
    "voi_root_search",
    "wilson_interval",
]
