"""UCT and the VOI-at-root variant.

Both engines share one rollout loop. They differ only in how the root child is
picked for each rollout and how the final move is recommended:

* UCT: UCB1 at the root, most-visited child recommended;
* VOI: the VOI bound with N = rollouts still to run at the root, highest-mean
  child recommended.

Below the root both descend with UCB1, expand one leaf per rollout and finish
with a uniformly random playout.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from voisearch.bandit import ArmStats, BudgetState, PreconditionError, empirical_best_two
from voisearch.mcts.games import GameState
from voisearch.policies import VoiVariant, ucb1_select, voi_select

DEFAULT_UCT_C = math.sqrt(2.0)


class Node:
    """Search node. ``stats`` holds one arm per legal move, valued for ``player``."""

    __slots__ = ("state", "player", "moves", "children", "stats", "visits", "terminal", "value")

    def __init__(self, state: GameState):
        self.state = state
        self.player = state.player
        self.terminal = state.is_terminal()
        self.value = state.value() if self.terminal else None
        self.moves = () if self.terminal else tuple(state.legal_moves())
        self.children: list[Node | None] = [None] * len(self.moves)
        self.stats = ArmStats.empty(len(self.moves))
        self.visits = 0


def random_playout(state: GameState, rng: random.Random) -> float:
    while not state.is_terminal():
        moves = state.legal_moves()
        state = state.apply(moves[rng.randrange(len(moves))])
    return state.value()


@dataclass
class SearchResult:
    move: object
    index: int
    stats: ArmStats
    rollouts: int


class Engine:
    """UCT search; subclasses override the root rule and the recommendation."""

    name = "uct"

    def __init__(self, c: float = DEFAULT_UCT_C):
        if not c > 0:
            raise PreconditionError("exploration constant must be positive")
        self.c = c
        # UCB1 is written as mean + scale * sqrt(2 ln t / n); UCT's customary
        # mean + c * sqrt(ln t / n) is the same rule with scale = c / sqrt(2).
        self.ucb_scale = c / math.sqrt(2.0)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(c={self.c:g})"

    def root_select(self, root: Node, used: int, budget: int) -> int:
        return ucb1_select(root.stats, root.visits, self.ucb_scale)

    def recommend(self, root: Node) -> int:
        n = root.stats.n
        best = 0
        for i in range(1, len(n)):
            if n[i] > n[best]:
                best = i
        return best

    def search(self, root_state: GameState, budget: int, rng: random.Random,
               trace: list | None = None) -> SearchResult:
        if root_state.is_terminal():
            raise PreconditionError("cannot search from a terminal state")
        root = Node(root_state)
        K = len(root.moves)
        if budget < K:
            raise PreconditionError(f"budget {budget} is below the {K} root moves")
        scale = self.ucb_scale
        for used in range(budget):
            idx = 0 if K == 1 else self.root_select(root, used, budget)
            node = root
            path = []
            while True:
                path.append((node, idx))
                child = node.children[idx]
                if child is None:
                    child = Node(node.state.apply(node.moves[idx]))
                    node.children[idx] = child
                    value = child.value if child.terminal else random_playout(child.state, rng)
                    break
                if child.terminal:
                    value = child.value
                    break
                node = child
                idx = ucb1_select(node.stats, node.visits, scale) if len(node.moves) > 1 else 0
            for n, i in path:
                n.stats.record(i, value if n.player == 1 else 1.0 - value)
                n.visits += 1
            if trace is not None:
                trace.append(tuple(i for _, i in path))
        best = self.recommend(root)
        return SearchResult(root.moves[best], best, root.stats, budget)


class UCTEngine(Engine):
    pass


class VOIRootEngine(Engine):
    name = "voi"

    def __init__(self, c: float = DEFAULT_UCT_C, variant: VoiVariant | str = VoiVariant.CONSTANT):
        super().__init__(c)
        self.variant = VoiVariant(variant)

    def __repr__(self) -> str:
        return f"VOIRootEngine(c={self.c:g}, variant={self.variant.value})"

    def root_select(self, root: Node, used: int, budget: int) -> int:
        return voi_select(root.stats, BudgetState(budget, used), self.variant)

    def recommend(self, root: Node) -> int:
        if len(root.moves) == 1:
            return 0
        alpha, _ = empirical_best_two(root.stats)
        return alpha


def uct_search(root: GameState, budget: int, c: float = DEFAULT_UCT_C, rng: random.Random | None = None):
    return UCTEngine(c).search(root, budget, rng or random.Random(0)).move


def voi_root_search(root: GameState, budget: int, c: float = DEFAULT_UCT_C, rng: random.Random | None = None,
                    variant: VoiVariant | str = VoiVariant.CONSTANT):
    return VOIRootEngine(c, variant).search(root, budget, rng or random.Random(0)).move


def make_engine(name: str, c: float = DEFAULT_UCT_C, variant: VoiVariant | str = VoiVariant.CONSTANT) -> Engine:
    if name == "uct":
        return UCTEngine(c)
    if name == "voi":
        return VOIRootEngine(c, variant)
    raise PreconditionError(f"unknown engine {name!r}")
