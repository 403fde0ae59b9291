"""Two-player alternating-move games with terminal rewards.

Values are always reported from player 1's point of view: 1 for a player-1
win, 0 for a loss, 0.5 for a draw.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

from voisearch.bandit import PreconditionError

_MASK64 = (1 << 64) - 1


class GameState(ABC):
    @property
    @abstractmethod
    def player(self) -> int:
        """1 or 2, whoever moves next."""

    @abstractmethod
    def legal_moves(self) -> Sequence:
        ...

    @abstractmethod
    def apply(self, move) -> "GameState":
        ...

    @abstractmethod
    def is_terminal(self) -> bool:
        ...

    @abstractmethod
    def value(self) -> float:
        """Terminal value for player 1. Undefined on non-terminal states."""


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class PTreeState(GameState):
    """Node of a uniform random game tree.

    The tree has branching ``b`` and depth ``d``; every leaf is a player-1 win
    with probability ``p``, decided by hashing the tree seed and leaf index, so
    the tree is never stored.
    """

    __slots__ = ("seed", "b", "d", "p", "code", "depth", "_moves")

    def __init__(self, seed: int, b: int, d: int, p: float, code: int = 0, depth: int = 0,
                 _moves: tuple | None = None):
        self.seed = seed
        self.b = b
        self.d = d
        self.p = p
        self.code = code
        self.depth = depth
        self._moves = _moves if _moves is not None else tuple(range(b))

    @property
    def player(self) -> int:
        return 1 if self.depth % 2 == 0 else 2

    def legal_moves(self) -> Sequence[int]:
        return () if self.depth >= self.d else self._moves

    def apply(self, move: int) -> "PTreeState":
        if self.depth >= self.d or not 0 <= move < self.b:
            raise PreconditionError(f"illegal move {move!r}")
        return PTreeState(self.seed, self.b, self.d, self.p, self.code * self.b + move,
                          self.depth + 1, self._moves)

    def is_terminal(self) -> bool:
        return self.depth >= self.d

    def value(self) -> float:
        if self.depth < self.d:
            raise PreconditionError("value requested on a non-terminal state")
        h = splitmix64(splitmix64(self.seed & _MASK64) ^ self.code)
        return 1.0 if h < self.p * 2.0**64 else 0.0

    def __repr__(self) -> str:
        return f"PTreeState(depth={self.depth}, code={self.code})"


def new_ptree(seed: int, b: int, d: int, p: float = 0.5) -> PTreeState:
    if b < 1 or d < 1 or not 0.0 <= p <= 1.0:
        raise PreconditionError(f"bad random-tree parameters b={b} d={d} p={p}")
    return PTreeState(seed, b, d, p)


class Connect4State(GameState):
    """Four-in-a-row on a small board, stored as two bitboards.

    Each column takes ``rows + 1`` bits; the spare top bit keeps shifted lines
    from wrapping into the next column.
    """

    __slots__ = ("cols", "rows", "boards", "heights", "moves_played", "winner")

    def __init__(self, cols: int = 5, rows: int = 5, boards=(0, 0), heights=None,
                 moves_played: int = 0, winner: int = 0):
        self.cols = cols
        self.rows = rows
        self.boards = boards
        self.heights = heights if heights is not None else (0,) * cols
        self.moves_played = moves_played
        self.winner = winner

    @property
    def player(self) -> int:
        return 1 + self.moves_played % 2

    def legal_moves(self) -> Sequence[int]:
        if self.winner or self.moves_played == self.cols * self.rows:
            return ()
        return tuple(c for c in range(self.cols) if self.heights[c] < self.rows)

    def apply(self, move: int) -> "Connect4State":
        if self.winner or not 0 <= move < self.cols or self.heights[move] >= self.rows:
            raise PreconditionError(f"illegal move {move!r}")
        me = self.moves_played % 2
        bit = 1 << (move * (self.rows + 1) + self.heights[move])
        board = self.boards[me] | bit
        boards = (board, self.boards[1]) if me == 0 else (self.boards[0], board)
        heights = self.heights[:move] + (self.heights[move] + 1,) + self.heights[move + 1:]
        winner = me + 1 if _has_four(board, self.rows + 1) else 0
        return Connect4State(self.cols, self.rows, boards, heights, self.moves_played + 1, winner)

    def is_terminal(self) -> bool:
        return bool(self.winner) or self.moves_played == self.cols * self.rows

    def value(self) -> float:
        if not self.is_terminal():
            raise PreconditionError("value requested on a non-terminal state")
        if self.winner == 1:
            return 1.0
        if self.winner == 2:
            return 0.0
        return 0.5

    def render(self) -> str:
        lines = []
        for r in range(self.rows - 1, -1, -1):
            row = []
            for c in range(self.cols):
                bit = 1 << (c * (self.rows + 1) + r)
                row.append("X" if self.boards[0] & bit else "O" if self.boards[1] & bit else ".")
            lines.append(" ".join(row))
        return "\n".join(lines)


def _has_four(board: int, height: int) -> bool:
    for shift in (1, height, height - 1, height + 1):
        m = board & (board >> shift)
        if m & (m >> (2 * shift)):
            return True
    return False


class TreeGameState(GameState):
    """Explicit game tree from nested lists; a bare number is a terminal value."""

    __slots__ = ("node", "depth")

    def __init__(self, node, depth: int = 0):
        self.node = node
        self.depth = depth

    @property
    def player(self) -> int:
        return 1 if self.depth % 2 == 0 else 2

    def legal_moves(self) -> Sequence[int]:
        if isinstance(self.node, (int, float)):
            return ()
        return tuple(range(len(self.node)))

    def apply(self, move: int) -> "TreeGameState":
        if isinstance(self.node, (int, float)):
            raise PreconditionError("no moves from a terminal state")
        return TreeGameState(self.node[move], self.depth + 1)

    def is_terminal(self) -> bool:
        return isinstance(self.node, (int, float))

    def value(self) -> float:
        if not self.is_terminal():
            raise PreconditionError("value requested on a non-terminal state")
        return float(self.node)


class FlippedState(GameState):
    """The same game with the player labels swapped."""

    __slots__ = ("inner",)

    def __init__(self, inner: GameState):
        self.inner = inner

    @property
    def player(self) -> int:
        return 3 - self.inner.player

    def legal_moves(self) -> Sequence:
        return self.inner.legal_moves()

    def apply(self, move) -> "FlippedState":
        return FlippedState(self.inner.apply(move))

    def is_terminal(self) -> bool:
        return self.inner.is_terminal()

    def value(self) -> float:
        return 1.0 - self.inner.value()


def minimax_value(state: GameState) -> float:
    if state.is_terminal():
        return state.value()
    values = [minimax_value(state.apply(m)) for m in state.legal_moves()]
    return max(values) if state.player == 1 else min(values)


def optimal_moves(state: GameState) -> list[int]:
    """Indices (into ``legal_moves``) of every minimax-optimal move."""
    moves = state.legal_moves()
    values = [minimax_value(state.apply(m)) for m in moves]
    target = max(values) if state.player == 1 else min(values)
    return [i for i, v in enumerate(values) if v == target]


@dataclass(frozen=True)
class GameSpec:
    kind: str
    b: int = 0
    d: int = 0
    p: float = 0.5

    @classmethod
    def parse(cls, text: str) -> "GameSpec":
        text = text.strip()
        if text == "connect4-5x5":
            return cls("connect4-5x5")
        if text.startswith("ptree:"):
            try:
                b, d, p = text[len("ptree:"):].split(",")
                spec = cls("ptree", int(b), int(d), float(p))
            except ValueError:
                raise PreconditionError(f"bad game spec {text!r}; expected ptree:<b>,<d>,<p>") from None
            if spec.b < 2 or spec.d < 1 or not 0.0 <= spec.p <= 1.0:
                raise PreconditionError(f"bad random-tree parameters in {text!r}")
            return spec
        raise PreconditionError(f"unknown game {text!r}")

    def __str__(self) -> str:
        if self.kind == "ptree":
            return f"ptree:{self.b},{self.d},{self.p:g}"
        return self.kind

    def initial(self, game_seed: int) -> GameState:
        if self.kind == "ptree":
            return new_ptree(game_seed, self.b, self.d, self.p)
        return Connect4State(5, 5)
