"""Bernoulli arms, per-arm running statistics and simple-regret accounting."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class PreconditionError(ValueError):
    """Raised when an operation is called outside its domain."""


@dataclass(frozen=True)
class BanditInstance:
    """Ground-truth Bernoulli arm means. Only the evaluator may look at these."""

    means: tuple[float, ...]

    def __post_init__(self) -> None:
        means = tuple(float(m) for m in self.means)
        if len(means) < 2:
            raise PreconditionError("a bandit needs at least two arms")
        if any(not 0.0 <= m <= 1.0 for m in means):
            raise PreconditionError(f"arm means must lie in [0, 1], got {means}")
        object.__setattr__(self, "means", means)

    @property
    def K(self) -> int:
        return len(self.means)

    @property
    def best_mean(self) -> float:
        return max(self.means)

    def gaps(self) -> tuple[float, ...]:
        best = self.best_mean
        return tuple(best - m for m in self.means)


@dataclass
class ArmStats:
    """Pull counts and reward sums; means are derived, never accumulated.

    ``mean(i)`` returns ``None`` for an arm that has never been pulled so a
    bound formula cannot silently consume a fake zero.
    """

    n: list[int]
    sums: list[float]

    @classmethod
    def empty(cls, K: int) -> "ArmStats":
        return cls([0] * K, [0.0] * K)

    @classmethod
    def from_means(cls, means: Sequence[float], counts: Sequence[int] | int = 1) -> "ArmStats":
        """Build statistics with the given sample means (handy for tests and diagnostics)."""
        if isinstance(counts, int):
            counts = [counts] * len(means)
        if len(counts) != len(means):
            raise PreconditionError("means and counts differ in length")
        return cls([int(c) for c in counts], [float(m) * c for m, c in zip(means, counts)])

    @property
    def K(self) -> int:
        return len(self.n)

    @property
    def total(self) -> int:
        return sum(self.n)

    def mean(self, arm: int) -> float | None:
        count = self.n[arm]
        if count == 0:
            return None
        return self.sums[arm] / count

    def means(self) -> list[float | None]:
        return [self.mean(i) for i in range(self.K)]

    def all_visited(self) -> bool:
        return all(c > 0 for c in self.n)

    def first_unvisited(self) -> int | None:
        for i, c in enumerate(self.n):
            if c == 0:
                return i
        return None

    def record(self, arm: int, reward: float) -> None:
        """In-place update for hot loops; see :func:`update_stats` for the value form."""
        if not 0.0 <= reward <= 1.0:
            raise PreconditionError(f"reward {reward!r} outside [0, 1]")
        self.n[arm] += 1
        self.sums[arm] += reward

    def copy(self) -> "ArmStats":
        return copy.deepcopy(self)


@dataclass(frozen=True)
class BudgetState:
    total: int
    used: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.used <= self.total:
            raise PreconditionError(f"need 0 <= used <= total, got used={self.used} total={self.total}")

    @property
    def remaining(self) -> int:
        return self.total - self.used

    def consume(self, pulls: int = 1) -> "BudgetState":
        return BudgetState(self.total, self.used + pulls)


def _check_arm(K: int, arm: int) -> None:
    if not 0 <= arm < K:
        raise IndexError(f"arm index {arm} out of range for {K} arms")


def sample_arm(instance: BanditInstance, arm: int, rng: np.random.Generator) -> int:
    """Pull ``arm`` once: one uniform draw, reward 1 with probability ``means[arm]``."""
    _check_arm(instance.K, arm)
    return int(rng.random() < instance.means[arm])


def update_stats(stats: ArmStats, arm: int, reward: float) -> ArmStats:
    """Return a copy of ``stats`` with one more observation of ``arm``."""
    _check_arm(stats.K, arm)
    new = ArmStats(list(stats.n), list(stats.sums))
    new.record(arm, reward)
    return new


def fold_rewards(K: int, pulls: Iterable[tuple[int, float]]) -> ArmStats:
    stats = ArmStats.empty(K)
    for arm, reward in pulls:
        _check_arm(K, arm)
        stats.record(arm, reward)
    return stats


def empirical_best_two(stats: ArmStats) -> tuple[int, int]:
    """Indices of the highest and second-highest sample means, ties to the lowest index."""
    if stats.K < 2:
        raise PreconditionError("need at least two arms")
    unvisited = stats.first_unvisited()
    if unvisited is not None:
        raise PreconditionError(f"arm {unvisited} has not been pulled yet")
    alpha = beta = -1
    best = second = float("-inf")
    for i in range(stats.K):
        m = stats.sums[i] / stats.n[i]
        if m > best:
            alpha, beta = i, alpha
            best, second = m, best
        elif m > second:
            beta, second = i, m
    return alpha, beta


def simple_regret(instance: BanditInstance, chosen: int) -> float:
    _check_arm(instance.K, chosen)
    return instance.best_mean - instance.means[chosen]
