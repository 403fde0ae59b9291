"""Arm-selection policies: round-robin, UCB1 and the VOI-aware rule.

The VOI score of an arm is an upper bound on the value of spending the whole
remaining budget ``N`` on it. Two cases:

* the current leader ``alpha`` is pulled and its mean falls below the runner-up
  ``beta``; the value factor is ``N * mean_beta / n_alpha``;
* a challenger ``i`` is pulled and overtakes ``alpha``; the value factor is
  ``N * (1 - mean_alpha) / n_i``.

Each factor multiplies a Hoeffding-style bound ``2 exp(-f * gap**2 * n)`` on the
probability that the order flips, where ``f`` is either the constant 1.37 or
the budget-dependent ``phi(n, N)`` whose infimum that constant rounds down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from voisearch.bandit import ArmStats, BudgetState, PreconditionError, empirical_best_two

PHI_LOWER = 1.37
PHI_INFIMUM = 24.0 - 16.0 * math.sqrt(2.0)


class VoiVariant(str, Enum):
    CONSTANT = "const"
    EXACT_PHI = "phi"


class PolicyTag(str, Enum):
    UNIFORM = "uniform"
    UCB1 = "ucb1"
    VOI = "voi"


@dataclass(frozen=True)
class PolicyKind:
    tag: PolicyTag
    voi_variant: VoiVariant = VoiVariant.CONSTANT
    c: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", PolicyTag(self.tag))
        object.__setattr__(self, "voi_variant", VoiVariant(self.voi_variant))
        if not self.c > 0:
            raise PreconditionError(f"UCB1 exploration scale must be positive, got {self.c}")

    @property
    def name(self) -> str:
        return self.tag.value

    @classmethod
    def parse(cls, name: str, voi_variant: str = "const", c: float = 1.0) -> "PolicyKind":
        return cls(PolicyTag(name.strip().lower()), VoiVariant(voi_variant), c)


@dataclass(frozen=True)
class VoiEstimate:
    """VOI upper bounds for every arm at one decision point."""

    lambda_hat: tuple[float, ...]
    alpha: int
    beta: int
    # True where the raw probability bound was above 1 (it is never clamped)
    bound_exceeds_one: tuple[bool, ...]

    def role(self, arm: int) -> str:
        return "alpha-case" if arm == self.alpha else "challenger-case"

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple(self.role(i) for i in range(len(self.lambda_hat)))

    def best(self) -> int:
        return _argmax(self.lambda_hat)


def _argmax(values) -> int:
    best_i, best_v = 0, values[0]
    for i in range(1, len(values)):
        if values[i] > best_v:
            best_i, best_v = i, values[i]
    return best_i


def phi(n: int, N: int) -> float:
    """Budget-dependent exponent factor 2((1 + n/N) / (1 + sqrt(n/N)))**2."""
    if N < 1:
        raise PreconditionError("phi needs at least one remaining sample")
    if n < 0:
        raise PreconditionError("pull count must be non-negative")
    ratio = n / N
    q = (1.0 + ratio) / (1.0 + math.sqrt(ratio))
    return 2.0 * (q * q)


def _gap_and_factor(stats: ArmStats, arm: int, alpha: int, beta: int) -> tuple[float, float]:
    """Mean gap driving the bound and the value factor of the matching case."""
    if not stats.all_visited():
        raise PreconditionError(f"arm {stats.first_unvisited()} has not been pulled yet")
    mean_alpha = stats.sums[alpha] / stats.n[alpha]
    if arm == alpha:
        mean_beta = stats.sums[beta] / stats.n[beta]
        return mean_alpha - mean_beta, mean_beta
    return mean_alpha - stats.sums[arm] / stats.n[arm], 1.0 - mean_alpha


def _exponent_factor(n: int, N: int, variant: VoiVariant) -> float:
    if VoiVariant(variant) is VoiVariant.EXACT_PHI:
        return phi(n, N)
    return PHI_LOWER


def prob_bound(stats: ArmStats, arm: int, alpha: int, beta: int, N: int,
               variant: VoiVariant | str = VoiVariant.CONSTANT) -> float:
    """Hoeffding bound on the chance that ``arm`` changes the leader. Not clamped to 1."""
    gap, _ = _gap_and_factor(stats, arm, alpha, beta)
    n = stats.n[arm]
    f = _exponent_factor(n, N, variant)
    return 2.0 * math.exp(-(f * (gap * gap) * n))


def voi_upper_bound(stats: ArmStats, arm: int, alpha: int, beta: int, N: int,
                    variant: VoiVariant | str = VoiVariant.CONSTANT) -> float:
    if N < 1:
        raise PreconditionError("no remaining budget to value")
    gap, factor = _gap_and_factor(stats, arm, alpha, beta)
    n = stats.n[arm]
    f = _exponent_factor(n, N, variant)
    return N * factor / n * (2.0 * math.exp(-(f * (gap * gap) * n)))


def voi_tight_bound(stats: ArmStats, arm: int, alpha: int, beta: int, N: int,
                    variant: VoiVariant | str = VoiVariant.CONSTANT) -> float:
    """Same bound with the sharper N/(N + n) value factor. Diagnostics only."""
    if N < 1:
        raise PreconditionError("no remaining budget to value")
    _, factor = _gap_and_factor(stats, arm, alpha, beta)
    n = stats.n[arm]
    return N * factor / (N + n) * prob_bound(stats, arm, alpha, beta, N, variant)


def voi_estimate(stats: ArmStats, N: int, variant: VoiVariant | str = VoiVariant.CONSTANT) -> VoiEstimate:
    alpha, beta = empirical_best_two(stats)
    values = []
    exceeds = []
    for i in range(stats.K):
        values.append(voi_upper_bound(stats, i, alpha, beta, N, variant))
        exceeds.append(prob_bound(stats, i, alpha, beta, N, variant) > 1.0)
    return VoiEstimate(tuple(values), alpha, beta, tuple(exceeds))


def voi_select(stats: ArmStats, budget: BudgetState,
               variant: VoiVariant | str = VoiVariant.CONSTANT) -> int:
    """Pull the arm with the largest VOI bound; unvisited arms go first."""
    if stats.K < 2:
        raise PreconditionError("need at least two arms")
    N = budget.remaining
    if N < 1:
        raise PreconditionError("budget exhausted")
    unvisited = stats.first_unvisited()
    if unvisited is not None:
        return unvisited
    alpha, beta = empirical_best_two(stats)
    exact = VoiVariant(variant) is VoiVariant.EXACT_PHI
    # Inlined voi_upper_bound over all arms; same operations in the same order.
    n, sums = stats.n, stats.sums
    mean_alpha = sums[alpha] / n[alpha]
    mean_beta = sums[beta] / n[beta]
    challenger_factor = 1.0 - mean_alpha
    exp = math.exp
    best_i, best_v = 0, -1.0
    for i in range(len(n)):
        ni = n[i]
        if i == alpha:
            gap, factor = mean_alpha - mean_beta, mean_beta
        else:
            gap, factor = mean_alpha - sums[i] / ni, challenger_factor
        f = phi(ni, N) if exact else PHI_LOWER
        v = N * factor / ni * (2.0 * exp(-(f * (gap * gap) * ni)))
        if v > best_v:
            best_i, best_v = i, v
    return best_i


def ucb1_select(stats: ArmStats, t: int, c: float = 1.0) -> int:
    """UCB1 index ``mean + c * sqrt(2 ln t / n)``; unvisited arms first."""
    if stats.K < 2:
        raise PreconditionError("need at least two arms")
    unvisited = stats.first_unvisited()
    if unvisited is not None:
        return unvisited
    log_t = math.log(max(t, 1))
    n, sums = stats.n, stats.sums
    best_i, best_v = 0, float("-inf")
    for i in range(len(n)):
        v = sums[i] / n[i] + c * math.sqrt(2.0 * log_t / n[i])
        if v > best_v:
            best_i, best_v = i, v
    return best_i


def uniform_select(stats: ArmStats, t: int) -> int:
    if stats.K < 1:
        raise PreconditionError("no arms")
    return t % stats.K


def select(kind: PolicyKind, stats: ArmStats, budget: BudgetState) -> int:
    """Dispatch one pull decision; ``budget.used`` doubles as the pull counter t."""
    if kind.tag is PolicyTag.UNIFORM:
        return uniform_select(stats, budget.used)
    if kind.tag is PolicyTag.UCB1:
        return ucb1_select(stats, budget.used, kind.c)
    return voi_select(stats, budget, kind.voi_variant)


# Row-wise versions of the selection rules for many independent trials at once.
# Each row is one trial; the arithmetic mirrors the scalar functions above
# operation for operation so both paths pick the same arms.

def batch_select(kind: PolicyKind, n: np.ndarray, sums: np.ndarray, t: int, remaining: int) -> np.ndarray:
    """Arm choice per row for fully initialized statistics of shape (trials, K)."""
    B, K = n.shape
    if kind.tag is PolicyTag.UNIFORM:
        return np.full(B, t % K, dtype=np.int64)
    means = sums / n
    if kind.tag is PolicyTag.UCB1:
        scores = means + kind.c * np.sqrt(2.0 * math.log(max(t, 1)) / n)
        return np.argmax(scores, axis=1)
    return np.argmax(batch_voi_scores(n, means, remaining, kind.voi_variant), axis=1)


def batch_voi_scores(n: np.ndarray, means: np.ndarray, N: int, variant: VoiVariant | str) -> np.ndarray:
    rows = np.arange(n.shape[0])
    alpha = np.argmax(means, axis=1)
    masked = means.copy()
    masked[rows, alpha] = -np.inf
    beta = np.argmax(masked, axis=1)
    mean_alpha = means[rows, alpha][:, None]
    mean_beta = means[rows, beta][:, None]
    is_alpha = np.zeros(n.shape, dtype=bool)
    is_alpha[rows, alpha] = True
    gap = np.where(is_alpha, mean_alpha - mean_beta, mean_alpha - means)
    factor = np.where(is_alpha, mean_beta, 1.0 - mean_alpha)
    if VoiVariant(variant) is VoiVariant.EXACT_PHI:
        ratio = n / N
        q = (1.0 + ratio) / (1.0 + np.sqrt(ratio))
        f = 2.0 * (q * q)
    else:
        f = PHI_LOWER
    return N * factor / n * (2.0 * np.exp(-(f * (gap * gap) * n)))
