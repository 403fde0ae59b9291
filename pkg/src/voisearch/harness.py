"""Random-instance regret experiments and an exact enumeration oracle.

Reward model: a trial draws a (K, budget) table of uniforms once, and the j-th
pull of arm i pays ``u[i, j] < mean_i``. Every policy run against the same
trial therefore sees the same reward stream per arm (common random numbers),
and the batched simulator reproduces the one-trial path exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from voisearch.bandit import (
    ArmStats,
    BanditInstance,
    BudgetState,
    PreconditionError,
    empirical_best_two,
    simple_regret,
)
from voisearch.policies import PolicyKind, batch_select, select

# Trials are simulated in fixed-size blocks; the partition depends only on
# the trial count, never on the worker count.
BATCH_SIZE = 250
ORACLE_MAX_BUDGET = 20
CSV_HEADER = ("policy", "budget", "mean_regret", "stderr", "trials")


@dataclass(frozen=True)
class ExperimentConfig:
    K: int = 32
    budgets: tuple[int, ...] = (32, 64, 128, 256, 512, 1024)
    trials: int = 10000
    policies: tuple[PolicyKind, ...] = (PolicyKind("ucb1"), PolicyKind("voi"))
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "budgets", tuple(int(b) for b in self.budgets))
        object.__setattr__(self, "policies", tuple(self.policies))
        if self.K < 2:
            raise PreconditionError("need at least two arms")
        if not self.budgets:
            raise PreconditionError("no budgets given")
        for b in self.budgets:
            if b < self.K:
                raise PreconditionError(f"budget {b} is smaller than the arm count {self.K}")
        if self.trials < 1:
            raise PreconditionError("need at least one trial")
        if not self.policies:
            raise PreconditionError("no policies given")

    def describe(self) -> dict:
        return {
            "arms": self.K,
            "budgets": list(self.budgets),
            "trials": self.trials,
            "policies": [
                {"name": p.name, "voi_variant": p.voi_variant.value, "ucb_c": p.c} for p in self.policies
            ],
            "seed": self.seed,
            "reward_model": "bernoulli",
            "batch_size": BATCH_SIZE,
        }


@dataclass(frozen=True)
class ResultRow:
    policy: str
    budget: int
    mean_regret: float
    stderr: float
    trials: int


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def row(self, policy: str, budget: int) -> ResultRow:
        for r in self.rows:
            if r.policy == policy and r.budget == budget:
                return r
        raise KeyError((policy, budget))

    def policies(self) -> list[str]:
        seen: list[str] = []
        for r in self.rows:
            if r.policy not in seen:
                seen.append(r.policy)
        return seen

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.config:
            buf.write("# " + json.dumps(self.config, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([r.policy, r.budget, f"{r.mean_regret:.17g}", f"{r.stderr:.17g}", r.trials])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        lines = text.splitlines()
        config = {}
        if lines and lines[0].startswith("#"):
            config = json.loads(lines[0][1:])
            lines = lines[1:]
        reader = csv.DictReader(lines)
        rows = [
            ResultRow(d["policy"], int(d["budget"]), float(d["mean_regret"]), float(d["stderr"]), int(d["trials"]))
            for d in reader
        ]
        return cls(rows, config)


def generate_instance(K: int, rng: np.random.Generator) -> BanditInstance:
    if K < 2:
        raise PreconditionError("need at least two arms")
    return BanditInstance(tuple(rng.random(K)))


def trial_rng(seed: int, budget: int, trial: int) -> np.random.Generator:
    """Stream for one trial. The policy is left out so all policies share it."""
    return np.random.default_rng([seed, budget, trial])


def draw_reward_table(instance: BanditInstance, budget: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.random((instance.K, budget))
    return u < np.asarray(instance.means)[:, None]


def play_trial(instance: BanditInstance, policy: PolicyKind, budget: int,
               rewards: np.ndarray) -> tuple[int, ArmStats]:
    """Spend ``budget`` pulls (initialization included) and recommend the empirical best arm."""
    if budget < instance.K:
        raise PreconditionError(f"budget {budget} cannot pull each of {instance.K} arms once")
    stats = ArmStats.empty(instance.K)
    for t in range(budget):
        arm = select(policy, stats, BudgetState(budget, t))
        stats.record(arm, float(rewards[arm, stats.n[arm]]))
    alpha, _ = empirical_best_two(stats)
    return alpha, stats


def run_trial(instance: BanditInstance, policy: PolicyKind, budget: int, rng: np.random.Generator) -> float:
    if budget < instance.K:
        raise PreconditionError(f"budget {budget} cannot pull each of {instance.K} arms once")
    rewards = draw_reward_table(instance, budget, rng)
    alpha, _ = play_trial(instance, policy, budget, rewards)
    return simple_regret(instance, alpha)


def simulate_batch(policy: PolicyKind, budget: int, rewards: np.ndarray) -> np.ndarray:
    """Recommended arm for each row of a (trials, K, budget) reward table."""
    B, K, _ = rewards.shape
    rows = np.arange(B)
    n = np.ones((B, K), dtype=np.int64)
    sums = rewards[:, :, 0].astype(np.float64)
    for t in range(K, budget):
        arms = batch_select(policy, n, sums, t, budget - t)
        sums[rows, arms] += rewards[rows, arms, n[rows, arms]]
        n[rows, arms] += 1
    return np.argmax(sums / n, axis=1)


def _experiment_block(args) -> tuple[int, int, dict[str, np.ndarray]]:
    K, policies, seed, budget, start, stop = args
    means = np.empty((stop - start, K))
    rewards = np.empty((stop - start, K, budget), dtype=bool)
    for j, trial in enumerate(range(start, stop)):
        rng = trial_rng(seed, budget, trial)
        instance = generate_instance(K, rng)
        means[j] = instance.means
        rewards[j] = draw_reward_table(instance, budget, rng)
    best = means.max(axis=1)
    rows = np.arange(stop - start)
    out = {}
    for policy in policies:
        chosen = simulate_batch(policy, budget, rewards)
        out[policy.name] = best - means[rows, chosen]
    return budget, start, out


def summarize(regrets: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error; exact summation keeps the result order-free."""
    values = [float(x) for x in regrets]
    T = len(values)
    mean = math.fsum(values) / T
    if T < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in values) / (T - 1)
    return mean, math.sqrt(var / T)


def _blocks(trials: int, size: int = BATCH_SIZE) -> list[tuple[int, int]]:
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def _map(fn, tasks: list, workers: int) -> Iterable:
    if workers <= 1 or len(tasks) <= 1:
        return map(fn, tasks)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ResultTable:
    names = [p.name for p in config.policies]
    if len(set(names)) != len(names):
        raise PreconditionError(f"duplicate policy names {names}")
    tasks = [
        (config.K, config.policies, config.seed, budget, start, stop)
        for budget in config.budgets
        for start, stop in _blocks(config.trials)
    ]
    regrets = {(name, b): np.empty(config.trials) for name in names for b in config.budgets}
    for budget, start, out in _map(_experiment_block, tasks, workers):
        for name, values in out.items():
            regrets[name, budget][start:start + len(values)] = values
    rows = []
    for name in names:
        for b in config.budgets:
            mean, se = summarize(regrets[name, b])
            rows.append(ResultRow(name, b, mean, se, config.trials))
    return ResultTable(rows, config.describe())


def _estimate_block(args) -> np.ndarray:
    means, policy, budget, seed, block, size = args
    rng = np.random.default_rng([seed, budget, block])
    means = np.asarray(means)
    rewards = rng.random((size, len(means), budget)) < means[None, :, None]
    chosen = simulate_batch(policy, budget, rewards)
    return means.max() - means[chosen]


def estimate_regret(instance: BanditInstance, policy: PolicyKind, budget: int, trials: int,
                    seed: int = 0, workers: int = 1, block_size: int = 4096) -> tuple[float, float]:
    """Monte-Carlo mean simple regret and its standard error on one fixed instance."""
    if budget < instance.K:
        raise PreconditionError(f"budget {budget} cannot pull each of {instance.K} arms once")
    tasks = [
        (instance.means, policy, budget, seed, i, stop - start)
        for i, (start, stop) in enumerate(_blocks(trials, block_size))
    ]
    values = np.concatenate(list(_map(_estimate_block, tasks, workers)))
    return summarize(values)


def brute_force_regret(instance: BanditInstance, policy: PolicyKind, budget: int) -> float:
    """Exact expected simple regret by walking every reward sequence of length ``budget``."""
    if budget > ORACLE_MAX_BUDGET:
        raise PreconditionError(f"budget {budget} exceeds the enumeration limit {ORACLE_MAX_BUDGET}")
    if budget < instance.K:
        raise PreconditionError(f"budget {budget} cannot pull each of {instance.K} arms once")
    gaps = instance.gaps()
    means = instance.means
    total = []

    def walk(stats: ArmStats, t: int, prob: float) -> None:
        if t == budget:
            alpha, _ = empirical_best_two(stats)
            total.append(prob * gaps[alpha])
            return
        arm = select(policy, stats, BudgetState(budget, t))
        for reward, p in ((1.0, means[arm]), (0.0, 1.0 - means[arm])):
            if p == 0.0:
                continue
            stats.record(arm, reward)
            walk(stats, t + 1, prob * p)
            stats.n[arm] -= 1
            stats.sums[arm] -= reward

    walk(ArmStats.empty(instance.K), 0, 1.0)
    return math.fsum(total)
