"""VOI-aware pure-exploration sampling for bandits and Monte-Carlo tree search."""

from voisearch.bandit import (
    ArmStats,
    BanditInstance,
    BudgetState,
    empirical_best_two,
    sample_arm,
    simple_regret,
    update_stats,
)
from voisearch.policies import (
    PolicyKind,
    VoiEstimate,
    phi,
    prob_bound,
    ucb1_select,
    uniform_select,
    voi_estimate,
    voi_select,
    voi_upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "ArmStats",
    "BanditInstance",
    "BudgetState",
    "PolicyKind",
    "VoiEstimate",
    "empirical_best_two",
    "phi",
    "prob_bound",
    "sample_arm",
    "simple_regret",
    "ucb1_select",
    "uniform_select",
    "update_stats",
    "voi_estimate",
    "voi_select",
    "voi_upper_bound",
]
