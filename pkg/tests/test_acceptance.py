"""Exit criteria, each at its stated tolerance. Runs for roughly 10 minutes on one core."""

import math
import os
import random

import numpy as np
import pytest

from voisearch.bandit import ArmStats, BanditInstance, empirical_best_two
from voisearch.cli import DEFAULT_GAME, DEFAULT_SEED, main
from voisearch.harness import ExperimentConfig, brute_force_regret, estimate_regret, run_experiment
from voisearch.mcts import GameSpec, TreeGameState, UCTEngine, VOIRootEngine, optimal_moves, play_match
from voisearch.policies import PHI_INFIMUM, PolicyKind, phi, voi_upper_bound

pytestmark = pytest.mark.slow

WORKERS = max(1, min(4, os.cpu_count() or 1))
DECEPTIVE = [[0.5, 0.5, 1], [1, 1, 1, 1, 0], [0.5, 0, 1]]


def test_random_instance_regret_trend(verdict):
    config = ExperimentConfig(K=32, budgets=(32, 64, 128, 256, 512, 1024), trials=10000,
                              policies=(PolicyKind("ucb1", c=1.0), PolicyKind("voi")), seed=DEFAULT_SEED)
    table = run_experiment(config, workers=WORKERS)
    details = []
    ok = True
    for b in config.budgets:
        if b < 64:
            continue
        u, v = table.row("ucb1", b), table.row("voi", b)
        z = (u.mean_regret - v.mean_regret) / math.hypot(u.stderr, v.stderr)
        details.append(f"{b}:ucb1={u.mean_regret:.4f},voi={v.mean_regret:.4f},z={z:.1f}")
        ok &= v.mean_regret < u.mean_regret and z > 2.0
    verdict("voi-beats-ucb1-every-budget>=64 (K=32, 10000 trials, >2 combined SE)", ok, " ".join(details))
    assert ok


def test_phi_grid(verdict):
    # 100 budgets N, and for each at least 100 distinct pull counts n in [0, N] including
    # both ends and the analytic minimiser n = (sqrt(2) - 1)**2 N
    Ns = [int(N) for N in np.unique(np.round(np.geomspace(100, 10**6, 100)))]
    values = []
    for N in Ns:
        ns = set(int(n) for n in np.linspace(0, N, 100)) | {round((math.sqrt(2) - 1) ** 2 * N)}
        values.extend(phi(n, N) for n in sorted(ns))
    endpoints = all(phi(0, N) == 2.0 and phi(N, N) == 2.0 for N in Ns)
    lowest = min(values)
    ok = len(values) >= 10**4 and lowest > 1.37 and endpoints and abs(lowest - PHI_INFIMUM) <= 1e-4
    verdict("phi>1.37, phi(0,N)=phi(N,N)=2, min~24-16*sqrt(2)", ok,
            f"pairs={len(values)} min={lowest:.6f} target={PHI_INFIMUM:.6f}")
    assert ok


def test_voi_bound_point_values(verdict):
    # expected values: rounded hand-worked figures, and direct evaluation of the closed form
    alpha_stats = ArmStats.from_means([0.6, 0.5], [100, 100])
    chall_stats = ArmStats.from_means([0.6, 0.4], [100, 50])
    select_stats = ArmStats.from_means([0.6, 0.5], [100, 10])
    checks = [
        (voi_upper_bound(alpha_stats, 0, 0, 1, 100), 0.2541),
        (voi_upper_bound(alpha_stats, 0, 0, 1, 100), 100 * 0.5 / 100 * 2 * math.exp(-1.37 * 0.01 * 100)),
        (voi_upper_bound(chall_stats, 1, 0, 1, 100), 0.1034),
        (voi_upper_bound(chall_stats, 1, 0, 1, 100), 100 * 0.4 / 50 * 2 * math.exp(-1.37 * 0.04 * 50)),
        (voi_upper_bound(select_stats, 1, 0, 1, 100), 100 * 0.4 / 10 * 2 * math.exp(-1.37 * 0.01 * 10)),
        (voi_upper_bound(ArmStats.from_means([0.3, 0.3], [20, 20]), 0, 0, 1, 40), 2 * 40 * 0.3 / 20),
    ]
    errors = [abs(got - want) for got, want in checks]
    ok = max(errors) <= 1e-4
    verdict("VOI bound point checks within 1e-4", ok, f"max_err={max(errors):.2e}")
    assert ok


@pytest.mark.parametrize("policy", [PolicyKind("uniform"), PolicyKind("ucb1"), PolicyKind("voi"),
                                    PolicyKind("voi", "phi")], ids=lambda p: f"{p.name}-{p.voi_variant.value}")
def test_oracle_equivalence(policy, verdict):
    rng = np.random.default_rng([DEFAULT_SEED, 2])
    passed = 0
    worst = 0.0
    for i in range(20):
        instance = BanditInstance(tuple(rng.random(2)))
        budget = 4 + i % 9
        exact = brute_force_regret(instance, policy, budget)
        mean, se = estimate_regret(instance, policy, budget, 10**5, seed=DEFAULT_SEED + i)
        z = abs(mean - exact) / se if se > 0 else (0.0 if mean == exact else math.inf)
        worst = max(worst, z)
        passed += z <= 3.0
    ok = passed >= 18
    verdict(f"MC vs exact enumeration [{policy.name}/{policy.voi_variant.value}]", ok,
            f"{passed}/20 within 3 SE, worst z={worst:.2f}")
    assert ok


def test_exact_phi_bound_never_above_constant(verdict):
    rng = np.random.default_rng([DEFAULT_SEED, 5])
    violations = 0
    for _ in range(10**5):
        K = int(rng.integers(2, 9))
        counts = rng.integers(1, 1000, K)
        stats = ArmStats.from_means(rng.random(K), [int(c) for c in counts])
        N = int(rng.integers(1, 5000))
        arm = int(rng.integers(0, K))
        alpha, beta = empirical_best_two(stats)
        violations += voi_upper_bound(stats, arm, alpha, beta, N, "phi") > voi_upper_bound(
            stats, arm, alpha, beta, N, "const")
    verdict("exact-phi bound <= constant bound on 1e5 inputs", violations == 0, f"violations={violations}")
    assert violations == 0


def test_voi_against_uct_win_rate(verdict):
    game = GameSpec.parse(DEFAULT_GAME)
    rates = []
    for budget in (256, 512, 1024, 2048):
        row = play_match(VOIRootEngine(), UCTEngine(), game, budget, 1000, seed=DEFAULT_SEED, workers=WORKERS)
        lo, hi = row.interval
        rates.append((budget, row.winrate, lo, hi))
    above = sum(r > 0.5 for _, r, _, _ in rates)
    mirror = play_match(UCTEngine(), UCTEngine(), game, 256, 1000, seed=DEFAULT_SEED, workers=WORKERS)
    m_lo, m_hi = mirror.interval
    mirror_ok = m_lo <= 0.5 <= m_hi and mirror.winrate == 0.5
    ok = above >= 3 and mirror_ok
    detail = " ".join(f"{b}:{r:.3f}[{lo:.3f},{hi:.3f}]" for b, r, lo, hi in rates)
    verdict(f"VOI-root beats UCT at a majority of budgets on {game}", ok,
            f"{detail} above={above}/4 uct-self-play={mirror.winrate:.3f}[{m_lo:.3f},{m_hi:.3f}]")
    assert ok


def test_minimax_recovery(verdict):
    root = TreeGameState(DECEPTIVE)
    (best,) = optimal_moves(root)
    results = {}
    for engine in (UCTEngine(), VOIRootEngine()):
        hits = sum(engine.search(root, 10**4, random.Random(s)).index == best for s in range(1000))
        results[engine.name] = hits
    ok = all(h >= 990 for h in results.values())
    verdict("both engines find the unique minimax move (>=99% of 1000 searches at 1e4)", ok,
            " ".join(f"{k}={v}/1000" for k, v in results.items()))
    assert ok


def test_outputs_identical_across_thread_counts(tmp_path, verdict):
    runs = {
        "bandit": ["bandit", "--arms", "8", "--budgets", "8:64:x2", "--trials", "700", "--policies",
                   "uniform,ucb1,voi", "--seed", "7"],
        "match": ["match", "--game", "ptree:5,4,0.72", "--samples-per-ply", "32,64", "--games", "10",
                  "--seed", "7"],
    }
    same = True
    for name, argv in runs.items():
        blobs = []
        for threads in (1, 2, 3):
            out, svg = tmp_path / f"{name}{threads}.csv", tmp_path / f"{name}{threads}.svg"
            assert main(argv + ["--threads", str(threads), "--out", str(out), "--plot", str(svg)]) == 0
            blobs.append((out.read_bytes(), svg.read_bytes()))
        same &= all(b == blobs[0] for b in blobs)
    verdict("byte-identical CSV and SVG for --threads 1/2/3", same)
    assert same
