"""Command-line front end: ``voisearch bandit | match | oracle-check``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from voisearch.bandit import PreconditionError
from voisearch.harness import (
    ExperimentConfig,
    brute_force_regret,
    estimate_regret,
    generate_instance,
    run_experiment,
)
from voisearch.mcts.games import GameSpec
from voisearch.mcts.match import run_match
from voisearch.mcts.search import DEFAULT_UCT_C, UCTEngine, VOIRootEngine
from voisearch.plot import emit_plot
from voisearch.policies import PolicyKind

log = logging.getLogger("voisearch")

DEFAULT_SEED = 20120827
DEFAULT_GAME = "ptree:8,4,0.79"


def parse_budgets(text: str) -> list[int]:
    """``32:1024:x2`` for a geometric sweep, otherwise a comma list."""
    text = text.strip()
    try:
        if ":" in text:
            start, end, step = text.split(":")
            if not step.startswith("x"):
                raise ValueError
            start, end, factor = int(start), int(end), int(step[1:])
            if start < 1 or factor < 2 or end < start:
                raise ValueError
            out = []
            b = start
            while b <= end:
                out.append(b)
                b *= factor
            return out
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad budget list {text!r}; use 32:1024:x2 or 8,16,32") from None
    if not out or any(b < 1 for b in out):
        raise argparse.ArgumentTypeError(f"bad budget list {text!r}")
    return out


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=_seed, default=DEFAULT_SEED,
                        help=f"master seed (default {DEFAULT_SEED})")
    shared.add_argument("--out", type=Path, help="CSV output path (default: stdout)")
    shared.add_argument("--plot", type=Path, help="also write an SVG chart here")
    shared.add_argument("--threads", type=_positive_int, default=1,
                        help="worker processes; results do not depend on it")
    shared.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="voisearch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bandit", parents=[shared], help="simple regret on random Bernoulli bandits")
    p.add_argument("--arms", type=int, default=32)
    p.add_argument("--budgets", type=parse_budgets, default=parse_budgets("32:1024:x2"))
    p.add_argument("--trials", type=_positive_int, default=10000)
    p.add_argument("--policies", default="ucb1,voi", help="comma list of uniform|ucb1|voi")
    p.add_argument("--voi-variant", choices=("const", "phi"), default="const")
    p.add_argument("--ucb-c", type=float, default=1.0)

    p = sub.add_parser("match", parents=[shared], help="VOI-at-root engine against UCT")
    p.add_argument("--game", default=DEFAULT_GAME, help="ptree:<b>,<d>,<p> or connect4-5x5")
    p.add_argument("--samples-per-ply", type=parse_budgets, default=parse_budgets("256:2048:x2"))
    p.add_argument("--games", type=_positive_int, default=1000)
    p.add_argument("--uct-c", type=float, default=DEFAULT_UCT_C)
    p.add_argument("--voi-variant", choices=("const", "phi"), default="const")

    p = sub.add_parser("oracle-check", parents=[shared],
                       help="Monte-Carlo regret against exact enumeration on one random instance")
    p.add_argument("--arms", type=int, default=2)
    p.add_argument("--budget", type=_positive_int, default=8)
    p.add_argument("--policy", choices=("uniform", "ucb1", "voi"), default="voi")
    p.add_argument("--trials", type=_positive_int, default=100000)
    p.add_argument("--voi-variant", choices=("const", "phi"), default="const")
    p.add_argument("--ucb-c", type=float, default=1.0)
    return parser


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8", newline="\n")
        log.info("wrote %s", out)


def _cmd_bandit(args, parser) -> int:
    try:
        policies = tuple(
            PolicyKind.parse(name, args.voi_variant, args.ucb_c) for name in args.policies.split(",") if name.strip()
        )
        config = ExperimentConfig(args.arms, tuple(args.budgets), args.trials, policies, args.seed)
    except (ValueError, PreconditionError) as err:
        parser.error(str(err))
    table = run_experiment(config, workers=args.threads)
    table.config = {"command": "bandit", **table.config}
    _write(table.to_csv(), args.out)
    if args.plot:
        emit_plot(table, args.plot)
    return 0


def _cmd_match(args, parser) -> int:
    try:
        game = GameSpec.parse(args.game)
        voi = VOIRootEngine(args.uct_c, args.voi_variant)
        uct = UCTEngine(args.uct_c)
    except PreconditionError as err:
        parser.error(str(err))
    report = run_match(voi, uct, game, args.samples_per_ply, args.games, args.seed, workers=args.threads)
    report.config = {"command": "match", "uct_c": args.uct_c, "voi_variant": args.voi_variant, **report.config}
    _write(report.to_csv(), args.out)
    if args.plot:
        emit_plot(report, args.plot)
    return 0


def _cmd_oracle(args, parser) -> int:
    try:
        policy = PolicyKind.parse(args.policy, args.voi_variant, args.ucb_c)
        instance = generate_instance(args.arms, np.random.default_rng([args.seed]))
        exact = brute_force_regret(instance, policy, args.budget)
    except PreconditionError as err:
        parser.error(str(err))
    mean, se = estimate_regret(instance, policy, args.budget, args.trials, args.seed, workers=args.threads)
    ok = abs(mean - exact) <= 3.0 * se or mean == exact
    result = {
        "command": "oracle-check",
        "means": list(instance.means),
        "policy": policy.name,
        "voi_variant": policy.voi_variant.value,
        "ucb_c": policy.c,
        "budget": args.budget,
        "trials": args.trials,
        "seed": args.seed,
        "oracle": exact,
        "monte_carlo": mean,
        "stderr": se,
        "z": (mean - exact) / se if se > 0 else 0.0,
        "verdict": "PASS" if ok else "FAIL",
    }
    print(f"oracle      {exact:.17g}")
    print(f"monte-carlo {mean:.17g} +/- {se:.3g}")
    print(result["verdict"])
    if args.out:
        _write(json.dumps(result, indent=2, sort_keys=True) + "\n", args.out)
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handlers = {"bandit": _cmd_bandit, "match": _cmd_match, "oracle-check": _cmd_oracle}
    try:
        return handlers[args.command](args, parser)
    except (OSError, PreconditionError, ValueError) as err:
        print(f"voisearch: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
