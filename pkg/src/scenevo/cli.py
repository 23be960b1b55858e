"""Command-line entry point: ``scenevo optimize`` and ``scenevo compare``."""
from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import reporting
from .config import Config, ConfigError, config_from_dict, load_config
from .evo import ALGORITHMS, run_search
from .lkas import LkasProblem
from .robot import RobotProblem

PROBLEMS = ("lkas", "robot")
DEFAULT_SEED = 2023
DEFAULT_CONFIG = "config.json"


def make_problem(name: str, config: Config):
    if name == "lkas":
        return LkasProblem(config.lkas)
    if name == "robot":
        return RobotProblem(config.robot)
    raise ValueError(f"unknown problem {name!r}")


def parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def output_paths(config: Config, algo: str) -> reporting.RunPaths:
    """Per-algorithm output directories, e.g. ``stats_nsga2`` for ``stats_path = "stats"``."""
    f = config.files
    return reporting.RunPaths.from_strings(
        f"{f.stats_path}_{algo}", f"{f.tcs_path}_{algo}", f"{f.images_path}_{algo}")


def _one_run(problem_name, algo, config_doc, seed, run_index, save, verbose):
    config = config_from_dict(config_doc)
    problem = make_problem(problem_name, config)
    display = print if verbose else None
    if display:
        print(f"Run {run_index} (seed {seed})")
    population, stats = run_search(problem, config.ga.search(seed), algo, display=display)
    suite = reporting.summarize(population, stats, problem, config.ga.test_suite_size)
    if save:
        reporting.save_run(suite, stats, output_paths(config, algo), run_index, problem)
    n_fail = sum(problem.is_failure(f) for f in stats.suite_fitness)
    best = max(stats.convergence.values()) if stats.convergence else float("nan")
    return run_index, seed, best, stats.suite_novelty, n_fail, stats.runtime_s, stats.warnings


def cmd_optimize(args) -> int:
    try:
        if args.config is None and not Path(DEFAULT_CONFIG).exists():
            config = Config()
        else:
            config = load_config(args.config or DEFAULT_CONFIG)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    base = DEFAULT_SEED if args.seed is None else args.seed
    print(f"Problem: {args.problem}, algorithm: {args.algo}, runs: {args.runs}, base seed: {base}")
    t0 = time.perf_counter()
    jobs = [(args.problem, args.algo, config.to_dict(), base + i, i, args.save_results,
             args.jobs == 1) for i in range(args.runs)]
    try:
        if args.jobs == 1:
            results = [_one_run(*j) for j in jobs]
        else:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_one_run, *zip(*jobs)))
    except reporting.ReportingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for i, seed, best, nov, n_fail, runtime, warnings in results:
        line = (f"Run {i}: seed {seed}, best fitness {best:.4f}, suite novelty {nov:.4f}, "
                f"failures {n_fail}, runtime {runtime:.2f} s")
        if warnings:
            line += f" [warnings: {'; '.join(warnings)}]"
        print(line)
    print(f"Completed {args.runs} run(s) in {time.perf_counter() - t0:.2f} s")
    if args.save_results:
        paths = output_paths(config, args.algo)
        print(f"Stats saved in {paths.stats}")
        print(f"Test cases saved in {paths.tcs}")
        print(f"Images saved in {paths.images}")
    return 0


def cmd_compare(args, parser) -> int:
    if len(args.stats_path) < 2:
        parser.error("compare needs at least two --stats_path values")
    if len(args.stats_names) != len(args.stats_path):
        parser.error(f"got {len(args.stats_path)} --stats_path values but "
                     f"{len(args.stats_names)} --stats_names")
    try:
        result = reporting.compare(args.stats_path, args.stats_names, args.out)
    except reporting.ReportingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for key, path in result.files.items():
        print(f"{key}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scenevo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    opt = sub.add_parser("optimize", help="generate test suites with a search algorithm")
    opt.add_argument("--problem", required=True, choices=PROBLEMS)
    opt.add_argument("--algo", required=True, choices=ALGORITHMS)
    opt.add_argument("--runs", type=positive_int, default=1)
    opt.add_argument("--save_results", type=parse_bool, default=False)
    opt.add_argument("--config", default=None,
                     help=f"JSON config (default {DEFAULT_CONFIG}; built-in defaults if absent)")
    opt.add_argument("--seed", type=int, default=None, help=f"base seed (default {DEFAULT_SEED})")
    opt.add_argument("--jobs", type=positive_int, default=1, help="parallel runs")

    cmp_ = sub.add_parser("compare", help="compare stats of several algorithms")
    cmp_.add_argument("--stats_path", nargs="+", required=True)
    cmp_.add_argument("--stats_names", nargs="+", required=True)
    cmp_.add_argument("--out", default="comparison")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "optimize":
        return cmd_optimize(args)
    return cmd_compare(args, parser)


if __name__ == "__main__":
    sys.exit(main())
