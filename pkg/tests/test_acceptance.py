"""End-to-end acceptance checks.

Each check prints one PASS/FAIL line. Run directly (``python tests/test_acceptance.py``)
for a plain report, or through pytest.
"""
import csv
import functools
import json
import os
import subprocess
import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import mannwhitneyu

sys.path.insert(0, str(Path(__file__).parent))
from oracles import bfs_oracle, brute_force_fronts  # noqa: E402

from scenevo.evo import SearchConfig, non_dominated_sort, run_search  # noqa: E402
from scenevo.genome import mutate_change_variable, mutate_exchange, one_point_crossover  # noqa: E402
from scenevo.lkas import LkasProblem, RoadParams, decode_road, simulate_deviation  # noqa: E402
from scenevo.reporting import stats_to_dict, summarize  # noqa: E402
from scenevo.robot import NoPath, RobotProblem, decode_grid, plan_path  # noqa: E402

SEEDS = range(10)
SEARCH = dict(pop_size=50, n_gen=40)
STRAIGHT, LEFT, RIGHT = 0.0, 1.0, 2.0


def report(number, title, ok, elapsed, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({elapsed:.2f} s) {detail}"
    print(line, flush=True)
    return ok


def timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        ok, detail = fn(*args, **kwargs)
        return ok, detail, time.perf_counter() - t0
    return wrapper


@timed
def check_dominance_sort():
    rng = np.random.default_rng(0)
    mismatches = 0
    for _ in range(200):
        n = int(rng.integers(1, 21))
        F = rng.integers(0, 5, size=(n, 2)).astype(float)
        if [sorted(f) for f in non_dominated_sort(F)] != brute_force_fronts(F):
            mismatches += 1
    return mismatches == 0, f"mismatches={mismatches}/200"


@timed
def check_planner():
    problem = RobotProblem()
    rng = np.random.default_rng(1)
    checked = wrong = 0
    while checked < 200:
        grid = decode_grid(problem.sample(rng))
        steps = bfs_oracle(grid.cells, grid.start, grid.goal)
        if steps < 0:
            continue
        try:
            length = plan_path(grid)
        except NoPath:
            length = None
        wrong += length != steps * grid.resolution
        checked += 1
    return wrong == 0, f"wrong={wrong}/200"


def _random_road(rng, with_turn):
    p = RoadParams()
    n = int(rng.integers(p.min_segments, p.max_segments + 1))
    if not with_turn:
        return np.array([[STRAIGHT] * n, rng.uniform(*p.straight_range, size=n)])
    actions = rng.choice([STRAIGHT, LEFT, RIGHT], size=n)
    values = np.where(actions == STRAIGHT, rng.uniform(*p.straight_range, size=n),
                      rng.uniform(*p.angle_range, size=n))
    k = int(rng.integers(n))
    actions[k], values[k] = rng.choice([LEFT, RIGHT]), p.angle_range[1]
    return np.array([actions, values])


@timed
def check_vehicle_model():
    rng = np.random.default_rng(2)
    straight = [simulate_deviation(decode_road(_random_road(rng, False))).max_deviation for _ in range(50)]
    turns = [simulate_deviation(decode_road(_random_road(rng, True))).max_deviation for _ in range(50)]
    ok = max(straight) < 0.2 and min(turns) > max(straight)
    return ok, f"straight max={max(straight):.4f} m, turn min={min(turns):.4f} m"


@timed
def check_operators():
    rng = np.random.default_rng(3)
    spaces = [LkasProblem().space, RobotProblem().space]
    violations = Counter()
    for i in range(10_000):
        space = spaces[i % 2]
        a, b = space.sample(rng), space.sample(rng)
        c1, c2 = one_point_crossover(a, b, rng)
        if c1.shape[1] + c2.shape[1] != a.shape[1] + b.shape[1] or c1.shape[0] != a.shape[0]:
            violations["crossover"] += 1
        ex = mutate_exchange(a, rng)
        if sorted(map(tuple, ex.T)) != sorted(map(tuple, a.T)):
            violations["exchange"] += 1
        cv = mutate_change_variable(a, space, rng)
        if cv.shape != a.shape or np.count_nonzero(cv != a) > 1 or not space.is_valid(cv):
            violations["change_variable"] += 1
    return not violations, f"violations={dict(violations) or 0} over 3x10^4 applications"


def _summarized_run(problem, algo, seed):
    config = SearchConfig(seed=seed, **SEARCH)
    pop, stats = run_search(problem, config, algo)
    summarize(pop, stats, problem, config.test_suite_size)
    return stats


def _best(stats):
    return max(stats.convergence.values(), default=0.0)


@functools.lru_cache(maxsize=None)
def search_runs():
    """Robot runs shared by criteria 5-7: {algorithm: [RunStats per seed]}, and the wall time."""
    problem = RobotProblem()
    t0 = time.perf_counter()
    runs = {algo: [_summarized_run(problem, algo, s) for s in SEEDS]
            for algo in ("random", "ga", "nsga2")}
    return runs, time.perf_counter() - t0


@timed
def check_effectiveness():
    runs, elapsed = search_runs()
    best = {a: [_best(s) for s in runs[a]] for a in runs}
    parts, ok = [], elapsed < 300
    for algo in ("ga", "nsga2"):
        p = mannwhitneyu(best[algo], best["random"], alternative="greater").pvalue
        ok &= bool(np.mean(best[algo]) > np.mean(best["random"]) and p < 0.05)
        parts.append(f"{algo} mean={np.mean(best[algo]):.2f} p={p:.2g}")
    parts.append(f"random mean={np.mean(best['random']):.2f}, search time {elapsed:.1f} s")
    return ok, ", ".join(parts)


@timed
def check_diversity():
    runs, _ = search_runs()
    nsga2 = np.mean([s.suite_novelty for s in runs["nsga2"]])
    ga = np.mean([s.suite_novelty for s in runs["ga"]])
    return nsga2 >= ga, f"nsga2 novelty={nsga2:.3f}, ga novelty={ga:.3f}"


@timed
def check_elitism_determinism():
    runs, _ = search_runs()
    decreasing = 0
    for stats_list in runs.values():
        for stats in stats_list:
            values = [stats.convergence[k] for k in sorted(stats.convergence)]
            decreasing += any(b < a for a, b in zip(values, values[1:]))
    problem = RobotProblem()
    differing = 0
    for algo in runs:
        seed = SEEDS[-1]
        again = _summarized_run(problem, algo, seed)
        first = json.dumps(stats_to_dict(runs[algo][seed], problem.name), indent=2)
        second = json.dumps(stats_to_dict(again, problem.name), indent=2)
        differing += first != second
    ok = decreasing == 0 and differing == 0
    return ok, f"non-monotone runs={decreasing}, non-reproducible reruns={differing}/3"


def _csv_well_formed(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if len(rows) < 2 or any(len(r) != len(rows[0]) for r in rows):
        return False
    for row in rows[1:]:
        for cell in row[1:]:
            try:
                float(cell)
            except ValueError:
                return False
    return True


@timed
def check_cli(workdir):
    workdir = Path(workdir)
    cmd = [sys.executable, "-m", "scenevo"]
    env = dict(os.environ)
    t0 = time.perf_counter()
    for algo in ("nsga2", "random"):
        subprocess.run(cmd + ["optimize", "--problem", "robot", "--algo", algo, "--runs", "2",
                              "--save_results", "true"], cwd=workdir, env=env, check=True,
                       stdout=subprocess.DEVNULL)
    subprocess.run(cmd + ["compare", "--stats_path", "stats_nsga2", "stats_random",
                          "--stats_names", "NSGA-II", "Random"], cwd=workdir, env=env, check=True,
                   stdout=subprocess.DEVNULL)
    elapsed = time.perf_counter() - t0
    problems = []
    T = 30
    for algo in ("nsga2", "random"):
        n_stats = len(list((workdir / f"stats_{algo}").glob("stats_run_*.json")))
        if n_stats != 2:
            problems.append(f"{algo}: {n_stats} stats files")
        for run in range(2):
            n_tc = len(list((workdir / f"tcs_{algo}" / f"run_{run}").glob("tc_*.json")))
            n_img = len(list((workdir / f"images_{algo}" / f"run_{run}").glob("tc_*.svg")))
            if n_tc != T or n_img != T:
                problems.append(f"{algo} run {run}: {n_tc} scenarios, {n_img} images")
    for name in ("convergence", "fitness_box", "diversity_box"):
        base = workdir / "comparison" / name
        if not base.with_suffix(".svg").is_file() or not _csv_well_formed(base.with_suffix(".csv")):
            problems.append(f"{name} artifact missing or malformed")
    if elapsed >= 180:
        problems.append(f"took {elapsed:.1f} s")
    return not problems, "; ".join(problems) or f"all artifacts present, CLI time {elapsed:.1f} s"


CRITERIA = [
    (1, "dominance sort equals brute force", check_dominance_sort, 5),
    (2, "planner equals BFS oracle", check_planner, 10),
    (3, "vehicle model sanity", check_vehicle_model, 30),
    (4, "operator invariants", check_operators, None),
    (5, "GA and NSGA-II beat random", check_effectiveness, None),
    (6, "NSGA-II suites at least as diverse as GA", check_diversity, None),
    (7, "elitism and determinism", check_elitism_determinism, None),
]


@pytest.mark.parametrize("number, title, check, limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, limit, capsys):
    ok, detail, elapsed = check()
    if limit is not None and elapsed >= limit:
        ok, detail = False, f"{detail}; exceeded {limit} s"
    with capsys.disabled():
        print()
        report(number, title, ok, elapsed, detail)
    assert ok, detail


def test_criterion_8_cli(tmp_path, capsys):
    ok, detail, elapsed = check_cli(tmp_path)
    with capsys.disabled():
        print()
        report(8, "end-to-end CLI contract", ok, elapsed, detail)
    assert ok, detail


def main():
    import tempfile
    results = []
    for number, title, check, limit in CRITERIA:
        ok, detail, elapsed = check()
        ok = ok and (limit is None or elapsed < limit)
        results.append(report(number, title, ok, elapsed, detail))
    with tempfile.TemporaryDirectory() as d:
        ok, detail, elapsed = check_cli(d)
        results.append(report(8, "end-to-end CLI contract", ok, elapsed, detail))
    print(f"{sum(results)}/{len(results)} criteria passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
