"""Test-suite extraction, run persistence and cross-algorithm comparison."""
from __future__ import annotations

import csv
import json
import logging
import math
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from .evo import Individual, Problem, RunStats, crowding_distance, non_dominated_sort
from .genome import scenario_to_dict

log = logging.getLogger(__name__)

STATS_PATTERN = re.compile(r"^stats_run_(\d+)\.json$")


class ReportingError(RuntimeError):
    pass


@dataclass
class TestSuite:
    entries: list[Individual]
    size: int
    warnings: list[str] = field(default_factory=list)
    pairwise_novelty: np.ndarray | None = None

    __test__ = False  # not a pytest class

    @property
    def fitness(self) -> list[float]:
        return [ind.fitness for ind in self.entries]

    def __len__(self):
        return len(self.entries)


def get_test_suite(population: Sequence[Individual], size: int, algorithm: str) -> TestSuite:
    """The ``size`` best feasible scenarios, highest fitness first.

    GA and random search rank by fitness. NSGA-II fills the suite front by
    front, preferring larger crowding distance inside the last front used.
    """
    order = [i for i, ind in enumerate(population) if ind.feasible]
    warnings = []
    if len(order) < size:
        warnings.append(f"only {len(order)} feasible scenarios for a suite of {size}")
    if algorithm == "nsga2" and len(order) > size:
        feasible = [population[i] for i in order]
        chosen: list[int] = []
        for front in non_dominated_sort(feasible):
            if len(chosen) + len(front) <= size:
                chosen.extend(front)
                continue
            dist = crowding_distance([feasible[i] for i in front])
            ranked = sorted(range(len(front)), key=lambda k: (-dist[k], front[k]))
            chosen.extend(front[k] for k in ranked[:size - len(chosen)])
            break
        order = [order[i] for i in chosen]
    order.sort(key=lambda i: (-population[i].fitness, i))
    return TestSuite(entries=[population[i] for i in order[:size]], size=size, warnings=warnings)


def suite_novelty(suite: TestSuite, problem: Problem) -> float:
    """Mean novelty over all unordered pairs of suite scenarios (0 for fewer than two)."""
    n = len(suite.entries)
    matrix = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        matrix[i, j] = matrix[j, i] = problem.novelty(suite.entries[i].genes, suite.entries[j].genes)
    suite.pairwise_novelty = matrix
    if n < 2:
        return 0.0
    return float(matrix[np.triu_indices(n, 1)].mean())


def summarize(population, stats: RunStats, problem: Problem, size: int) -> TestSuite:
    """Extract the suite and fill the suite fields of ``stats`` in place."""
    suite = get_test_suite(population, size, stats.algorithm)
    stats.suite_fitness = suite.fitness
    stats.suite_novelty = suite_novelty(suite, problem)
    stats.warnings.extend(suite.warnings)
    return suite


def stats_to_dict(stats: RunStats, problem_name: str) -> dict:
    """Stats document; wall-clock runtime is kept out so reruns are byte-identical."""
    return {
        "problem": problem_name,
        "algorithm": stats.algorithm,
        "seed": stats.seed,
        "n_evals": stats.n_evals,
        "convergence": {str(k): v for k, v in stats.convergence.items()},
        "suite_fitness": list(stats.suite_fitness),
        "suite_novelty": stats.suite_novelty,
        "warnings": list(stats.warnings),
    }


def load_stats(path: str | Path) -> dict:
    with open(path) as f:
        doc = json.load(f)
    doc["convergence"] = {int(k): float(v) for k, v in doc["convergence"].items()}
    return doc


def _write_text(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ReportingError(f"cannot write {path}: {exc}") from exc


@dataclass
class RunPaths:
    stats: Path
    tcs: Path
    images: Path

    @classmethod
    def from_strings(cls, stats, tcs, images):
        return cls(Path(stats), Path(tcs), Path(images))


def save_run(suite: TestSuite, stats: RunStats, paths: RunPaths, run_index: int,
             problem: Problem, images: bool = True) -> list[Path]:
    """Write stats, per-scenario JSON and per-scenario SVG for one run."""
    written = []
    stats_file = paths.stats / f"stats_run_{run_index}.json"
    _write_text(stats_file, json.dumps(stats_to_dict(stats, problem.name), indent=2) + "\n")
    written.append(stats_file)
    timing_file = paths.stats / f"timing_run_{run_index}.json"
    _write_text(timing_file, json.dumps({"runtime_s": stats.runtime_s}) + "\n")
    written.append(timing_file)

    names = problem.space.names
    for rank, ind in enumerate(suite.entries):
        doc = scenario_to_dict(ind.genes, names)
        doc["fitness"] = ind.fitness
        doc["failure"] = problem.is_failure(ind.fitness)
        if hasattr(problem, "environment"):
            doc["environment"] = problem.environment(ind.genes)
        tc_file = paths.tcs / f"run_{run_index}" / f"tc_{rank}.json"
        _write_text(tc_file, json.dumps(doc) + "\n")
        written.append(tc_file)
        if images and hasattr(problem, "render"):
            img = paths.images / f"run_{run_index}" / f"tc_{rank}.svg"
            try:
                img.parent.mkdir(parents=True, exist_ok=True)
                problem.render(ind.genes, img, title=f"fitness = {ind.fitness:.3f}")
            except OSError as exc:
                raise ReportingError(f"cannot write {img}: {exc}") from exc
            written.append(img)
    return written


def five_number_summary(values: Sequence[float]) -> tuple[float, float, float, float, float]:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("no values to summarise")
    q = np.percentile(v, [0, 25, 50, 75, 100])
    return tuple(float(x) for x in q)


def align_convergence(runs: Sequence[dict[int, float]]) -> tuple[list[int], list[float]]:
    """Mean best fitness over runs on the union evaluation grid.

    Each run carries its last value forward; before its first entry a run
    does not contribute. Grid points with no contributing run get NaN.
    """
    grid = sorted(set().union(*[r.keys() for r in runs])) if runs else []
    means = []
    for x in grid:
        vals = []
        for r in runs:
            keys = [k for k in r if k <= x]
            if keys:
                vals.append(r[max(keys)])
        means.append(float(np.mean(vals)) if vals else math.nan)
    return grid, means


def stats_files(directory: str | Path) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise ReportingError(f"stats directory {d} does not exist")
    found = [(int(m.group(1)), p) for p in d.iterdir() if (m := STATS_PATTERN.match(p.name))]
    if not found:
        raise ReportingError(f"stats directory {d} contains no stats_run_<i>.json files")
    return [p for _, p in sorted(found)]


@dataclass
class Comparison:
    names: list[str]
    grid: list[int]
    convergence: dict[str, list[float]]
    fitness_box: dict[str, tuple]
    diversity_box: dict[str, tuple]
    files: dict[str, Path] = field(default_factory=dict)


def _write_csv(path: Path, header, rows):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise ReportingError(f"cannot write {path}: {exc}") from exc


def compare(stats_dirs: Sequence[str | Path], names: Sequence[str],
            out_dir: str | Path = "comparison") -> Comparison:
    """Convergence curves and fitness/diversity box summaries for several algorithms."""
    if len(stats_dirs) != len(names):
        raise ValueError(f"{len(stats_dirs)} stats directories but {len(names)} names")
    if len(stats_dirs) < 2:
        raise ValueError("need at least two stats directories to compare")
    out = Path(out_dir)
    docs = {name: [load_stats(p) for p in stats_files(d)] for d, name in zip(stats_dirs, names)}

    curves = {}
    for name, runs in docs.items():
        curves[name] = align_convergence([r["convergence"] for r in runs])
    grid = sorted(set().union(*[set(g) for g, _ in curves.values()]))
    conv = {}
    for name, (g, m) in curves.items():
        lookup = dict(zip(g, m))
        # carry the mean forward onto the shared grid
        last, col = math.nan, []
        for x in grid:
            last = lookup.get(x, last)
            col.append(last)
        conv[name] = col

    fitness_box, diversity_box = {}, {}
    for name, runs in docs.items():
        fit = [f for r in runs for f in r["suite_fitness"]]
        div = [r["suite_novelty"] for r in runs]
        fitness_box[name] = (len(fit), *five_number_summary(fit)) if fit else (0,) + (math.nan,) * 5
        diversity_box[name] = (len(div), *five_number_summary(div))

    result = Comparison(list(names), grid, conv, fitness_box, diversity_box)
    files = result.files
    files["convergence_csv"] = out / "convergence.csv"
    _write_csv(files["convergence_csv"], ["evaluations", *names],
               [[x, *(_fmt(conv[n][i]) for n in names)] for i, x in enumerate(grid)])
    box_header = ["name", "n", "min", "q1", "median", "q3", "max"]
    for key, box in (("fitness_box", fitness_box), ("diversity_box", diversity_box)):
        files[f"{key}_csv"] = out / f"{key}.csv"
        _write_csv(files[f"{key}_csv"], box_header,
                   [[n, box[n][0], *(_fmt(v) for v in box[n][1:])] for n in names])

    from .render import plot_boxes, plot_convergence
    files["convergence_svg"] = out / "convergence.svg"
    plot_convergence(grid, conv, files["convergence_svg"])
    files["fitness_box_svg"] = out / "fitness_box.svg"
    plot_boxes({n: [f for r in docs[n] for f in r["suite_fitness"]] for n in names},
               files["fitness_box_svg"], ylabel="Scenario fitness")
    files["diversity_box_svg"] = out / "diversity_box.svg"
    plot_boxes({n: [r["suite_novelty"] for r in docs[n]] for n in names},
               files["diversity_box_svg"], ylabel="Test suite diversity")
    return result


def _fmt(v: float) -> str:
    return "" if math.isnan(v) else repr(float(v))
