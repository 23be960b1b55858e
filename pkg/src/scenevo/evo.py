"""Evolutionary search engine: random search, single-objective GA and NSGA-II.

All comparisons use a minimisation convention. Fitness (fault-revealing
power) and novelty are maximised quantities, so they enter objective vectors
negated. Infeasible individuals (constraint violation > 0) always lose to
feasible ones and are ranked among themselves by violation magnitude.
"""
from __future__ import annotations

import math
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import genome
from .kernels import nondominated_ranks

ALGORITHMS = ("random", "ga", "nsga2")
NOVELTY_REFERENCES = 5


@dataclass
class Evaluation:
    fitness: float
    cv: float = 0.0
    truncated: bool = False


class Problem(ABC):
    """A system under test: how to sample, score and compare scenarios."""

    name = "problem"

    def __init__(self, space: genome.ScenarioSpace):
        self.space = space

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.space.sample(rng)

    @abstractmethod
    def evaluate(self, genes: np.ndarray) -> Evaluation:
        """Fitness and constraint violation of one scenario."""

    def evaluate_fitness(self, genes: np.ndarray) -> float:
        return self.evaluate(genes).fitness

    def validate(self, genes: np.ndarray) -> float:
        return self.evaluate(genes).cv

    @abstractmethod
    def novelty(self, a: np.ndarray, b: np.ndarray) -> float:
        """Dissimilarity in [0, 1]; symmetric and zero for identical scenarios."""

    def crossover(self, a, b, rng):
        return genome.one_point_crossover(a, b, rng)

    def mutate(self, s, rng):
        return genome.mutate(s, self.space, rng)

    def is_failure(self, fitness: float) -> bool:
        return False


@dataclass
class SearchConfig:
    pop_size: int = 150
    n_gen: int = 200
    mut_rate: float = 0.4
    cross_rate: float = 0.9
    test_suite_size: int = 30
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if int(self.pop_size) != self.pop_size or self.pop_size < 2:
            raise ValueError(f"pop_size must be an integer > 1, got {self.pop_size}")
        if int(self.n_gen) != self.n_gen or self.n_gen < 1:
            raise ValueError(f"n_gen must be an integer >= 1, got {self.n_gen}")
        for name in ("mut_rate", "cross_rate"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be a probability in [0, 1], got {value}")
        if int(self.test_suite_size) != self.test_suite_size or self.test_suite_size < 1:
            raise ValueError(f"test_suite_size must be an integer >= 1, got {self.test_suite_size}")
        if self.test_suite_size > self.pop_size:
            raise ValueError(
                f"test_suite_size ({self.test_suite_size}) must not exceed pop_size ({self.pop_size})")


@dataclass(eq=False)
class Individual:
    genes: np.ndarray
    fitness: float = 0.0
    cv: float = 0.0
    evaluation_index: int = 0
    novelty: float = 0.0
    rank: int = 0
    crowding: float = 0.0
    truncated: bool = False

    @property
    def feasible(self) -> bool:
        return self.cv == 0.0

    def objectives(self, n_obj: int = 2) -> np.ndarray:
        if n_obj == 1:
            return np.array([-self.fitness])
        return np.array([-self.fitness, -self.novelty])


@dataclass
class RunStats:
    algorithm: str
    seed: int
    convergence: dict[int, float] = field(default_factory=dict)
    suite_fitness: list[float] = field(default_factory=list)
    suite_novelty: float = 0.0
    runtime_s: float = 0.0
    n_evals: int = 0
    n_truncated: int = 0
    warnings: list[str] = field(default_factory=list)


def _objective_matrix(population) -> np.ndarray:
    if len(population) and isinstance(population[0], Individual):
        return np.array([ind.objectives() for ind in population], dtype=float)
    F = np.asarray(population, dtype=float)
    return F.reshape(len(population), -1)


def non_dominated_sort(population) -> list[list[int]]:
    """Pareto fronts as lists of indices, best front first.

    Accepts an (n, m) objective array or a list of individuals.
    """
    if len(population) == 0:
        return []
    ranks = nondominated_ranks(_objective_matrix(population))
    fronts = [[] for _ in range(int(ranks.max()) + 1)]
    for i, r in enumerate(ranks):
        fronts[int(r)].append(i)
    return fronts


def crowding_distance(front) -> np.ndarray:
    """NSGA-II crowding distance of each member of one front.

    Boundary members of every objective get ``inf``; an objective whose
    values are all equal contributes nothing.
    """
    F = _objective_matrix(front)
    n, m = F.shape
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for k in range(m):
        order = np.argsort(F[:, k], kind="stable")
        values = F[order, k]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = values[-1] - values[0]
        if span == 0.0:
            continue
        gaps = (values[2:] - values[:-2]) / span
        dist[order[1:-1]] += gaps
    return dist


def _tournament_key(ind: Individual, multi_objective: bool):
    if multi_objective:
        return (ind.cv, ind.rank, -ind.crowding)
    return (ind.cv, -ind.fitness)


def binary_tournament_select(population: Sequence[Individual], rng: np.random.Generator,
                             multi_objective: bool = False) -> Individual:
    """Pick two at random; feasibility first, then objective rank, then lower index."""
    n = len(population)
    if n == 1:
        return population[0]
    i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
    ki = (_tournament_key(population[i], multi_objective), i)
    kj = (_tournament_key(population[j], multi_objective), j)
    return population[i] if ki <= kj else population[j]


ProgressFn = Callable[[str], None]


class _Run:
    """Evaluation bookkeeping shared by the three algorithms."""

    def __init__(self, problem: Problem, config: SearchConfig, algorithm: str,
                 display: ProgressFn | None):
        config.validate()
        self.problem = problem
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self.stats = RunStats(algorithm=algorithm, seed=config.seed)
        self.display = display
        self.best = -math.inf
        self.n_gen = 0
        self._t0 = time.perf_counter()
        if display is not None:
            extra = "n_nds" if algorithm == "nsga2" else "f_opt"
            display("=" * 56)
            display(f"{'n_gen':>7} | {'n_eval':>8} | {'cv_min':>14} | {extra:>14}")
            display("=" * 56)

    def evaluate(self, genes: np.ndarray) -> Individual:
        ev = self.problem.evaluate(genes)
        self.stats.n_evals += 1
        if ev.truncated:
            self.stats.n_truncated += 1
        ind = Individual(genes=genes, fitness=float(ev.fitness), cv=float(ev.cv),
                         evaluation_index=self.stats.n_evals, truncated=ev.truncated)
        if ind.feasible and ind.fitness > self.best:
            self.best = ind.fitness
        return ind

    def end_generation(self, population: Sequence[Individual], n_nds: int | None = None):
        self.n_gen += 1
        if self.best > -math.inf:
            self.stats.convergence[self.stats.n_evals] = self.best
        if self.display is not None:
            cv_min = min((ind.cv for ind in population), default=math.nan)
            extra = f"{n_nds:>14d}" if n_nds is not None else (
                f"{self.best:>14.6f}" if self.best > -math.inf else f"{'-':>14}")
            self.display(f"{self.n_gen:>7d} | {self.stats.n_evals:>8d} | {cv_min:>14.6E} | {extra}")

    def finish(self):
        self.stats.runtime_s = time.perf_counter() - self._t0
        if not self.stats.convergence:
            self.stats.warnings.append("no feasible scenario found")
        if self.stats.n_truncated:
            self.stats.warnings.append(f"{self.stats.n_truncated} evaluations hit the simulation step cap")
        return self.stats


MAX_MATING_ATTEMPTS = 100


def _genes_key(genes: np.ndarray):
    return genes.shape, genes.tobytes()


def _make_offspring(run: _Run, population: list[Individual], multi_objective: bool) -> list[Individual]:
    """``pop_size`` new scenarios; clones of existing ones are discarded and re-bred.

    After ``MAX_MATING_ATTEMPTS`` rounds without filling the quota,
    duplicates are accepted so the evaluation budget stays exact.
    """
    cfg, rng, problem = run.config, run.rng, run.problem
    seen = {_genes_key(ind.genes) for ind in population}
    children: list[np.ndarray] = []
    attempts = 0
    while len(children) < cfg.pop_size:
        attempts += 1
        p1 = binary_tournament_select(population, rng, multi_objective)
        p2 = binary_tournament_select(population, rng, multi_objective)
        if rng.random() < cfg.cross_rate:
            c1, c2 = problem.crossover(p1.genes, p2.genes, rng)
        else:
            c1, c2 = p1.genes.copy(), p2.genes.copy()
        for child in (c1, c2):
            if rng.random() < cfg.mut_rate:
                child = problem.mutate(child, rng)
            key = _genes_key(child)
            if key in seen and attempts <= MAX_MATING_ATTEMPTS * cfg.pop_size:
                continue
            seen.add(key)
            children.append(child)
    return [run.evaluate(g) for g in children[:cfg.pop_size]]


def run_random(problem: Problem, config: SearchConfig,
               display: ProgressFn | None = None) -> tuple[list[Individual], RunStats]:
    """Budget-matched random sampling; keeps the ``pop_size`` best feasible samples."""
    run = _Run(problem, config, "random", display)
    retained: list[Individual] = []
    for _ in range(config.n_gen):
        batch = [run.evaluate(problem.sample(run.rng)) for _ in range(config.pop_size)]
        pool = retained + [ind for ind in batch if ind.feasible]
        pool.sort(key=lambda ind: (-ind.fitness, ind.evaluation_index))
        retained = pool[:config.pop_size]
        run.end_generation(batch)
    return retained, run.finish()


def _ga_survival(population: list[Individual], n: int) -> list[Individual]:
    order = sorted(range(len(population)),
                   key=lambda i: (population[i].cv, -population[i].fitness, i))
    return [population[i] for i in order[:n]]


def run_ga(problem: Problem, config: SearchConfig,
           display: ProgressFn | None = None) -> tuple[list[Individual], RunStats]:
    """Single-objective elitist GA maximising fitness."""
    run = _Run(problem, config, "ga", display)
    population = [run.evaluate(problem.sample(run.rng)) for _ in range(config.pop_size)]
    population = _ga_survival(population, config.pop_size)
    run.end_generation(population)
    for _ in range(config.n_gen - 1):
        offspring = _make_offspring(run, population, multi_objective=False)
        population = _ga_survival(population + offspring, config.pop_size)
        run.end_generation(population)
    return population, run.finish()


def novelty_references(population: Sequence[Individual], k: int = NOVELTY_REFERENCES) -> list[Individual]:
    """The ``k`` fittest individuals (feasible first), or all if fewer exist."""
    order = sorted(range(len(population)),
                   key=lambda i: (population[i].cv, -population[i].fitness, i))
    return [population[i] for i in order[:k]]


def assign_novelty(population: Sequence[Individual], problem: Problem) -> None:
    refs = novelty_references(population)
    for ind in population:
        ind.novelty = float(np.mean([problem.novelty(ind.genes, r.genes) for r in refs]))


def _rank_and_crowd(population: list[Individual]) -> list[list[int]]:
    fronts = non_dominated_sort(population)
    for r, front in enumerate(fronts):
        members = [population[i] for i in front]
        for ind, d in zip(members, crowding_distance(members)):
            ind.rank = r
            ind.crowding = float(d)
    return fronts


def _nsga2_survival(population: list[Individual], n: int) -> tuple[list[Individual], int]:
    """Feasible individuals by front and crowding, then infeasible by violation.

    Returns the survivors and the size of the first front.
    """
    feasible = [ind for ind in population if ind.feasible]
    infeasible = sorted((ind for ind in population if not ind.feasible), key=lambda ind: ind.cv)
    survivors: list[Individual] = []
    n_nds = 0
    if feasible:
        fronts = _rank_and_crowd(feasible)
        n_nds = len(fronts[0])
        for front in fronts:
            members = [feasible[i] for i in front]
            if len(survivors) + len(members) <= n:
                survivors.extend(members)
                continue
            members = sorted(members, key=lambda ind: -ind.crowding)
            survivors.extend(members[:n - len(survivors)])
            break
    worst = (survivors[-1].rank + 1) if survivors else 0
    for ind in infeasible[:n - len(survivors)]:
        ind.rank = worst
        ind.crowding = 0.0
        survivors.append(ind)
    return survivors, n_nds


def run_nsga2(problem: Problem, config: SearchConfig,
              display: ProgressFn | None = None) -> tuple[list[Individual], RunStats]:
    """Two-objective NSGA-II maximising fitness and novelty.

    Novelty of an individual is its mean novelty against the five fittest
    members of the population it is ranked in.
    """
    run = _Run(problem, config, "nsga2", display)
    population = [run.evaluate(problem.sample(run.rng)) for _ in range(config.pop_size)]
    assign_novelty(population, problem)
    population, n_nds = _nsga2_survival(population, config.pop_size)
    run.end_generation(population, n_nds)
    for _ in range(config.n_gen - 1):
        offspring = _make_offspring(run, population, multi_objective=True)
        merged = population + offspring
        assign_novelty(merged, problem)
        population, n_nds = _nsga2_survival(merged, config.pop_size)
        run.end_generation(population, n_nds)
    return population, run.finish()


def run_search(problem: Problem, config: SearchConfig, algorithm: str,
               display: ProgressFn | None = None) -> tuple[list[Individual], RunStats]:
    try:
        fn = {"random": run_random, "ga": run_ga, "nsga2": run_nsga2}[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}") from None
    return fn(problem, config, display)
