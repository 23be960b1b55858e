"""Autonomous robot problem: obstacle walls in a closed room.

Each scenario column is one wall ``(orientation, position, length)``. The
orientation also fixes the side the wall grows from: ``h_left`` walls occupy
row ``position`` starting at the left border, ``h_right`` start at the right
border, ``v_top``/``v_bottom`` occupy column ``position`` from the top or
bottom border. The robot model is a shortest-path planner; a scenario is
more fault-revealing the longer the path it forces.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .evo import Evaluation, Problem
from .genome import GeneSpec, ScenarioSpace
from .kernels import grid_bfs_steps

ORIENTATIONS = ("h_left", "h_right", "v_top", "v_bottom")


@dataclass(frozen=True)
class GridParams:
    width: int = 40
    height: int = 40
    resolution: float = 0.25
    min_walls: int = 10
    max_walls: int = 25
    min_wall_length: int = 2
    max_wall_length: int | None = None

    def __post_init__(self):
        if self.width < 5 or self.height < 5:
            raise ValueError("grid must be at least 5x5 cells")
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        if not (0 <= self.min_walls <= self.max_walls):
            raise ValueError("invalid wall-count bounds")
        if self.max_wall_length is None:
            object.__setattr__(self, "max_wall_length", min(self.width, self.height) - 4)
        if not (1 <= self.min_wall_length <= self.max_wall_length <= max(self.width, self.height) - 2):
            raise ValueError("invalid wall-length bounds")

    @property
    def start(self) -> tuple[int, int]:
        return (1, 1)

    @property
    def goal(self) -> tuple[int, int]:
        return (self.height - 2, self.width - 2)


@dataclass(frozen=True)
class Wall:
    orientation: str
    position: int
    length: int


@dataclass
class OccupancyGrid:
    cells: np.ndarray
    start: tuple[int, int]
    goal: tuple[int, int]
    resolution: float

    @property
    def shape(self):
        return self.cells.shape


class NoPath(Exception):
    """The goal cannot be reached from the start."""


def robot_space(params: GridParams) -> ScenarioSpace:
    interior = min(params.width, params.height) - 2
    specs = [
        GeneSpec("orientation", "categorical", categories=ORIENTATIONS),
        GeneSpec("position", "integer", 1, interior),
        GeneSpec("length", "integer", params.min_wall_length, params.max_wall_length),
    ]
    return ScenarioSpace(specs, (params.min_walls, params.max_walls))


def decode_walls(genes: np.ndarray) -> list[Wall]:
    return [Wall(ORIENTATIONS[int(o)], int(p), int(n)) for o, p, n in genes.T]


def _raster(genes: np.ndarray, params: GridParams) -> np.ndarray:
    """Interior obstacle mask (no border), start/goal kept free."""
    H, W = params.height, params.width
    mask = np.zeros((H, W), dtype=bool)
    for o, pos, length in genes.T:
        o, pos, length = int(o), int(pos), int(length)
        if o == 0:
            mask[min(pos, H - 2), 1:1 + length] = True
        elif o == 1:
            mask[min(pos, H - 2), max(1, W - 1 - length):W - 1] = True
        elif o == 2:
            mask[1:1 + length, min(pos, W - 2)] = True
        else:
            mask[max(1, H - 1 - length):H - 1, min(pos, W - 2)] = True
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = False
    mask[params.start] = False
    mask[params.goal] = False
    return mask


def decode_grid(genes: np.ndarray, params: GridParams = GridParams()) -> OccupancyGrid:
    cells = _raster(genes, params)
    cells[0, :] = cells[-1, :] = cells[:, 0] = cells[:, -1] = True
    return OccupancyGrid(cells=cells, start=params.start, goal=params.goal,
                         resolution=params.resolution)


def plan_path(grid: OccupancyGrid) -> float:
    """Length in metres of a shortest 4-connected path; raises :class:`NoPath`."""
    steps = grid_bfs_steps(grid.cells.view(np.uint8), grid.start, grid.goal)
    if steps < 0:
        raise NoPath(f"goal {grid.goal} unreachable from {grid.start}")
    return steps * grid.resolution


def robot_fitness(genes: np.ndarray, params: GridParams = GridParams()) -> Evaluation:
    try:
        return Evaluation(fitness=plan_path(decode_grid(genes, params)))
    except NoPath:
        return Evaluation(fitness=0.0, cv=1.0)


def _jaccard_distance(a: frozenset, b: frozenset) -> float:
    union = len(a | b)
    if union == 0:
        return 0.0
    return 1.0 - len(a & b) / union


def robot_novelty(a: np.ndarray, b: np.ndarray, params: GridParams = GridParams()) -> float:
    """Jaccard distance between the interior obstacle cell sets."""
    ca = frozenset(np.flatnonzero(_raster(a, params)).tolist())
    cb = frozenset(np.flatnonzero(_raster(b, params)).tolist())
    return _jaccard_distance(ca, cb)


def grid_to_dict(grid: OccupancyGrid) -> dict:
    """Grid export with run-length-encoded rows: ``[[start_col, run_length], ...]``."""
    rows = []
    for row in grid.cells:
        runs, c, W = [], 0, row.size
        while c < W:
            if row[c]:
                start = c
                while c < W and row[c]:
                    c += 1
                runs.append([start, c - start])
            else:
                c += 1
        rows.append(runs)
    H, W = grid.shape
    return {
        "width": int(W),
        "height": int(H),
        "resolution": grid.resolution,
        "start": list(grid.start),
        "goal": list(grid.goal),
        "obstacle_runs": rows,
    }


def grid_from_dict(doc: dict) -> OccupancyGrid:
    cells = np.zeros((doc["height"], doc["width"]), dtype=bool)
    for r, runs in enumerate(doc["obstacle_runs"]):
        for start, length in runs:
            cells[r, start:start + length] = True
    return OccupancyGrid(cells=cells, start=tuple(doc["start"]), goal=tuple(doc["goal"]),
                         resolution=doc["resolution"])


class RobotProblem(Problem):
    name = "robot"

    def __init__(self, params: GridParams = GridParams()):
        super().__init__(robot_space(params))
        self.params = params
        self._cells = lru_cache(maxsize=4096)(self._cells_uncached)

    def _cells_uncached(self, key: bytes, n_cols: int) -> frozenset:
        genes = np.frombuffer(key, dtype=float).reshape(3, n_cols)
        return frozenset(np.flatnonzero(_raster(genes, self.params)).tolist())

    def evaluate(self, genes):
        return robot_fitness(genes, self.params)

    def novelty(self, a, b):
        ca = self._cells(np.ascontiguousarray(a, dtype=float).tobytes(), a.shape[1])
        cb = self._cells(np.ascontiguousarray(b, dtype=float).tobytes(), b.shape[1])
        return _jaccard_distance(ca, cb)

    def environment(self, genes) -> dict:
        return grid_to_dict(decode_grid(genes, self.params))

    def render(self, genes, path, title=None):
        from .render import draw_grid
        draw_grid(decode_grid(genes, self.params), path, title=title)
