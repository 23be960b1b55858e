import numpy as np
import pytest

from oracles import bfs_oracle
from scenevo.robot import (
    GridParams,
    NoPath,
    OccupancyGrid,
    RobotProblem,
    decode_grid,
    decode_walls,
    grid_from_dict,
    grid_to_dict,
    plan_path,
    robot_fitness,
    robot_novelty,
)

H_LEFT, H_RIGHT, V_TOP, V_BOTTOM = range(4)
RES = GridParams().resolution


def walls(*genes):
    if not genes:
        return np.zeros((3, 0))
    return np.array(genes, dtype=float).T


def interior(grid):
    return grid.cells[1:-1, 1:-1]


class TestDecode:
    def test_empty_room(self):
        g = decode_grid(walls())
        assert not interior(g).any()
        assert g.cells[0].all() and g.cells[-1].all() and g.cells[:, 0].all() and g.cells[:, -1].all()

    def test_horizontal_wall(self):
        g = decode_grid(walls((H_LEFT, 20, 10)))
        assert interior(g).sum() == 10
        assert g.cells[20, 1:11].all() and not g.cells[20, 11]

    def test_other_anchors(self):
        g = decode_grid(walls((H_RIGHT, 5, 4), (V_TOP, 7, 3), (V_BOTTOM, 9, 2)))
        assert g.cells[5, 35:39].all() and not g.cells[5, 34]
        assert g.cells[1:4, 7].all() and not g.cells[4, 7]
        assert g.cells[37:39, 9].all() and not g.cells[36, 9]
        assert interior(g).sum() == 9

    def test_goal_clipped(self):
        g = decode_grid(walls((H_RIGHT, 38, 36)))
        assert not g.cells[38, 38]
        assert g.cells[38, 3:38].all()

    def test_start_clipped(self):
        g = decode_grid(walls((V_TOP, 1, 36)))
        assert not g.cells[1, 1]

    def test_decode_walls(self):
        w = decode_walls(walls((V_BOTTOM, 3, 7)))
        assert w[0].orientation == "v_bottom" and w[0].position == 3 and w[0].length == 7

    def test_never_blocks_start_goal(self):
        problem = RobotProblem()
        rng = np.random.default_rng(0)
        for _ in range(300):
            g = decode_grid(problem.sample(rng))
            assert not g.cells[g.start] and not g.cells[g.goal]
            assert g.cells[0].all() and g.cells[:, -1].all()


class TestPlanPath:
    def test_empty_room(self):
        g = decode_grid(walls())
        assert bfs_oracle(g.cells, g.start, g.goal) == 74
        assert plan_path(g) == pytest.approx(74 * RES)

    def test_walled_goal(self):
        g = decode_grid(walls((H_RIGHT, 37, 3), (V_BOTTOM, 37, 3)))
        with pytest.raises(NoPath):
            plan_path(g)

    def test_adjacent(self):
        cells = np.ones((5, 5), dtype=bool)
        cells[1:-1, 1:-1] = False
        g = OccupancyGrid(cells=cells, start=(1, 1), goal=(1, 2), resolution=0.5)
        assert plan_path(g) == 0.5

    def test_matches_oracle(self):
        problem = RobotProblem()
        rng = np.random.default_rng(1)
        checked = 0
        while checked < 20:
            g = decode_grid(problem.sample(rng))
            steps = bfs_oracle(g.cells, g.start, g.goal)
            if steps < 0:
                with pytest.raises(NoPath):
                    plan_path(g)
                continue
            assert plan_path(g) == steps * RES
            checked += 1


class TestFitness:
    def test_empty_room_baseline(self):
        assert robot_fitness(walls()).fitness == 74 * RES

    def test_corridor_longer(self):
        maze = walls((H_LEFT, 8, 36), (H_RIGHT, 16, 36), (H_LEFT, 24, 36), (H_RIGHT, 32, 36))
        g = decode_grid(maze)
        ev = robot_fitness(maze)
        assert ev.cv == 0
        assert ev.fitness == bfs_oracle(g.cells, g.start, g.goal) * RES
        assert ev.fitness > robot_fitness(walls()).fitness

    def test_walled_off_infeasible(self):
        ev = robot_fitness(walls((H_LEFT, 2, 3), (V_TOP, 2, 3)))
        assert ev.cv == 1.0 and ev.fitness == 0.0

    def test_obstacles_never_shorten(self):
        problem = RobotProblem()
        rng = np.random.default_rng(2)
        base = robot_fitness(walls()).fitness
        for _ in range(300):
            ev = problem.evaluate(problem.sample(rng))
            if ev.cv == 0:
                assert ev.fitness >= base


class TestNovelty:
    def test_identical(self):
        a = walls((H_LEFT, 10, 5))
        assert robot_novelty(a, a.copy()) == 0

    def test_disjoint(self):
        assert robot_novelty(walls((H_LEFT, 10, 5)), walls((H_LEFT, 20, 5))) == 1

    def test_half_subset(self):
        assert robot_novelty(walls((H_LEFT, 10, 5)), walls((H_LEFT, 10, 10))) == pytest.approx(0.5)

    def test_both_empty(self):
        assert robot_novelty(walls(), walls()) == 0

    def test_order_irrelevant(self):
        a = walls((H_LEFT, 10, 5), (V_TOP, 20, 9))
        assert robot_novelty(a, a[:, ::-1]) == 0

    def test_problem_cache_agrees(self):
        problem = RobotProblem()
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, b = problem.sample(rng), problem.sample(rng)
            n = problem.novelty(a, b)
            assert n == robot_novelty(a, b) == problem.novelty(b, a)
            assert 0 <= n <= 1


def test_grid_export_round_trip():
    g = decode_grid(walls((H_LEFT, 10, 5), (V_BOTTOM, 20, 9), (H_RIGHT, 3, 12)))
    doc = grid_to_dict(g)
    assert doc["width"] == 40 and doc["resolution"] == RES
    assert doc["obstacle_runs"][10] == [[0, 6], [39, 1]]
    back = grid_from_dict(doc)
    assert np.array_equal(back.cells, g.cells) and back.start == g.start and back.goal == g.goal
