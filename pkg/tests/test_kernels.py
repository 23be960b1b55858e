import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import BACKENDS, empty_room
from oracles import bfs_oracle, brute_force_crossings, brute_force_fronts
from scenevo import _purepy, kernels
from scenevo.lkas import LkasProblem, _curvature, decode_road
from scenevo.robot import RobotProblem, decode_grid


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


class TestGridBfs:
    def test_empty_room(self, backend):
        assert backend.grid_bfs_steps(empty_room(), (1, 1), (38, 38)) == 74

    def test_blocked_goal(self, backend):
        cells = empty_room()
        cells[37, 36:39] = 1
        cells[36:39, 37] = 1
        assert backend.grid_bfs_steps(cells, (1, 1), (38, 38)) == -1

    def test_start_on_obstacle(self, backend):
        cells = empty_room()
        cells[1, 1] = 1
        assert backend.grid_bfs_steps(cells, (1, 1), (38, 38)) == -1

    def test_same_cell(self, backend):
        assert backend.grid_bfs_steps(empty_room(), (5, 5), (5, 5)) == 0

    def test_matches_oracle_on_random_grids(self, backend):
        rng = np.random.default_rng(7)
        for _ in range(25):
            cells = (rng.random((15, 12)) < 0.3).astype(np.uint8)
            cells[0, 0] = cells[-1, -1] = 0
            assert backend.grid_bfs_steps(cells, (0, 0), (14, 11)) == bfs_oracle(cells, (0, 0), (14, 11))


class TestNondominatedRanks:
    def test_spec_example(self, backend):
        F = [(1, 5), (2, 3), (3, 1), (2, 4), (3, 3)]
        assert backend.nondominated_ranks(np.array(F, float)).tolist() == [0, 0, 0, 1, 1]

    def test_empty(self, backend):
        assert backend.nondominated_ranks(np.zeros((0, 2))).size == 0

    @settings(max_examples=60, deadline=None)
    @given(arrays(np.int64, st.tuples(st.integers(1, 20), st.integers(1, 3)), elements=st.integers(0, 4)))
    def test_ranks_match_brute_force(self, backend, F):
        ranks = backend.nondominated_ranks(F.astype(float))
        fronts = brute_force_fronts(F)
        for r, front in enumerate(fronts):
            assert sorted(np.flatnonzero(ranks == r).tolist()) == front


class TestCrossings:
    def test_square_loop_crosses_once(self, backend):
        P = np.array([(0, 0), (2, 0), (2, 2), (1, 2), (1, -1)], float)
        assert backend.count_crossings(P) == 1

    def test_straight_line(self, backend):
        P = np.column_stack([np.zeros(30), np.arange(30.0)])
        assert backend.count_crossings(P) == 0

    def test_random_polylines_match_oracle(self, backend):
        rng = np.random.default_rng(3)
        for _ in range(30):
            P = rng.uniform(0, 10, size=(int(rng.integers(2, 15)), 2))
            assert backend.count_crossings(P) == brute_force_crossings(P)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
class TestBackendsAgree:
    """The compiled kernels reproduce the Python ones exactly."""

    def _other(self):
        from scenevo import _speedups
        return _speedups

    def test_simulation_bit_identical(self):
        problem = LkasProblem()
        rng = np.random.default_rng(11)
        fast = self._other()
        for _ in range(60):
            road = decode_road(problem.sample(rng))
            P, arc = road.points, road.arc_length
            args = (P, arc, _curvature(P), 2.5, math.radians(35), 6.0, 19.4, 4.0, 3.0, 6.0, 0.1, 2000,
                    int(math.ceil(2 * 19.4 * 0.1 / np.min(np.diff(arc)))) + 4)
            assert _purepy.simulate_track(*args) == fast.simulate_track(*args)
            assert _purepy.count_crossings(P) == fast.count_crossings(P)

    def test_bfs_identical_on_robot_scenarios(self):
        problem = RobotProblem()
        rng = np.random.default_rng(5)
        fast = self._other()
        for _ in range(100):
            g = decode_grid(problem.sample(rng))
            cells = g.cells.view(np.uint8)
            assert _purepy.grid_bfs_steps(cells, g.start, g.goal) == fast.grid_bfs_steps(cells, g.start, g.goal)
