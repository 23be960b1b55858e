"""Search-based generation of fault-revealing, diverse test scenarios.

Two systems under test are built in: a lane keeping model driving roads made
of straights and arcs (:mod:`scenevo.lkas`) and a path-planning robot in a
room with walls (:mod:`scenevo.robot`). Scenarios are evolved with random
search, a single-objective GA or NSGA-II (:mod:`scenevo.evo`).
"""
from .evo import (
    Individual,
    Problem,
    RunStats,
    SearchConfig,
    crowding_distance,
    non_dominated_sort,
    run_ga,
    run_nsga2,
    run_random,
    run_search,
)
from .kernels import BACKEND

__version__ = "0.1.0"
