"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Prints a table of per-call times and speedups, and checks that both backends
return identical results.
"""
import argparse
import math
import timeit

import numpy as np

from scenevo import _purepy
from scenevo.lkas import LkasProblem, VehicleParams, _curvature, decode_road, validate_road
from scenevo.robot import RobotProblem, decode_grid

try:
    from scenevo import _speedups
except ImportError:
    _speedups = None


def make_cases(seed=0):
    rng = np.random.default_rng(seed)
    robot = RobotProblem()
    grids = [decode_grid(robot.sample(rng)) for _ in range(20)]
    lkas = LkasProblem()
    roads = []
    while len(roads) < 20:
        road = decode_road(lkas.sample(rng))
        if validate_road(road, lkas.params.map_size) == 0:
            roads.append(road)
    fronts = [rng.integers(0, 50, size=(300, 2)).astype(float) for _ in range(5)]
    v = VehicleParams()
    cases = {
        "grid_bfs_steps": (
            "grid_bfs_steps",
            [(g.cells.view(np.uint8), g.start, g.goal) for g in grids]),
        "nondominated_ranks (n=300)": ("nondominated_ranks", [(F,) for F in fronts]),
        "count_crossings": ("count_crossings", [(r.points,) for r in roads]),
        "simulate_track": (
            "simulate_track",
            [(np.ascontiguousarray(r.points), r.arc_length, _curvature(r.points), v.wheelbase,
              math.radians(v.max_steer_deg), v.lookahead, v.v_max, v.lat_accel, v.accel, v.decel,
              v.dt, v.max_steps, int(math.ceil(2 * v.v_max * v.dt / np.diff(r.arc_length).min())) + 4)
             for r in roads]),
    }
    return cases


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _speedups is None:
        print("compiled extension not built; only the Python backend is available")
    backends = {"python": _purepy}
    if _speedups is not None:
        backends["cython"] = _speedups

    print(f"{'kernel':<28}{'python ms':>12}{'cython ms':>12}{'speedup':>10}  identical")
    for label, (name, inputs) in make_cases().items():
        times, outputs = {}, {}
        for bname, mod in backends.items():
            fn = getattr(mod, name)
            outputs[bname] = [fn(*a) for a in inputs]
            best = min(timeit.repeat(lambda: [fn(*a) for a in inputs], number=1, repeat=args.repeat))
            times[bname] = 1000 * best / len(inputs)
        if "cython" in times:
            identical = all(same(x, y) for x, y in zip(outputs["python"], outputs["cython"]))
            print(f"{label:<28}{times['python']:>12.3f}{times['cython']:>12.3f}"
                  f"{times['python'] / times['cython']:>9.1f}x  {identical}")
        else:
            print(f"{label:<28}{times['python']:>12.3f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
