"""Lane keeping problem: roads built from straight segments and circular arcs.

Each scenario column is ``(action, value)``: a straight of ``value`` metres
or a left/right arc of ``value`` degrees at a fixed radius. Fitness is the
largest distance between a simulated vehicle and the lane centre.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .evo import Evaluation, Problem
from .genome import GeneSpec, ScenarioSpace
from .kernels import count_crossings, simulate_track

ACTIONS = ("straight", "turn_left", "turn_right")
STRAIGHT, TURN_LEFT, TURN_RIGHT = range(3)


@dataclass(frozen=True)
class VehicleParams:
    wheelbase: float = 2.5
    max_steer_deg: float = 35.0
    lookahead: float = 6.0
    v_max: float = 19.4
    lat_accel: float = 4.0
    accel: float = 3.0
    decel: float = 6.0
    dt: float = 0.1
    max_steps: int = 2000

    def __post_init__(self):
        for name in ("wheelbase", "max_steer_deg", "lookahead", "v_max", "lat_accel",
                     "accel", "decel", "dt"):
            if getattr(self, name) <= 0:
                raise ValueError(f"vehicle parameter {name} must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass(frozen=True)
class RoadParams:
    map_size: float = 200.0
    lane_width: float = 4.0
    radius: float = 15.0
    step: float = 1.0
    straight_range: tuple[float, float] = (5.0, 50.0)
    angle_range: tuple[float, float] = (5.0, 85.0)
    min_segments: int = 8
    max_segments: int = 15
    start: tuple[float, float] | None = None
    start_heading_deg: float = 90.0
    min_fitness: float = 0.0
    failure_threshold: float = 2.2
    vehicle: VehicleParams = field(default_factory=VehicleParams)

    def __post_init__(self):
        for name in ("straight_range", "angle_range"):
            lo, hi = getattr(self, name)
            if not (0 < lo <= hi):
                raise ValueError(f"{name} must satisfy 0 < min <= max")
        if self.map_size <= self.lane_width or self.lane_width <= 0:
            raise ValueError("map_size must exceed a positive lane_width")
        if self.radius <= 0 or self.step <= 0:
            raise ValueError("radius and step must be positive")
        if not (1 <= self.min_segments <= self.max_segments):
            raise ValueError("invalid segment-count bounds")
        if self.start is None:
            object.__setattr__(self, "start", (self.map_size / 2.0, self.lane_width))

    def value_range(self, action: int) -> tuple[float, float]:
        return self.straight_range if action == STRAIGHT else self.angle_range


@dataclass
class RoadPolyline:
    points: np.ndarray
    lane_width: float

    @property
    def arc_length(self) -> np.ndarray:
        seg = np.hypot(*np.diff(self.points, axis=0).T)
        return np.concatenate([[0.0], np.cumsum(seg)])

    @property
    def length(self) -> float:
        return float(self.arc_length[-1])


@dataclass
class SimResult:
    max_deviation: float
    progress: float
    steps: int
    truncated: bool


class RoadSpace(ScenarioSpace):
    """Road genomes; the value row's range depends on the column's action."""

    def __init__(self, params: RoadParams):
        lo = min(params.straight_range[0], params.angle_range[0])
        hi = max(params.straight_range[1], params.angle_range[1])
        super().__init__(
            [GeneSpec("action", "categorical", categories=ACTIONS),
             GeneSpec("value", "real", lo, hi)],
            (params.min_segments, params.max_segments),
        )
        self.params = params
        self._value_specs = {
            a: GeneSpec("value", "real", *params.value_range(a)) for a in range(len(ACTIONS))
        }

    def entry_domain(self, genes, row, col):
        if row == 1:
            return self._value_specs[int(genes[0, col])]
        # Only actions whose range admits the current value, so a single
        # redraw never leaves the column invalid.
        value = genes[1, col]
        if value == 0.0:  # value not drawn yet
            return self.specs[0]
        allowed = [a for a in range(len(ACTIONS)) if self._value_specs[a].contains(value)]
        return GeneSpec("action", "categorical", allowed[0], allowed[-1], categories=ACTIONS)


def decode_road(genes: np.ndarray, params: RoadParams = RoadParams(),
                start: tuple[float, float] | None = None,
                heading: float | None = None) -> RoadPolyline:
    """Turn ``(action, value)`` columns into a centreline sampled every ``params.step`` metres.

    ``heading`` is in radians; defaults come from ``params``.
    """
    x, y = start if start is not None else params.start
    h = math.radians(params.start_heading_deg) if heading is None else heading
    R, step = params.radius, params.step
    pts = [(x, y)]
    for action, value in genes.T:
        action = int(action)
        if action == STRAIGHT:
            n = max(1, round(value / step))
            for i in range(1, n + 1):
                d = value * i / n
                pts.append((x + d * math.cos(h), y + d * math.sin(h)))
        else:
            sign = 1.0 if action == TURN_LEFT else -1.0
            theta = math.radians(value)
            cx = x - sign * R * math.sin(h)
            cy = y + sign * R * math.cos(h)
            n = max(1, round(R * theta / step))
            for i in range(1, n + 1):
                phi = h + sign * theta * i / n
                pts.append((cx + sign * R * math.sin(phi), cy - sign * R * math.cos(phi)))
            h += sign * theta
        x, y = pts[-1]
    return RoadPolyline(points=np.array(pts), lane_width=params.lane_width)


def validate_road(road: RoadPolyline, map_size: float) -> float:
    """Constraint violation: metres outside the map plus one lane width per self-crossing."""
    margin = road.lane_width / 2.0
    P = road.points
    overshoot = max(0.0, float(np.max(margin - P)), float(np.max(P - (map_size - margin))))
    return overshoot + road.lane_width * count_crossings(P)


def _curvature(P: np.ndarray) -> np.ndarray:
    """Discrete (Menger) curvature at every vertex; zero at the ends."""
    kappa = np.zeros(len(P))
    if len(P) < 3:
        return kappa
    a, b, c = P[:-2], P[1:-1], P[2:]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - b[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - b[:, 0])
    denom = (np.hypot(*(b - a).T) * np.hypot(*(c - b).T) * np.hypot(*(c - a).T))
    kappa[1:-1] = 2.0 * np.abs(cross) / denom
    return kappa


def simulate_deviation(road: RoadPolyline, vehicle: VehicleParams = VehicleParams()) -> SimResult:
    """Drive the road with a pure-pursuit kinematic bicycle; report the worst lane-centre offset."""
    P = np.ascontiguousarray(road.points, dtype=float)
    if len(P) < 2:
        raise ValueError("road needs at least two points")
    arc = road.arc_length
    seg_min = float(np.min(np.diff(arc)))
    window = int(math.ceil(2.0 * vehicle.v_max * vehicle.dt / seg_min)) + 4
    dev, progress, steps = simulate_track(
        P, arc, _curvature(P), vehicle.wheelbase, math.radians(vehicle.max_steer_deg),
        vehicle.lookahead, vehicle.v_max, vehicle.lat_accel, vehicle.accel, vehicle.decel,
        vehicle.dt, vehicle.max_steps, window)
    truncated = steps >= vehicle.max_steps and progress < 0.9 * arc[-1]
    return SimResult(max_deviation=dev, progress=progress, steps=steps, truncated=truncated)


def lkas_novelty(a: np.ndarray, b: np.ndarray, params: RoadParams = RoadParams()) -> float:
    """1 - fraction of aligned columns with the same action and a value within 5% of its range."""
    n = max(a.shape[1], b.shape[1])
    if n == 0:
        return 0.0
    matches = 0
    for col in range(min(a.shape[1], b.shape[1])):
        act = int(a[0, col])
        if act != int(b[0, col]):
            continue
        lo, hi = params.value_range(act)
        if abs(a[1, col] - b[1, col]) < 0.05 * (hi - lo):
            matches += 1
    return 1.0 - matches / n


def road_to_dict(road: RoadPolyline) -> dict:
    return {"lane_width": road.lane_width, "points": road.points.tolist()}


class LkasProblem(Problem):
    name = "lkas"

    def __init__(self, params: RoadParams = RoadParams()):
        super().__init__(RoadSpace(params))
        self.params = params

    def evaluate(self, genes):
        road = decode_road(genes, self.params)
        cv = validate_road(road, self.params.map_size)
        if cv > 0:
            return Evaluation(fitness=0.0, cv=cv)
        sim = simulate_deviation(road, self.params.vehicle)
        if self.params.min_fitness > 0 and sim.max_deviation < self.params.min_fitness:
            cv = self.params.min_fitness - sim.max_deviation
        return Evaluation(fitness=sim.max_deviation, cv=cv, truncated=sim.truncated)

    def novelty(self, a, b):
        return lkas_novelty(a, b, self.params)

    def is_failure(self, fitness):
        return fitness >= self.params.failure_threshold

    def environment(self, genes) -> dict:
        return road_to_dict(decode_road(genes, self.params))

    def render(self, genes, path, title=None):
        from .render import draw_road
        draw_road(decode_road(genes, self.params), self.params.map_size, path, title=title)
