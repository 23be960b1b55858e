"""SVG figures: scenario maps, convergence curves, box plots."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "scenevo"
_SVG_META = {"Date": None, "Creator": None}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_SVG_META, bbox_inches="tight")
    plt.close(fig)


def _lane_edges(points: np.ndarray, half_width: float):
    d = np.gradient(points, axis=0)
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    normal = np.stack([-d[:, 1], d[:, 0]], axis=1)
    return points + half_width * normal, points - half_width * normal


def draw_road(road, map_size: float, path, title=None):
    fig, ax = plt.subplots(figsize=(5, 5))
    left, right = _lane_edges(road.points, road.lane_width / 2.0)
    ax.plot(road.points[:, 0], road.points[:, 1], color="#f5c542", linestyle="--", linewidth=1)
    ax.plot(left[:, 0], left[:, 1], color="#333333", linewidth=1.5)
    ax.plot(right[:, 0], right[:, 1], color="#333333", linewidth=1.5)
    ax.plot(*road.points[0], "o", color="tab:green", markersize=5)
    ax.plot(*road.points[-1], "s", color="tab:red", markersize=5)
    ax.set_xlim(0, map_size)
    ax.set_ylim(0, map_size)
    ax.set_aspect("equal")
    ax.set_xlabel("x, m")
    ax.set_ylabel("y, m")
    if title:
        ax.set_title(title)
    _save(fig, path)


def draw_grid(grid, path, title=None):
    H, W = grid.shape
    res = grid.resolution
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(grid.cells, cmap="Greys", origin="upper", extent=(0, W * res, H * res, 0),
              interpolation="nearest")
    for cell, color in ((grid.start, "tab:green"), (grid.goal, "tab:red")):
        r, c = cell
        ax.plot((c + 0.5) * res, (r + 0.5) * res, "o", color=color, markersize=6)
    ax.set_xlabel("x, m")
    ax.set_ylabel("y, m")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_convergence(grid, curves: dict, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, values in curves.items():
        ax.plot(grid, values, label=name)
    ax.set_xlabel("Number of evaluations")
    ax.set_ylabel("Best fitness (mean over runs)")
    ax.grid(alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_boxes(samples: dict, path, ylabel=""):
    fig, ax = plt.subplots(figsize=(5, 4))
    names = list(samples)
    # whiskers at min/max so the drawing matches the five-number CSV
    ax.boxplot([samples[n] for n in names], whis=(0, 100))
    ax.set_xticks(range(1, len(names) + 1), names)
    ax.set_ylabel(ylabel)
    ax.grid(axis="y", alpha=0.3)
    _save(fig, path)
