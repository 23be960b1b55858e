"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise the pure-Python
versions are used. Set ``SCENEVO_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _purepy

if os.environ.get("SCENEVO_PURE_PYTHON", "").lower() in ("1", "true", "yes"):
    _impl = _purepy
else:
    try:
        from . import _speedups as _impl
    except ImportError:  # extension not built
        _impl = _purepy

BACKEND = "cython" if _impl is not _purepy else "python"

grid_bfs_steps = _impl.grid_bfs_steps
nondominated_ranks = _impl.nondominated_ranks
count_crossings = _impl.count_crossings
simulate_track = _impl.simulate_track

__all__ = [
    "BACKEND",
    "grid_bfs_steps",
    "nondominated_ranks",
    "count_crossings",
    "simulate_track",
]
