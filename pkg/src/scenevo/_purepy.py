"""Pure-Python implementations of the hot kernels.

Every function here has a twin in ``_speedups.pyx`` with the same signature
and the same floating-point operation order, so both backends return
identical results.
"""
from collections import deque
import math

import numpy as np


def grid_bfs_steps(cells, start, goal):
    """Number of 4-connected moves from ``start`` to ``goal``, or -1.

    ``cells`` is a (rows, cols) uint8 array where non-zero marks an obstacle.
    """
    cells = np.asarray(cells, dtype=np.uint8)
    n_rows, n_cols = cells.shape
    sr, sc = start
    gr, gc = goal
    if cells[sr, sc] or cells[gr, gc]:
        return -1
    if (sr, sc) == (gr, gc):
        return 0
    blocked = cells.tolist()
    dist = [[-1] * n_cols for _ in range(n_rows)]
    dist[sr][sc] = 0
    queue = deque([(sr, sc)])
    while queue:
        r, c = queue.popleft()
        d = dist[r][c] + 1
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < n_rows and 0 <= nc < n_cols and not blocked[nr][nc] and dist[nr][nc] < 0:
                if nr == gr and nc == gc:
                    return d
                dist[nr][nc] = d
                queue.append((nr, nc))
    return -1


def nondominated_ranks(objectives):
    """Front index (0 = non-dominated) of every row, minimisation convention."""
    F = np.asarray(objectives, dtype=float)
    n = F.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rows = F.tolist()
    dominated_by_count = [0] * n
    dominates = [[] for _ in range(n)]
    for i in range(n):
        fi = rows[i]
        for j in range(i + 1, n):
            fj = rows[j]
            i_better = j_better = False
            for a, b in zip(fi, fj):
                if a < b:
                    i_better = True
                elif b < a:
                    j_better = True
            if i_better and not j_better:
                dominates[i].append(j)
                dominated_by_count[j] += 1
            elif j_better and not i_better:
                dominates[j].append(i)
                dominated_by_count[i] += 1
    ranks = np.full(n, -1, dtype=np.int64)
    current = [i for i in range(n) if dominated_by_count[i] == 0]
    rank = 0
    while current:
        nxt = []
        for i in current:
            ranks[i] = rank
            for j in dominates[i]:
                dominated_by_count[j] -= 1
                if dominated_by_count[j] == 0:
                    nxt.append(j)
        current = nxt
        rank += 1
    return ranks


def count_crossings(points):
    """Count proper crossings between non-adjacent segments of a polyline."""
    P = np.asarray(points, dtype=float)
    n_seg = P.shape[0] - 1
    if n_seg < 3:
        return 0
    ax, ay = P[:-1, 0], P[:-1, 1]
    bx, by = P[1:, 0], P[1:, 1]
    # Bounding-box prefilter keeps the pairwise tests sparse.
    xmin, xmax = np.minimum(ax, bx), np.maximum(ax, bx)
    ymin, ymax = np.minimum(ay, by), np.maximum(ay, by)
    total = 0
    for i in range(n_seg - 2):
        j = np.arange(i + 2, n_seg)
        j = j[(xmin[j] <= xmax[i]) & (xmax[j] >= xmin[i]) & (ymin[j] <= ymax[i]) & (ymax[j] >= ymin[i])]
        if j.size == 0:
            continue
        d1 = (bx[i] - ax[i]) * (ay[j] - ay[i]) - (by[i] - ay[i]) * (ax[j] - ax[i])
        d2 = (bx[i] - ax[i]) * (by[j] - ay[i]) - (by[i] - ay[i]) * (bx[j] - ax[i])
        d3 = (bx[j] - ax[j]) * (ay[i] - ay[j]) - (by[j] - ay[j]) * (ax[i] - ax[j])
        d4 = (bx[j] - ax[j]) * (by[i] - ay[j]) - (by[j] - ay[j]) * (bx[i] - ax[j])
        total += int(np.count_nonzero((d1 * d2 < 0.0) & (d3 * d4 < 0.0)))
    return total


def _target_point(xs, ys, s, seg, s_target, n_seg):
    # Walk forward to the segment containing s_target; extrapolate past the end.
    j = seg
    while j < n_seg - 1 and s[j + 1] < s_target:
        j += 1
    seg_len = s[j + 1] - s[j]
    t = (s_target - s[j]) / seg_len
    return xs[j] + t * (xs[j + 1] - xs[j]), ys[j] + t * (ys[j + 1] - ys[j])


def simulate_track(points, arc, curvature, wheelbase, max_steer, lookahead,
                   v_max, lat_accel, accel, decel, dt, max_steps, window):
    """Pure-pursuit kinematic bicycle following a centreline polyline.

    Returns ``(max_deviation, progress, steps)`` where ``progress`` is the
    arc length reached along the road.
    """
    P = np.asarray(points, dtype=float)
    xs = P[:, 0].tolist()
    ys = P[:, 1].tolist()
    s = np.asarray(arc, dtype=float).tolist()
    kappa = np.asarray(curvature, dtype=float).tolist()
    n_pts = len(xs)
    n_seg = n_pts - 1
    total = s[n_seg]

    x = xs[0]
    y = ys[0]
    heading = math.atan2(ys[1] - ys[0], xs[1] - xs[0])
    v = -1.0
    seg = 0
    max_dev = 0.0
    s_proj = 0.0
    step = 0
    while True:
        # Project the vehicle onto the nearby part of the centreline.
        lo = seg - 2 if seg >= 2 else 0
        hi = seg + window if seg + window < n_seg else n_seg
        best_d2 = -1.0
        best_j = seg
        best_t = 0.0
        for j in range(lo, hi):
            dx = xs[j + 1] - xs[j]
            dy = ys[j + 1] - ys[j]
            L2 = dx * dx + dy * dy
            t = ((x - xs[j]) * dx + (y - ys[j]) * dy) / L2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            ex = xs[j] + t * dx - x
            ey = ys[j] + t * dy - y
            d2 = ex * ex + ey * ey
            if best_d2 < 0.0 or d2 < best_d2:
                best_d2 = d2
                best_j = j
                best_t = t
        seg = best_j
        dev = math.sqrt(best_d2)
        if dev > max_dev:
            max_dev = dev
        s_proj = s[seg] + best_t * (s[seg + 1] - s[seg])

        if step >= max_steps:
            break
        speed_now = v if v > 0.0 else 0.0
        if s_proj >= total - max(speed_now * dt, 0.1):
            break

        # Target speed from the sharpest curvature within braking preview.
        preview = lookahead + v_max * v_max / (2.0 * decel)
        k_max = 0.0
        j = seg
        while j < n_pts and s[j] <= s_proj + preview:
            if kappa[j] > k_max:
                k_max = kappa[j]
            j += 1
        v_target = v_max
        if k_max > 1e-9:
            v_safe = math.sqrt(lat_accel / k_max)
            if v_safe < v_target:
                v_target = v_safe
        if v < 0.0:
            v = v_target
        elif v_target > v:
            v = min(v_target, v + accel * dt)
        else:
            v = max(v_target, v - decel * dt)

        # Pure-pursuit steering toward the lookahead point.
        s_t = s_proj + lookahead
        if s_t <= total:
            tx, ty = _target_point(xs, ys, s, seg, s_t, n_seg)
        else:
            ux = xs[n_seg] - xs[n_seg - 1]
            uy = ys[n_seg] - ys[n_seg - 1]
            un = math.sqrt(ux * ux + uy * uy)
            tx = xs[n_seg] + ux / un * (s_t - total)
            ty = ys[n_seg] + uy / un * (s_t - total)
        alpha = math.atan2(ty - y, tx - x) - heading
        alpha = math.atan2(math.sin(alpha), math.cos(alpha))
        ld = math.sqrt((tx - x) * (tx - x) + (ty - y) * (ty - y))
        steer = math.atan2(2.0 * wheelbase * math.sin(alpha), ld)
        if steer > max_steer:
            steer = max_steer
        elif steer < -max_steer:
            steer = -max_steer

        x = x + v * math.cos(heading) * dt
        y = y + v * math.sin(heading) * dt
        heading = heading + v / wheelbase * math.tan(steer) * dt
        step += 1
    return max_dev, s_proj, step
