# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_purepy`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, sin, cos, tan, sqrt
from libc.stdlib cimport malloc, free

cnp.import_array()


def grid_bfs_steps(cells, start, goal):
    cdef const unsigned char[:, ::1] g = np.ascontiguousarray(cells, dtype=np.uint8)
    cdef Py_ssize_t n_rows = g.shape[0], n_cols = g.shape[1]
    cdef Py_ssize_t sr = start[0], sc = start[1], gr = goal[0], gc = goal[1]
    if g[sr, sc] or g[gr, gc]:
        return -1
    if sr == gr and sc == gc:
        return 0
    cdef Py_ssize_t n = n_rows * n_cols
    cdef int *dist = <int *> malloc(n * sizeof(int))
    cdef Py_ssize_t *queue = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    if dist == NULL or queue == NULL:
        free(dist)
        free(queue)
        raise MemoryError()
    cdef Py_ssize_t i, head = 0, tail = 0, cur, r, c, nr, nc, k, target = gr * n_cols + gc
    cdef int d, result = -1
    cdef int dr[4]
    cdef int dc[4]
    dr[0] = -1; dr[1] = 1; dr[2] = 0; dr[3] = 0
    dc[0] = 0; dc[1] = 0; dc[2] = -1; dc[3] = 1
    for i in range(n):
        dist[i] = -1
    dist[sr * n_cols + sc] = 0
    queue[tail] = sr * n_cols + sc
    tail += 1
    while head < tail and result < 0:
        cur = queue[head]
        head += 1
        r = cur // n_cols
        c = cur % n_cols
        d = dist[cur] + 1
        for k in range(4):
            nr = r + dr[k]
            nc = c + dc[k]
            if nr < 0 or nr >= n_rows or nc < 0 or nc >= n_cols:
                continue
            if g[nr, nc] or dist[nr * n_cols + nc] >= 0:
                continue
            if nr * n_cols + nc == target:
                result = d
                break
            dist[nr * n_cols + nc] = d
            queue[tail] = nr * n_cols + nc
            tail += 1
    free(dist)
    free(queue)
    return result


def nondominated_ranks(objectives):
    cdef const double[:, ::1] F = np.ascontiguousarray(objectives, dtype=np.float64)
    cdef Py_ssize_t n = F.shape[0], m = F.shape[1]
    ranks_arr = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return ranks_arr
    cdef long long[::1] ranks = ranks_arr
    cdef cnp.uint8_t[:, ::1] dom = np.zeros((n, n), dtype=np.uint8)
    cdef long long[::1] count = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t i, j, k
    cdef bint i_better, j_better
    for i in range(n):
        for j in range(i + 1, n):
            i_better = False
            j_better = False
            for k in range(m):
                if F[i, k] < F[j, k]:
                    i_better = True
                elif F[j, k] < F[i, k]:
                    j_better = True
            if i_better and not j_better:
                dom[i, j] = 1
                count[j] += 1
            elif j_better and not i_better:
                dom[j, i] = 1
                count[i] += 1
    cdef long long rank = 0
    cdef Py_ssize_t assigned = 0
    cdef long long[::1] current = np.empty(n, dtype=np.int64)
    cdef long long[::1] nxt = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t n_cur = 0, n_nxt
    for i in range(n):
        if count[i] == 0:
            current[n_cur] = i
            n_cur += 1
    while n_cur > 0:
        n_nxt = 0
        for k in range(n_cur):
            i = current[k]
            ranks[i] = rank
            for j in range(n):
                if dom[i, j]:
                    count[j] -= 1
                    if count[j] == 0:
                        nxt[n_nxt] = j
                        n_nxt += 1
        current, nxt = nxt, current
        n_cur = n_nxt
        rank += 1
    return ranks_arr


def count_crossings(points):
    cdef const double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n_seg = P.shape[0] - 1
    if n_seg < 3:
        return 0
    cdef Py_ssize_t i, j
    cdef double axi, ayi, bxi, byi, axj, ayj, bxj, byj, d1, d2, d3, d4
    cdef long total = 0
    for i in range(n_seg - 2):
        axi = P[i, 0]; ayi = P[i, 1]; bxi = P[i + 1, 0]; byi = P[i + 1, 1]
        for j in range(i + 2, n_seg):
            axj = P[j, 0]; ayj = P[j, 1]; bxj = P[j + 1, 0]; byj = P[j + 1, 1]
            if (min(axj, bxj) > max(axi, bxi) or max(axj, bxj) < min(axi, bxi)
                    or min(ayj, byj) > max(ayi, byi) or max(ayj, byj) < min(ayi, byi)):
                continue
            d1 = (bxi - axi) * (ayj - ayi) - (byi - ayi) * (axj - axi)
            d2 = (bxi - axi) * (byj - ayi) - (byi - ayi) * (bxj - axi)
            d3 = (bxj - axj) * (ayi - ayj) - (byj - ayj) * (axi - axj)
            d4 = (bxj - axj) * (byi - ayj) - (byj - ayj) * (bxi - axj)
            if d1 * d2 < 0.0 and d3 * d4 < 0.0:
                total += 1
    return total


def simulate_track(points, arc, curvature, double wheelbase, double max_steer,
                   double lookahead, double v_max, double lat_accel, double accel,
                   double decel, double dt, long max_steps, long window):
    cdef const double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] s = np.ascontiguousarray(arc, dtype=np.float64)
    cdef const double[::1] kappa = np.ascontiguousarray(curvature, dtype=np.float64)
    cdef Py_ssize_t n_pts = P.shape[0], n_seg = n_pts - 1
    cdef double total = s[n_seg]
    cdef double x = P[0, 0], y = P[0, 1]
    cdef double heading = atan2(P[1, 1] - P[0, 1], P[1, 0] - P[0, 0])
    cdef double v = -1.0, max_dev = 0.0, s_proj = 0.0
    cdef Py_ssize_t seg = 0, lo, hi, j, best_j
    cdef long step = 0
    cdef double best_d2, best_t, dx, dy, L2, t, ex, ey, d2, dev, speed_now, margin
    cdef double preview, k_max, v_target, v_safe, s_t, tx, ty, ux, uy, un
    cdef double seg_len, alpha, ld, steer
    while True:
        lo = seg - 2 if seg >= 2 else 0
        hi = seg + window if seg + window < n_seg else n_seg
        best_d2 = -1.0
        best_j = seg
        best_t = 0.0
        for j in range(lo, hi):
            dx = P[j + 1, 0] - P[j, 0]
            dy = P[j + 1, 1] - P[j, 1]
            L2 = dx * dx + dy * dy
            t = ((x - P[j, 0]) * dx + (y - P[j, 1]) * dy) / L2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            ex = P[j, 0] + t * dx - x
            ey = P[j, 1] + t * dy - y
            d2 = ex * ex + ey * ey
            if best_d2 < 0.0 or d2 < best_d2:
                best_d2 = d2
                best_j = j
                best_t = t
        seg = best_j
        dev = sqrt(best_d2)
        if dev > max_dev:
            max_dev = dev
        s_proj = s[seg] + best_t * (s[seg + 1] - s[seg])

        if step >= max_steps:
            break
        speed_now = v if v > 0.0 else 0.0
        margin = speed_now * dt
        if margin < 0.1:
            margin = 0.1
        if s_proj >= total - margin:
            break

        preview = lookahead + v_max * v_max / (2.0 * decel)
        k_max = 0.0
        j = seg
        while j < n_pts and s[j] <= s_proj + preview:
            if kappa[j] > k_max:
                k_max = kappa[j]
            j += 1
        v_target = v_max
        if k_max > 1e-9:
            v_safe = sqrt(lat_accel / k_max)
            if v_safe < v_target:
                v_target = v_safe
        if v < 0.0:
            v = v_target
        elif v_target > v:
            v = min(v_target, v + accel * dt)
        else:
            v = max(v_target, v - decel * dt)

        s_t = s_proj + lookahead
        if s_t <= total:
            j = seg
            while j < n_seg - 1 and s[j + 1] < s_t:
                j += 1
            seg_len = s[j + 1] - s[j]
            t = (s_t - s[j]) / seg_len
            tx = P[j, 0] + t * (P[j + 1, 0] - P[j, 0])
            ty = P[j, 1] + t * (P[j + 1, 1] - P[j, 1])
        else:
            ux = P[n_seg, 0] - P[n_seg - 1, 0]
            uy = P[n_seg, 1] - P[n_seg - 1, 1]
            un = sqrt(ux * ux + uy * uy)
            tx = P[n_seg, 0] + ux / un * (s_t - total)
            ty = P[n_seg, 1] + uy / un * (s_t - total)
        alpha = atan2(ty - y, tx - x) - heading
        alpha = atan2(sin(alpha), cos(alpha))
        ld = sqrt((tx - x) * (tx - x) + (ty - y) * (ty - y))
        steer = atan2(2.0 * wheelbase * sin(alpha), ld)
        if steer > max_steer:
            steer = max_steer
        elif steer < -max_steer:
            steer = -max_steer

        x = x + v * cos(heading) * dt
        y = y + v * sin(heading) * dt
        heading = heading + v / wheelbase * tan(steer) * dt
        step += 1
    return max_dev, s_proj, step
