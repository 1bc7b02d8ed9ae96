"""Numpy fallback twin of the compiled assignment kernel.

Shortest-augmenting-path (Jonker-Volgenant style) solution of the square
min-cost assignment problem, returning the matching together with the dual
potentials that certify optimality. The scan order and all tie handling
mirror the compiled kernel exactly, so both backends return bit-identical
results on identical inputs.
"""

from __future__ import annotations

import numpy as np


def solve_square_min(cost: np.ndarray):
    """Minimum-cost perfect assignment on a square float64 matrix.

    Returns ``(col_of_row, row_of_col, u, v)`` where the potentials satisfy
    ``u[i] + v[j] <= cost[i, j]`` for every pair, with equality on matched
    edges (up to rounding); this certifies optimality and exposes the tight
    subgraph spanning all optimal assignments.
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError("cost matrix must be square")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    d = cost.shape[0]
    u = np.zeros(d)
    v = np.zeros(d)
    row_of_col = np.full(d, -1, dtype=np.int64)

    for r in range(d):
        minv = np.full(d, np.inf)
        way = np.full(d, -1, dtype=np.int64)
        used = np.zeros(d, dtype=bool)
        i0 = r
        j0 = -1
        while True:
            idx = np.nonzero(~used)[0]
            cur = cost[i0, idx] - u[i0] - v[idx]
            better = cur < minv[idx]
            way[idx[better]] = j0
            minv[idx] = np.where(better, cur, minv[idx])
            t = int(np.argmin(minv[idx]))
            j1 = int(idx[t])
            delta = float(minv[idx][t])
            used_idx = np.nonzero(used)[0]
            u[r] += delta
            if used_idx.size:
                u[row_of_col[used_idx]] += delta
                v[used_idx] -= delta
            minv[idx] -= delta
            j0 = j1
            used[j1] = True
            if row_of_col[j1] < 0:
                break
            i0 = int(row_of_col[j1])
        while True:
            j1 = int(way[j0])
            row_of_col[j0] = r if j1 < 0 else row_of_col[j1]
            if j1 < 0:
                break
            j0 = j1

    col_of_row = np.empty(d, dtype=np.int64)
    col_of_row[row_of_col] = np.arange(d, dtype=np.int64)
    return col_of_row, row_of_col, u, v
