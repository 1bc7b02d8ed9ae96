# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled assignment kernel: shortest-augmenting-path solution of the
square min-cost assignment problem. Mirrors ``_kernel_py`` statement for
statement; see that module for the reference semantics."""

import numpy as np

from libc.float cimport DBL_MAX


def solve_square_min(object cost_in):
    cost_arr = np.ascontiguousarray(cost_in, dtype=np.float64)
    if cost_arr.ndim != 2 or cost_arr.shape[0] != cost_arr.shape[1]:
        raise ValueError("cost matrix must be square")
    if not np.all(np.isfinite(cost_arr)):
        raise ValueError("cost matrix must be finite")

    cdef double[:, ::1] cost = cost_arr
    cdef Py_ssize_t d = cost.shape[0]

    u_arr = np.zeros(d)
    v_arr = np.zeros(d)
    roc_arr = np.full(d, -1, dtype=np.int64)
    minv_arr = np.empty(d)
    way_arr = np.empty(d, dtype=np.int64)
    used_arr = np.zeros(d, dtype=np.uint8)

    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef double[::1] minv = minv_arr
    cdef long long[::1] roc = roc_arr
    cdef long long[::1] way = way_arr
    cdef unsigned char[::1] used = used_arr

    cdef Py_ssize_t r, j, i0, j0, j1
    cdef double delta, cur

    for r in range(d):
        for j in range(d):
            minv[j] = DBL_MAX
            way[j] = -1
            used[j] = 0
        i0 = r
        j0 = -1
        while True:
            delta = DBL_MAX
            j1 = -1
            for j in range(d):
                if not used[j]:
                    cur = cost[i0, j] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            u[r] += delta
            for j in range(d):
                if used[j]:
                    u[roc[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            used[j0] = 1
            if roc[j0] < 0:
                break
            i0 = roc[j0]
        while True:
            j1 = way[j0]
            if j1 < 0:
                roc[j0] = r
                break
            roc[j0] = roc[j1]
            j0 = j1

    cor_arr = np.empty(d, dtype=np.int64)
    cdef long long[::1] cor = cor_arr
    for j in range(d):
        cor[roc[j]] = j
    return cor_arr, roc_arr, u_arr, v_arr
