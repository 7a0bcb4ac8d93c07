# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Semantics must match ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def sq_dist_table(coords):
    cdef cnp.int64_t[:, ::1] c = np.ascontiguousarray(coords, dtype=np.int64)
    cdef Py_ssize_t n = c.shape[0], d = c.shape[1]
    out = np.zeros((n, n), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] o = out
    cdef Py_ssize_t i, j, t
    cdef cnp.int64_t acc, diff
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0
            for t in range(d):
                diff = c[i, t] - c[j, t]
                acc += diff * diff
            o[i, j] = acc
            o[j, i] = acc
    return out


def line_counts(ones, dims, int axis):
    cdef cnp.int64_t[:, ::1] e = np.ascontiguousarray(ones, dtype=np.int64).reshape(-1, len(dims))
    cdef Py_ssize_t m = e.shape[0], k = e.shape[1]
    cdef cnp.int64_t[::1] dv = np.asarray(dims, dtype=np.int64)
    cdef Py_ssize_t nlines = 1, a
    for a in range(k):
        if a != axis:
            nlines *= dv[a]
    out = np.zeros(nlines, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t row
    cdef cnp.int64_t key, radix
    for row in range(m):
        key = 0
        radix = 1
        for a in range(k):
            if a == axis:
                continue
            key += e[row, a] * radix
            radix *= dv[a]
        o[key] += 1
    return out


def common_neighbor_counts(adj, us, vs):
    cdef cnp.uint8_t[:, ::1] g = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef cnp.int64_t[::1] u = np.ascontiguousarray(us, dtype=np.int64)
    cdef cnp.int64_t[::1] v = np.ascontiguousarray(vs, dtype=np.int64)
    cdef Py_ssize_t m = u.shape[0], nb = g.shape[1], i, b
    out = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef cnp.int64_t acc
    for i in range(m):
        acc = 0
        for b in range(nb):
            if g[u[i], b] and g[v[i], b]:
                acc += 1
        o[i] = acc
    return out
