"""Pure-Python versions of the compiled kernels (same signatures, same results)."""

import numpy as np


def sq_dist_table(coords):
    rows = [tuple(int(v) for v in row) for row in np.asarray(coords).reshape(len(coords), -1)]
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        a = rows[i]
        for j in range(i + 1, n):
            s = sum((p - q) ** 2 for p, q in zip(a, rows[j]))
            out[i][j] = out[j][i] = s
    return np.array(out, dtype=np.int64).reshape(n, n)


def line_counts(ones, dims, axis):
    dims = [int(v) for v in dims]
    k = len(dims)
    nlines = 1
    for a, size in enumerate(dims):
        if a != axis:
            nlines *= size
    out = [0] * nlines
    for row in np.asarray(ones, dtype=np.int64).reshape(-1, k).tolist():
        key, radix = 0, 1
        for a in range(k):
            if a == axis:
                continue
            key += row[a] * radix
            radix *= dims[a]
        out[key] += 1
    return np.array(out, dtype=np.int64)


def common_neighbor_counts(adj, us, vs):
    nbrs = [frozenset(np.flatnonzero(row).tolist()) for row in np.asarray(adj)]
    return np.array([len(nbrs[u] & nbrs[v]) for u, v in zip(us, vs)], dtype=np.int64)
