"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from rsforge import _kernels_py as pure
from rsforge.functions import midpoint_function, ones_array
from rsforge.lattice import cube_points

try:
    from rsforge import _kernels as compiled
except ImportError:
    compiled = None


def cases():
    q, d = 6, 3
    coords = np.array(cube_points(q, d), dtype=np.int64)
    yield f"sq_dist_table  n={len(coords)}", "sq_dist_table", (coords,)

    f = midpoint_function(4, 2, k=4)
    ones = ones_array(f)
    yield f"line_counts    ones={len(ones)}", "line_counts", (ones, f.dims, f.k - 1)

    rng = np.random.default_rng(0)
    adj = (rng.random((400, 300)) < 0.3).astype(np.uint8)
    us = rng.integers(0, 400, 20000).astype(np.int64)
    vs = rng.integers(0, 400, 20000).astype(np.int64)
    yield f"common_nbrs    pairs={len(us)}", "common_neighbor_counts", (adj, us, vs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':32} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for label, name, argv in cases():
        t_py = min(timeit.repeat(lambda: getattr(pure, name)(*argv), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{label:32} {t_py:10.4f}")
            continue
        t_c = min(timeit.repeat(lambda: getattr(compiled, name)(*argv), number=1, repeat=args.repeat))
        assert np.array_equal(getattr(pure, name)(*argv), getattr(compiled, name)(*argv))
        print(f"{label:32} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
