import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from rsforge import _kernels_py as pure
from rsforge import kernels

compiled = pytest.importorskip("rsforge._kernels")


def test_compiled_backend_is_selected_by_default():
    assert kernels.BACKEND == ("python" if os.environ.get("RSFORGE_PURE") else "compiled")


def test_pure_backend_can_be_forced():
    env = dict(os.environ, RSFORGE_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from rsforge.kernels import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@settings(max_examples=60, deadline=None)
@given(hnp.arrays(np.int64, st.tuples(st.integers(1, 30), st.integers(1, 4)), elements=st.integers(-20, 20)))
def test_sq_dist_table_agrees(coords):
    a = compiled.sq_dist_table(coords)
    b = pure.sq_dist_table(coords)
    assert np.array_equal(a, b)
    diff = coords[:, None, :] - coords[None, :, :]
    assert np.array_equal(a, (diff**2).sum(axis=2))


@st.composite
def ones_and_dims(draw):
    k = draw(st.integers(2, 4))
    dims = tuple(draw(st.integers(1, 5)) for _ in range(k))
    rows = draw(st.lists(st.tuples(*[st.integers(0, n - 1) for n in dims]), max_size=40))
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), k)
    return arr, dims, draw(st.integers(0, k - 1))


@settings(max_examples=100, deadline=None)
@given(ones_and_dims())
def test_line_counts_agree(args):
    ones, dims, axis = args
    a = compiled.line_counts(ones, dims, axis)
    b = pure.line_counts(ones, dims, axis)
    assert np.array_equal(a, b)
    dense = np.zeros(dims, dtype=np.int64)
    for row in ones:
        dense[tuple(row)] += 1
    # lines are keyed little-endian over the remaining axes
    assert np.array_equal(a, dense.sum(axis=axis).flatten(order="F"))


@settings(max_examples=60, deadline=None)
@given(
    hnp.arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=st.integers(0, 1)),
    st.data(),
)
def test_common_neighbor_counts_agree(adj, data):
    n = adj.shape[0]
    m = data.draw(st.integers(0, 20))
    us = np.array(data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m)), dtype=np.int64)
    vs = np.array(data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m)), dtype=np.int64)
    a = compiled.common_neighbor_counts(adj, us, vs)
    assert np.array_equal(a, pure.common_neighbor_counts(adj, us, vs))
    assert np.array_equal(a, (adj[us].astype(int) & adj[vs].astype(int)).sum(axis=1))
