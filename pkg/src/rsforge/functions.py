"""The midpoint-type 0/1 functions and brute-force line checks.

Three families share one defining equation, x_1 + ... + x_{k-1} = (k-1) x_k:

* ``cube``      -- the last argument also ranges over [q]^d (f_{q,d} for k = 3);
* ``midpoint``  -- k = 3, the last argument ranges over Z_{2,q,d} (g_{q,d});
* ``kmidpoint`` -- the last argument ranges over Z_{k-1,q,d} (g_{k,q,d}).

Inputs are tuples of indices: the first k-1 entries index [q]^d canonically,
the last one indexes the family's last-coordinate set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import prod

import numpy as np

from ._cap import guard
from .errors import ParameterError
from .kernels import line_counts
from .lattice import index_to_coords, point_index

FAMILIES = ("cube", "midpoint", "kmidpoint")


@dataclass(frozen=True)
class FunctionSpec:
    family: str
    q: int
    d: int
    k: int = 3

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        if self.q < 2 or self.d < 1:
            raise ParameterError("need q >= 2 and d >= 1")
        if self.k < 3:
            raise ParameterError("need k >= 3")
        if self.family == "midpoint" and self.k != 3:
            raise ParameterError("the midpoint family is 3-ary; use kmidpoint")

    @property
    def m(self) -> int:
        return self.k - 1

    @property
    def n(self) -> int:
        return self.q**self.d

    @property
    def z_base(self) -> int:
        return self.m * (self.q - 1) + 1

    @property
    def N(self) -> int:
        if self.family == "cube":
            return self.n
        return self.z_base**self.d

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.n,) * (self.k - 1) + (self.N,)

    @property
    def domain_size(self) -> int:
        return prod(self.dims)

    @cached_property
    def points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(index_to_coords(i, self.q, self.d) for i in range(self.n))

    @cached_property
    def z_points(self) -> tuple[tuple[int, ...], ...]:
        """m-scaled integer representatives of the last-coordinate set."""
        if self.family == "cube":
            return tuple(tuple(self.m * c for c in p) for p in self.points)
        return tuple(index_to_coords(j, self.z_base, self.d, offset=self.m) for j in range(self.N))

    def z_index(self, scaled):
        """Index of the last-coordinate value with m-scaled vector ``scaled``, or None."""
        m = self.m
        if self.family == "cube":
            if any(c % m for c in scaled):
                return None
            coords = [c // m for c in scaled]
            if all(1 <= c <= self.q for c in coords):
                return point_index(coords, self.q)
            return None
        if all(m <= c <= m * self.q for c in scaled):
            return point_index(scaled, self.z_base, offset=m)
        return None

    def __call__(self, x) -> int:
        return evaluate(self, x)

    def ones(self):
        """All 1-entries in lexicographic order of the first k-1 indices."""
        pts = self.points
        for head in product(range(self.n), repeat=self.k - 1):
            s = [sum(col) for col in zip(*(pts[i] for i in head))]
            j = self.z_index(s)
            if j is not None:
                yield head + (j,)

    def describe(self) -> str:
        if self.family == "cube":
            return f"f_(q={self.q},d={self.d})" if self.k == 3 else f"f_(k={self.k},q={self.q},d={self.d})"
        return f"g_(k={self.k},q={self.q},d={self.d})"


def midpoint_function(q, d, k=3) -> FunctionSpec:
    return FunctionSpec("midpoint" if k == 3 else "kmidpoint", q, d, k)


def cube_function(q, d, k=3) -> FunctionSpec:
    return FunctionSpec("cube", q, d, k)


def _check_input(f, x):
    if len(x) != f.k:
        raise ParameterError(f"expected {f.k} arguments, got {len(x)}")
    for i, (v, size) in enumerate(zip(x, f.dims)):
        if not 0 <= v < size:
            raise ParameterError(f"argument {i + 1} = {v} outside [0, {size})")


def evaluate(f: FunctionSpec, x) -> int:
    _check_input(f, x)
    pts = f.points
    s = [sum(col) for col in zip(*(pts[i] for i in x[:-1]))]
    return int(tuple(s) == f.z_points[x[-1]])


def enumerate_Z(m: int, q: int, d: int, cap=None) -> list[tuple[int, ...]]:
    """Z_{m,q,d} as m-scaled integer vectors in canonical order.

    Every coordinate sum of m values in [1, q] is attainable, so the set is the
    full box [m, mq]^d.
    """
    if m < 2 or q < 2 or d < 1:
        raise ParameterError("need m >= 2, q >= 2, d >= 1")
    base = m * (q - 1) + 1
    guard((m * q) ** d, cap, "Z-set")
    return [index_to_coords(j, base, d, offset=m) for j in range(base**d)]


@dataclass
class LineReport:
    dimension: int
    violations: list = field(default_factory=list)
    lines_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations


def ones_array(f, cap=None) -> np.ndarray:
    guard(f.domain_size, cap)
    rows = list(f.ones())
    return np.array(rows, dtype=np.int64).reshape(len(rows), f.k)


def check_lines(f, mode: str = "weak", cap=None) -> list[LineReport]:
    """Count 1-entries on every axis-parallel line of the domain.

    ``weak``: every line holds at most one 1. ``sub``: additionally each line in
    the last dimension holds exactly one. Violating lines are reported as the
    full index tuple with ``None`` in the free position.
    """
    if mode not in ("weak", "sub"):
        raise ParameterError(f"unknown mode {mode!r}")
    dims = tuple(f.dims)
    ones = ones_array(f, cap)
    reports = []
    for axis in range(f.k):
        counts = line_counts(ones, dims, axis)
        strict = mode == "sub" and axis == f.k - 1
        bad = np.flatnonzero(counts != 1) if strict else np.flatnonzero(counts > 1)
        other = [dims[a] for a in range(f.k) if a != axis]
        violations = []
        for key in bad.tolist():
            fixed = []
            for size in other:
                key, rem = divmod(key, size)
                fixed.append(rem)
            fixed.insert(axis, None)
            violations.append(tuple(fixed))
        reports.append(LineReport(axis + 1, violations, len(counts)))
    return reports


def ones_count(f, cap=None) -> int:
    guard(f.domain_size, cap)
    return sum(1 for _ in f.ones())
