"""Integer lattice geometry over [q]^d.

Points are stored as integer coordinate tuples. Points of the midpoint set
Z_{m,q,d} are stored m-scaled (for m = 2, "doubled" coordinates in [2, 2q]) so
all arithmetic stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from ._cap import guard
from .errors import ParameterError
from .kernels import sq_dist_table


@dataclass(frozen=True)
class LatticePoint:
    coords: tuple[int, ...]
    q: int
    d: int
    doubled: bool = False

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.d:
            raise ParameterError(f"expected {self.d} coordinates, got {len(coords)}")
        lo, hi = (2, 2 * self.q) if self.doubled else (1, self.q)
        for c in coords:
            if not lo <= c <= hi:
                raise ParameterError(f"coordinate {c} outside [{lo}, {hi}]")

    def double(self) -> "LatticePoint":
        if self.doubled:
            raise ParameterError("point is already doubled")
        return LatticePoint(tuple(2 * c for c in self.coords), self.q, self.d, doubled=True)

    @property
    def index(self) -> int:
        if self.doubled:
            return point_index(tuple(c - 2 for c in self.coords), 2 * self.q - 1, offset=0)
        return point_index(self.coords, self.q)


def point_index(coords, base, offset=1):
    """Mixed-radix little-endian index of ``coords - offset`` in the given base."""
    idx, radix = 0, 1
    for c in coords:
        idx += (c - offset) * radix
        radix *= base
    return idx


def index_to_coords(idx, base, d, offset=1):
    out = []
    for _ in range(d):
        idx, rem = divmod(idx, base)
        out.append(rem + offset)
    return tuple(out)


def cube_points(q, d, cap=None):
    """All points of [q]^d as coordinate tuples, in canonical index order."""
    guard(q**d, cap, "lattice")
    return [index_to_coords(i, q, d) for i in range(q**d)]


def midpoint(x: LatticePoint, y: LatticePoint) -> LatticePoint:
    """x + y as a doubled point (the 2-scaled representative of (x+y)/2)."""
    _check_compatible(x, y)
    if x.doubled:
        raise ParameterError("midpoint takes plain points")
    return LatticePoint(tuple(a + b for a, b in zip(x.coords, y.coords)), x.q, x.d, doubled=True)


def _check_compatible(x, y):
    if (x.q, x.d, x.doubled) != (y.q, y.d, y.doubled):
        raise ParameterError(
            f"incompatible points: (q={x.q}, d={x.d}, doubled={x.doubled}) vs "
            f"(q={y.q}, d={y.d}, doubled={y.doubled})"
        )


def sq_dist(x: LatticePoint, y: LatticePoint) -> int:
    """Squared Euclidean distance of the stored coordinates.

    For two doubled points this is ||2a - 2b||^2 = 4||a - b||^2.
    """
    _check_compatible(x, y)
    return sum((a - b) ** 2 for a, b in zip(x.coords, y.coords))


def sq_dist_coords(a, b):
    return sum((u - v) ** 2 for u, v in zip(a, b))


def mean_sq_dist(q: int, d: int) -> Fraction:
    if q < 2 or d < 1:
        raise ParameterError("need q >= 2 and d >= 1")
    return Fraction(d * (q * q - 1), 6)


@dataclass(frozen=True)
class IntervalPartition:
    """Half-open intervals of a fixed length covering [0, range_max].

    The boundaries are translated so that ``mean`` is the midpoint of its
    interval. The first and last intervals are clipped to the range; the last
    one is closed on the right.
    """

    range_max: int
    length: int
    offset: Fraction
    count: int
    mean: Fraction = field(compare=False)

    def _raw(self, v: Fraction) -> int:
        shift = 1 if self.offset > 0 else 0
        return math.floor((v - self.offset) / self.length) + shift

    def index(self, v) -> int:
        v = Fraction(v)
        if v < 0 or v > self.range_max:
            raise ParameterError(f"value {v} outside [0, {self.range_max}]")
        return min(self._raw(v), self.count - 1)

    def index_or_none(self, v):
        """Like :meth:`index` but returns None for values outside the range."""
        v = Fraction(v)
        if v < 0 or v > self.range_max:
            return None
        return min(self._raw(v), self.count - 1)

    def bounds(self, i: int) -> tuple[Fraction, Fraction]:
        if not 0 <= i < self.count:
            raise ParameterError(f"interval {i} out of range")
        shift = 1 if self.offset > 0 else 0
        lo = self.offset + (i - shift) * self.length
        hi = lo + self.length
        return max(lo, Fraction(0)), min(hi, Fraction(self.range_max))

    @property
    def center_index(self) -> int:
        return self.index(self.mean)

    def intervals(self):
        return [self.bounds(i) for i in range(self.count)]


def build_interval_partition(q: int, d: int, r=None, *, r_sq=None) -> IntervalPartition:
    """Partition of [0, d q^2] into intervals of length r^2 centred on the mean.

    Give either the radius ``r`` or the interval length ``r_sq`` directly (the
    latter allows r = sqrt(d) for non-square d).
    """
    if (r is None) == (r_sq is None):
        raise ParameterError("give exactly one of r and r_sq")
    length = r * r if r_sq is None else r_sq
    if length != int(length):
        raise ParameterError("interval length r^2 must be an integer")
    length = int(length)
    top = d * q * q
    if not 1 <= length <= top:
        raise ParameterError(f"need 1 <= r^2 <= d q^2 = {top}, got r^2 = {length}")
    mu = mean_sq_dist(q, d)
    offset = (mu - Fraction(length, 2)) % length
    shift = 1 if offset > 0 else 0
    # last raw index that still meets [0, top): the point top itself joins it
    last = math.ceil((top - offset) / length) - 1 + shift
    return IntervalPartition(range_max=top, length=length, offset=offset, count=last + 1, mean=mu)


def interval_index(p: IntervalPartition, v) -> int:
    return p.index(v)


@dataclass(frozen=True)
class Coloring:
    threshold: int
    colors: tuple[int, ...]
    color_count: int
    max_degree: int

    def __getitem__(self, idx):
        return self.colors[idx]


def distance_table(q, d, cap=None):
    n = q**d
    guard(n * n, cap, "point-pair table")
    return sq_dist_table(np.array(cube_points(q, d), dtype=np.int64).reshape(n, d))


def greedy_coloring(q: int, d: int, threshold: int, cap=None) -> Coloring:
    """Greedy proper coloring of G_threshold (squared distance <= threshold, no loops).

    Vertices are visited in lexicographic coordinate order and receive the
    smallest color unused by already-colored neighbours.
    """
    if threshold < 0:
        raise ParameterError("threshold must be non-negative")
    n = q**d
    table = distance_table(q, d, cap)
    order = sorted(range(n), key=lambda i: index_to_coords(i, q, d))
    adj = (table <= threshold) & ~np.eye(n, dtype=bool)
    colors = [-1] * n
    for v in order:
        taken = {colors[u] for u in np.flatnonzero(adj[v]).tolist() if colors[u] >= 0}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
    max_degree = int(adj.sum(axis=1).max()) if n else 0
    return Coloring(threshold, tuple(colors), max(colors) + 1 if n else 0, max_degree)


def merge_colors(coloring: Coloring, a: int, b: int) -> Coloring:
    """Recolor every ``b`` vertex with ``a`` (deliberately improper; for fault injection)."""
    colors = tuple(a if c == b else c for c in coloring.colors)
    return Coloring(coloring.threshold, colors, len(set(colors)), coloring.max_degree)


def max_degree(q, d, threshold, cap=None) -> int:
    table = distance_table(q, d, cap)
    adj = table <= threshold
    return int(adj.sum(axis=1).max()) - 1


def ball_point_bound(d: int, r) -> float:
    """Upper bound pi^{d/2} (r + 1/2)^d / (d/2)! on integer points in a d-ball of radius r."""
    if d <= 0 or d % 2:
        raise ParameterError("ball bound needs an even positive dimension")
    if r < 0:
        raise ParameterError("radius must be non-negative")
    half = d // 2
    return math.pi**half * (float(r) + 0.5) ** d / math.factorial(half)


def ball_points(center, r_sq):
    """Integer points within squared distance r_sq of ``center`` (no range clipping)."""
    reach = math.isqrt(int(r_sq))
    ranges = [range(c - reach, c + reach + 1) for c in center]
    return [p for p in product(*ranges) if sq_dist_coords(p, center) <= r_sq]
