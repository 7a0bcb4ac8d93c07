"""Brute-force checks of the structural claims on constructed instances."""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._cap import guard
from .construct import LayeredGraph, ProductGraph, partition_layers
from .kernels import common_neighbor_counts
from .lattice import build_interval_partition, distance_table, mean_sq_dist
from .nof import EntrySet

MAX_COUNTEREXAMPLES = 32


@dataclass
class VerificationReport:
    check: str
    counterexamples: list = field(default_factory=list)
    violation_count: int = 0
    metrics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def add(self, example):
        self.violation_count += 1
        if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(example)

    def to_dict(self):
        return {
            "check": self.check,
            "passed": self.passed,
            "violation_count": self.violation_count,
            "counterexamples": [_jsonable(c) for c in self.counterexamples],
            "metrics": {k: _jsonable(v) for k, v in sorted(self.metrics.items())},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def check_induced_steiner_partition(g: LayeredGraph) -> VerificationReport:
    """Every layer is a partial Steiner system S(k-2, k-1) and is induced.

    Steiner: no two edges of one layer share k-2 vertices (k = 3: a matching).
    Induced: no edge of another layer has all its vertices inside the vertex
    support of the layer.
    """
    rep = VerificationReport("induced_steiner")
    k = g.k
    layers = partition_layers(g)
    support = {}
    for z, edges in layers:
        owner = {}
        for e in edges:
            for sub in combinations(sorted(set(e)), k - 2):
                if sub in owner:
                    rep.add({"kind": "steiner", "layer": z, "edges": [owner[sub], e]})
                else:
                    owner[sub] = e
        support[z] = {v for e in edges for v in e}
    layers_of_vertex = defaultdict(set)
    for z, verts in support.items():
        for v in verts:
            layers_of_vertex[v].add(z)
    for e in g.a_edges:
        own = g.layer[e]
        inside = set.intersection(*(layers_of_vertex[v] for v in set(e))) - {own}
        for z in sorted(inside):
            rep.add({"kind": "induced", "layer": z, "edge": e, "edge_layer": own})
    sizes = [len(edges) for _, edges in layers]
    rep.metrics.update(
        layers=len(layers),
        a_edges=len(g.layer),
        max_layer_size=max(sizes, default=0),
        min_layer_size=min(sizes, default=0),
    )
    return rep


def _cross_cliques(g: LayeredGraph):
    """{(A-part edge, z)} for every K_k with k-1 vertices in A and one in B."""
    nb = g.neighbours_b()
    found = set()
    for e in g.a_edges:
        parts = set(combinations(e, g.k - 2))
        zs = None
        for part in parts:
            cand = nb.get(part, set())
            zs = set(cand) if zs is None else zs & cand
            if not zs:
                break
        for z in zs or ():
            found.add((e, z))
    return found


def expected_cliques(s: EntrySet):
    """The cliques an entry set should produce: sorted non-degenerate heads with their z."""
    out = set()
    for e in s.entries:
        head = tuple(sorted(e[:-1]))
        if s.k == 3 or len(set(head)) == len(head):
            out.add((head, e[-1]))
    return out


def clique_counts(g: LayeredGraph, cliques):
    """Number of given cross cliques through each edge (A-part and cross)."""
    counts = Counter()
    for e, z in cliques:
        counts[("A", e)] += 1
        for part in set(combinations(e, g.k - 2)):
            counts[("X", part, z)] += 1
    for e in g.layer:
        counts.setdefault(("A", e), 0)
    for part, z in g.cross:
        counts.setdefault(("X", part, z), 0)
    return counts


def cross_clique_census(g: LayeredGraph, s: EntrySet) -> VerificationReport:
    """The cross K_k copies of the graph coincide with the entry set."""
    rep = VerificationReport("clique_census")
    found = _cross_cliques(g)
    expected = expected_cliques(s)
    for c in sorted(found - expected):
        rep.add({"kind": "extra", "clique": c})
    for c in sorted(expected - found):
        rep.add({"kind": "missing", "clique": c})
    counts = clique_counts(g, found)
    a_counts = [v for key, v in counts.items() if key[0] == "A"]
    rep.metrics.update(
        cliques=len(found),
        expected=len(expected),
        extra=len(found - expected),
        missing=len(expected - found),
        max_clique_per_edge=max(counts.values(), default=0),
        min_clique_per_edge=min(counts.values(), default=0),
        max_clique_per_a_edge=max(a_counts, default=0),
        min_clique_per_a_edge=min(a_counts, default=0),
    )
    return rep


def census_set(g: LayeredGraph):
    return _cross_cliques(g)


def _a_only_triangles(g: LayeredGraph):
    adj = defaultdict(set)
    for u, v in g.layer:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    tri = []
    for u, v in g.layer:
        if u < v:
            for w in adj[u] & adj[v]:
                if w > v:
                    tri.append((u, v, w))
    return tri


def check_product_bounds(pg: ProductGraph) -> VerificationReport:
    """Every edge of the product lies in at least 1 and at most 2^t triangles (K_k copies)."""
    rep = VerificationReport("product_bounds")
    g = pg.graph
    limit = 2**pg.t
    if g.k == 3:
        adj = np.zeros((g.n_a, g.n_b), dtype=np.uint8)
        for (u,), z in g.cross:
            adj[u, z] = 1
        edges = g.a_edges
        us = np.array([e[0] for e in edges], dtype=np.int64)
        vs = np.array([e[1] for e in edges], dtype=np.int64)
        a_counts = common_neighbor_counts(adj, us, vs) if edges else np.zeros(0, dtype=np.int64)
        counts = {("A", e): int(c) for e, c in zip(edges, a_counts)}
        nbr_a = defaultdict(set)
        for u, v in edges:
            nbr_a[u].add(v)
            nbr_a[v].add(u)
        for (u,), z in g.cross:
            counts[("X", (u,), z)] = sum(1 for w in nbr_a[u] if adj[w, z]) + (1 if (u, u) in g.layer and adj[u, z] else 0)
        extra = _a_only_triangles(g)
        for tri in extra:
            for e in combinations(tri, 2):
                counts[("A", e)] += 1
    else:
        counts = clique_counts(g, _cross_cliques(g))
        extra = []
    for key, c in sorted(counts.items()):
        if not 1 <= c <= limit:
            rep.add({"edge": key, "count": c})
    a_vals = [c for key, c in counts.items() if key[0] == "A"]
    total_vertices = g.n_a + g.n_b
    n_a = g.n_a
    rep.metrics.update(
        t=pg.t,
        limit=limit,
        edges=len(counts),
        a_edges=len(a_vals),
        min_count=min(counts.values(), default=0),
        max_count=max(counts.values(), default=0),
        min_a_count=min(a_vals, default=0),
        max_a_count=max(a_vals, default=0),
        a_only_triangles=len(extra),
        template_density=pg.template.density(),
        edge_density=len(counts) / total_vertices**2 if total_vertices else 0.0,
        reference_density=0.25 * n_a**2 / total_vertices**2 if total_vertices else 0.0,
    )
    return rep


def hoeffding_bound(t, q, d) -> float:
    return 2.0 * math.exp(-2.0 * t * t / (d * q**4))


def distance_histogram(q, d, cap=None) -> Counter:
    guard((q**d) ** 2, cap, "point pairs")
    table = distance_table(q, d, cap)
    vals, cnts = np.unique(table, return_counts=True)
    return Counter(dict(zip(vals.tolist(), cnts.tolist())))


def check_concentration(q: int, d: int, r=None, *, r_sq=None, cap=None) -> VerificationReport:
    """Exact tail of ||x - y||^2 over all ordered pairs against 2 exp(-2 t^2 / (d q^4))."""
    rep = VerificationReport("concentration")
    hist = distance_histogram(q, d, cap)
    pairs = sum(hist.values())
    mu = mean_sq_dist(q, d)
    for t in range(0, d * q * q + 1):
        tail = Fraction(sum(c for v, c in hist.items() if abs(v - mu) >= t), pairs)
        if float(tail) > hoeffding_bound(t, q, d):
            rep.add({"t": t, "tail": tail, "bound": hoeffding_bound(t, q, d)})
    if r is not None or r_sq is not None:
        part = build_interval_partition(q, d, r, r_sq=r_sq)
        centre = part.center_index
        mass = sum(c for v, c in hist.items() if part.index(v) == centre)
        rep.metrics.update(p=Fraction(mass, pairs), p_float=mass / pairs, mean_interval_pairs=mass)
    rep.metrics.update(mu=mu, pairs=pairs, histogram={int(v): int(c) for v, c in sorted(hist.items())})
    return rep


def bound_report(
    *, q, d, k, n, N, gamma, s_size, layers, augmented_layers=None
) -> VerificationReport:
    """Finite-instance counting inequalities for one pipeline run."""
    rep = VerificationReport("bounds")
    n_prime = N * 2**gamma
    base = 2 * q if k == 3 else (k - 1) * q
    p = Fraction(s_size, n ** (k - 1))
    checks = {
        "N_le_2q_pow_d": N <= base**d,
        "Nprime_eq_N_2_pow_gamma": n_prime == N * 2**gamma,
        "layers_le_N": layers <= N,
    }
    if augmented_layers is not None:
        checks["augmented_layers_le_Nprime"] = augmented_layers <= n_prime
    for name, ok in checks.items():
        if not ok:
            rep.add({"inequality": name})
    rep.metrics.update(
        p=p,
        p_float=float(p),
        gamma=gamma,
        N=N,
        Nprime=n_prime,
        N_bound=base**d,
        layers=layers,
        h_bound=(n_prime / n) ** 2,
        **checks,
    )
    return rep
