"""Graphs and hypergraphs from symmetric entry sets, and the template product.

A-part vertices are the n points of [q]^d (``A:i``); B-part vertices are the N
last-coordinate values (``B:j``). An entry (x_1, ..., x_{k-1}, z) contributes
every (k-1)-subset of {x_1, ..., x_k}: one A-part edge carrying layer z, and
k-1 cross edges that contain z.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .errors import ContractError, ParameterError
from .nof import EntrySet, check_symmetric

log = logging.getLogger(__name__)

KK_SEARCH_LIMIT = 10**5


@dataclass
class LayeredGraph:
    """A-part edges are sorted index tuples of length k-1 (a k = 3 loop is (x, x)).

    Cross edges are stored as (A-part tuple of length k-2, z).
    """

    k: int
    n_a: int
    n_b: int
    layer: dict = field(default_factory=dict)
    cross: set = field(default_factory=set)
    degenerate: list = field(default_factory=list)

    @property
    def a_edges(self):
        return sorted(self.layer)

    @property
    def edge_count(self):
        return len(self.layer) + len(self.cross)

    def add_a_edge(self, edge, z):
        edge = tuple(sorted(edge))
        old = self.layer.setdefault(edge, z)
        if old != z:
            raise ContractError(f"edge {edge} lies in two layers ({old} and {z})")

    def add_entry(self, head, z):
        head = tuple(sorted(head))
        if self.k > 3 and len(set(head)) < len(head):
            self.degenerate.append((head, z))
            return
        self.add_a_edge(head, z)
        for part in set(combinations(head, self.k - 2)):
            self.cross.add((part, z))

    def neighbours_b(self):
        """A-part (k-2)-tuple -> set of B vertices it shares a cross edge with."""
        out = {}
        for part, z in self.cross:
            out.setdefault(part, set()).add(z)
        return out

    def canonical_lines(self):
        """Edge-list lines in canonical order (A-part edges first, then cross edges)."""
        lines = []
        for e in self.a_edges:
            lines.append(" ".join(f"A:{v}" for v in e) + f" z=B:{self.layer[e]}")
        for part, z in sorted(self.cross):
            lines.append(" ".join(f"A:{v}" for v in part) + f" B:{z}")
        return lines


def build_graph(s: EntrySet, n_b=None) -> LayeredGraph:
    if not check_symmetric(s):
        raise ContractError("entry set is not symmetric in its first k-1 coordinates")
    g = LayeredGraph(s.k, s.dims[0], s.dims[-1] if n_b is None else n_b)
    for e in s:
        g.add_entry(e[:-1], e[-1])
    g.degenerate = sorted(set(g.degenerate))
    if g.degenerate:
        log.info("skipped %d entries with repeated A-part vertices", len(g.degenerate))
    return g


def partition_layers(g: LayeredGraph):
    """[(z, edges of layer z)] for every nonempty layer, in increasing z."""
    layers = {}
    for e in g.a_edges:
        layers.setdefault(g.layer[e], []).append(e)
    out = sorted(layers.items())
    seen = set()
    for _, edges in out:
        for e in edges:
            if e in seen:
                raise ContractError(f"edge {e} appears in two layers")
            seen.add(e)
    if len(out) > g.n_b:
        raise ContractError("more layers than B-part vertices")
    return out


# templates and the product ------------------------------------------------------------


@dataclass
class CliqueTemplate:
    k: int
    t: int
    n: int
    edges: frozenset
    declared_density: Fraction
    kk_free: bool | None = None

    @property
    def vertex_count(self):
        return 2**self.t * self.n

    def density(self) -> Fraction:
        return Fraction(len(self.edges), self.vertex_count ** (self.k - 1))


def default_template(k: int, t: int, n: int) -> CliqueTemplate:
    """Complete bipartite graph between the halves alpha < 2^(t-1) and alpha >= 2^(t-1)."""
    if k != 3:
        raise ParameterError("no built-in K_k-free template for k > 3; supply one with --template")
    if t < 1:
        raise ParameterError("the bipartite template needs t >= 1")
    half = 2 ** (t - 1) * n
    total = 2**t * n
    edges = frozenset((u, v) for u in range(half) for v in range(half, total))
    tpl = CliqueTemplate(3, t, n, edges, Fraction(1, 4))
    tpl.kk_free = check_kk_free(tpl)
    return tpl


def full_template(k: int, t: int, n: int) -> CliqueTemplate:
    """Every (k-1)-multiset of vertices; the product with it is a plain blow-up."""
    total = 2**t * n
    edges = frozenset(combinations_with_replacement(range(total), k - 1))
    return CliqueTemplate(k, t, n, edges, Fraction(len(edges), total ** (k - 1)), kk_free=False)


def check_kk_free(tpl: CliqueTemplate):
    """True/False by exhaustive search, or None when the search space is too large."""
    k = tpl.k
    edges = {e for e in tpl.edges if len(set(e)) == k - 1}
    if len(edges) * tpl.vertex_count > KK_SEARCH_LIMIT:
        log.warning("template too large for an exhaustive K_%d search; accepting it unverified", k)
        return None
    for e in edges:
        for v in range(max(e) + 1, tpl.vertex_count):
            clique = e + (v,)
            if all(tuple(sorted(sub)) in edges for sub in combinations(clique, k - 1)):
                return False
    return True


def parse_template(text: str, declared_density=None) -> CliqueTemplate:
    """Template file: header ``k t n [density]``, then one edge per line as ``alpha:x`` tokens.

    Indices are 0-based; vertex (alpha, x) gets id alpha * n + x. ``#`` starts a comment.
    """
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ParameterError("empty template file")
    header = rows[0]
    if len(header) not in (3, 4):
        raise ParameterError("template header must be 'k t n [density]'")
    k, t, n = (int(v) for v in header[:3])
    total = 2**t * n
    edges = set()
    for r in rows[1:]:
        if len(r) != k - 1:
            raise ParameterError(f"template edge {' '.join(r)!r} does not have {k - 1} vertices")
        ids = []
        for tok in r:
            try:
                a, x = (int(v) for v in tok.split(":"))
            except ValueError:
                raise ParameterError(f"bad template vertex {tok!r}") from None
            if not (0 <= a < 2**t and 0 <= x < n):
                raise ParameterError(f"template vertex {tok!r} out of range")
            ids.append(a * n + x)
        edges.add(tuple(sorted(ids)))
    density = Fraction(header[3]) if len(header) == 4 else Fraction(len(edges), total ** (k - 1))
    if declared_density is not None:
        density = Fraction(declared_density)
    tpl = CliqueTemplate(k, t, n, frozenset(edges), density)
    tpl.kk_free = check_kk_free(tpl)
    return tpl


def load_template(path) -> CliqueTemplate:
    with open(path, encoding="utf-8") as fh:
        return parse_template(fh.read())


@dataclass
class ProductGraph:
    t: int
    base: LayeredGraph
    template: CliqueTemplate
    graph: LayeredGraph

    def vertex(self, vid):
        """(alpha, x) for an A-part id of the product."""
        return divmod(vid, self.base.n_a)


def build_product(f, s: EntrySet, t: int, template: CliqueTemplate) -> ProductGraph:
    """Blow up each A-vertex into 2^t copies and keep only template-selected A-part edges.

    An A-part edge {(a_1, x_1), ..., (a_{k-1}, x_{k-1})} is present iff it is a
    template edge and (x_1, ..., x_{k-1}, z) is in ``s`` for some z; its cross
    edges come along unfiltered.
    """
    n = f.n
    if template.k != s.k or template.t != t or template.n != n:
        raise ParameterError(
            f"template is for (k={template.k}, t={template.t}, n={template.n}), "
            f"need (k={s.k}, t={t}, n={n})"
        )
    if not check_symmetric(s):
        raise ContractError("entry set is not symmetric in its first k-1 coordinates")
    heads = {}
    for e in s.entries:
        heads[tuple(sorted(e[:-1]))] = e[-1]
    base = build_graph(s)
    g = LayeredGraph(s.k, 2**t * n, s.dims[-1])
    for edge in sorted(template.edges):
        z = heads.get(tuple(sorted(v % n for v in edge)))
        if z is not None:
            g.add_entry(edge, z)
    return ProductGraph(t, base, template, g)
