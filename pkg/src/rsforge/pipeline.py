"""The construction recipe end to end: function -> protocol -> S -> graph -> layers."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from math import factorial, prod
from collections import Counter

from .construct import (
    LayeredGraph,
    build_graph,
    build_product,
    default_template,
    load_template,
    partition_layers,
)
from .errors import ContractError, ParameterError
from .functions import FunctionSpec
from .nof import augment, check_symmetric, choose_transcript, cost, make_protocol, transcript_set
from .verify import bound_report, census_set, clique_counts

CONFIG_KEYS = ("q", "d", "k", "r", "r_sq", "family", "protocol", "transcript", "t", "template", "augment", "cap")


@dataclass
class RunConfig:
    q: int = 3
    d: int = 2
    k: int = 3
    r: int | None = None
    r_sq: int | None = None
    family: str = "midpoint"
    protocol: str = "simple"
    transcript: str = "auto"
    t: int | None = None
    template: str | None = None
    augment: bool = False
    cap: int | None = None
    out: str = "rsforge-out"
    format: str = "edgelist"
    threads: int = 1

    def validate(self):
        if self.k < 3:
            raise ParameterError("k must be at least 3")
        if self.q < 2 or self.d < 1:
            raise ParameterError("need q >= 2 and d >= 1")
        if self.protocol == "kplayer" and self.k <= 3:
            raise ParameterError("the kplayer protocol requires k > 3")
        if self.protocol in ("simple", "interval") and self.k != 3:
            raise ParameterError(f"the {self.protocol} protocol requires k = 3")
        if self.r is not None and self.r_sq is not None and self.r * self.r != self.r_sq:
            raise ParameterError("--r and --r-sq disagree")
        if self.r is not None and self.r < 1:
            raise ParameterError("the interval protocol requires r >= 1")
        if self.family not in ("midpoint", "cube"):
            raise ParameterError(f"unknown family {self.family!r}")
        if self.family == "cube" and self.protocol != "simple":
            raise ParameterError("the cube family is paired with the simple protocol")
        if self.format not in ("edgelist", "json"):
            raise ParameterError(f"unknown format {self.format!r}")
        return self

    @property
    def interval_length(self):
        if self.r_sq is not None:
            return self.r_sq
        if self.r is not None:
            return self.r * self.r
        return self.d

    def identity(self) -> dict:
        """The fields that determine the artifacts (no paths, no thread count)."""
        return {key: getattr(self, key) for key in CONFIG_KEYS}

    def hash(self) -> str:
        return hashlib.sha256(json.dumps(self.identity(), sort_keys=True).encode()).hexdigest()


def make_function(cfg: RunConfig) -> FunctionSpec:
    if cfg.family == "cube":
        return FunctionSpec("cube", cfg.q, cfg.d, cfg.k)
    return FunctionSpec("midpoint" if cfg.k == 3 else "kmidpoint", cfg.q, cfg.d, cfg.k)


def make_protocol_for(cfg: RunConfig, f=None):
    f = f or make_function(cfg)
    if cfg.protocol == "simple":
        return make_protocol("simple", f)
    return make_protocol(cfg.protocol, f, cfg.interval_length, cap=cfg.cap)


@dataclass
class RecipeResult:
    config: RunConfig
    function: FunctionSpec
    protocol: object
    transcript: str
    entries: object
    graph: LayeredGraph
    layers: list
    gamma: int
    augmented: tuple | None = None
    augmented_graph: LayeredGraph | None = None
    product: object = None
    extra: dict = field(default_factory=dict)

    @property
    def n_prime(self):
        return self.function.N * 2**self.gamma


def run_recipe(cfg: RunConfig) -> RecipeResult:
    cfg.validate()
    f = make_function(cfg)
    p = make_protocol_for(cfg, f)
    t = choose_transcript(p, cfg.transcript, cap=cfg.cap)
    s = transcript_set(p, t, "last_player", cap=cfg.cap)
    if not check_symmetric(s):
        raise ContractError(f"S_k(T) for T={t!r} is not symmetric")
    graph = build_graph(s)
    layers = partition_layers(graph)
    gamma = cost(p, cap=cfg.cap, threads=cfg.threads)
    res = RecipeResult(cfg, f, p, t, s, graph, layers, gamma)
    if cfg.augment:
        g, s_prime, p_prime = augment(f, p, t, gamma=gamma, cap=cfg.cap)
        res.augmented = (g, s_prime, p_prime)
        res.augmented_graph = build_graph(s_prime)
    if cfg.t is not None:
        tpl = load_template(cfg.template) if cfg.template else default_template(cfg.k, cfg.t, f.n)
        res.product = build_product(f, s, cfg.t, tpl)
    return res


def orbit_size(head) -> int:
    """Number of orderings of a multiset of k-1 vertices."""
    return factorial(len(head)) // prod(factorial(c) for c in Counter(head).values())


def entry_count(graph: LayeredGraph) -> int:
    """|S| recovered from a graph: each layered A-edge or degenerate record is one orbit."""
    return sum(orbit_size(e) for e in graph.layer) + sum(orbit_size(h) for h, _ in graph.degenerate)


def graph_stats(cfg: RunConfig, graph: LayeredGraph, gamma: int, N: int, n: int) -> dict:
    layers = len({z for z in graph.layer.values()})
    counts = clique_counts(graph, census_set(graph))
    s_size = entry_count(graph)
    bounds = bound_report(q=cfg.q, d=cfg.d, k=cfg.k, n=n, N=N, gamma=gamma, s_size=s_size, layers=layers)
    return {
        "q": cfg.q,
        "d": cfg.d,
        "k": cfg.k,
        "r": cfg.r,
        "protocol": cfg.protocol,
        "gamma": gamma,
        "N": N,
        "Nprime": N * 2**gamma,
        "p": s_size / n ** (cfg.k - 1),
        "layers": layers,
        "max_clique_per_edge": max(counts.values(), default=0),
        "bounds": {
            "N_le_2q_pow_d": bounds.metrics["N_le_2q_pow_d"],
            "h_bound": bounds.metrics["h_bound"],
        },
    }


def recipe_stats(res: RecipeResult) -> dict:
    return graph_stats(res.config, res.graph, res.gamma, res.function.N, res.function.n)
