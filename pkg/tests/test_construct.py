from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsforge.artifacts import edgelist_text, graph_json, parse_edgelist, parse_graph_json
from rsforge.construct import (
    LayeredGraph,
    build_graph,
    build_product,
    check_kk_free,
    default_template,
    full_template,
    parse_template,
    partition_layers,
)
from rsforge.errors import ContractError, ParameterError
from rsforge.functions import midpoint_function
from rsforge.nof import EntrySet, choose_transcript, interval_protocol, kplayer_protocol, simple_protocol, transcript_set

G32 = midpoint_function(3, 2)


def entry_set(entries, k=3, dims=(9, 9, 25)):
    return EntrySet(k, dims, frozenset(entries))


def symmetric_closure(heads_z, k=3):
    from itertools import permutations

    return {p + (z,) for head, z in heads_z for p in permutations(head)}


def test_build_graph_example():
    g = build_graph(entry_set({(1, 2, 5), (2, 1, 5)}))
    assert g.layer == {(1, 2): 5}
    assert g.cross == {((1,), 5), ((2,), 5)}
    assert g.canonical_lines() == ["A:1 A:2 z=B:5", "A:1 B:5", "A:2 B:5"]


def test_empty_set_gives_empty_graph():
    g = build_graph(entry_set(set()))
    assert (g.n_a, g.n_b, g.edge_count) == (9, 25, 0)
    assert edgelist_text(g) == "# rsforge v1 k=3 nA=9 nB=25\n"
    assert partition_layers(g) == []


def test_k3_keeps_self_loops():
    g = build_graph(entry_set({(4, 4, 12)}))
    assert g.layer == {(4, 4): 12}
    assert g.cross == {((4,), 12)}


def test_asymmetric_set_is_rejected():
    with pytest.raises(ContractError):
        build_graph(entry_set({(1, 2, 5)}))


def test_layer_conflict_is_rejected():
    g = LayeredGraph(3, 9, 25)
    g.add_a_edge((1, 2), 5)
    with pytest.raises(ContractError):
        g.add_a_edge((2, 1), 6)


def _edges_from_definition(s):
    """Every (k-1)-subset of every entry, split into A-part and cross edges."""
    a_edges, cross = {}, set()
    for e in s.entries:
        head, z = e[:-1], e[-1]
        if s.k > 3 and len(set(head)) < len(head):
            continue
        a_edges[tuple(sorted(head))] = z
        for i in range(len(head)):
            cross.add((tuple(sorted(head[:i] + head[i + 1 :])), z))
    return a_edges, cross


@pytest.mark.parametrize(
    "p",
    [simple_protocol(G32), interval_protocol(G32, 2), kplayer_protocol(midpoint_function(3, 2, k=4), 4)],
    ids=["simple", "interval", "kplayer"],
)
def test_edges_match_definition(p):
    s = transcript_set(p, choose_transcript(p))
    g = build_graph(s)
    a_edges, cross = _edges_from_definition(s)
    assert g.layer == a_edges
    assert g.cross == cross
    layers = partition_layers(g)
    covered = [e for _, edges in layers for e in edges]
    assert len(covered) == len(set(covered)) == len(g.layer)
    assert len(layers) <= g.n_b


def test_interval_graph_edge_count_is_unordered_pairs():
    p = interval_protocol(G32, 2)
    s = transcript_set(p, p.mean_transcript())
    assert len(build_graph(s).layer) == len({tuple(sorted(e[:2])) for e in s})


def test_single_entry_gives_single_layer():
    g = build_graph(entry_set({(3, 3, 7)}))
    assert partition_layers(g) == [(7, [(3, 3)])]


def test_k4_degenerate_entries_are_recorded_not_drawn():
    s = entry_set(symmetric_closure([((0, 0, 1), 3), ((0, 1, 2), 4)]), k=4, dims=(4, 4, 4, 16))
    g = build_graph(s)
    assert g.layer == {(0, 1, 2): 4}
    assert g.degenerate == [((0, 0, 1), 3)]
    back, _ = parse_edgelist(edgelist_text(g))
    assert back.degenerate == g.degenerate


# -- templates and product


def test_default_template_example():
    tpl = default_template(3, 1, 2)
    assert tpl.vertex_count == 4
    assert len(tpl.edges) == 4
    assert tpl.kk_free is True
    assert tpl.declared_density == Fraction(1, 4) == tpl.density()


@pytest.mark.parametrize("t, n", [(1, 9), (2, 9), (3, 4)])
def test_default_template_density_is_quarter(t, n):
    assert default_template(3, t, n).density() == Fraction(1, 4)


def test_full_template_has_triangles():
    assert check_kk_free(full_template(3, 1, 2)) is False


def test_template_parsing():
    text = "# a triangle-free template\n3 1 2 1/4\n0:0 1:0\n0:0 1:1\n0:1 1:0\n0:1 1:1\n"
    tpl = parse_template(text)
    assert tpl.edges == default_template(3, 1, 2).edges
    assert tpl.declared_density == Fraction(1, 4)
    assert tpl.kk_free is True
    with pytest.raises(ParameterError):
        parse_template("3 1 2\n0:0 2:0\n")
    with pytest.raises(ParameterError):
        parse_template("3 1 2\n0:0\n")


def test_template_k4():
    tpl = parse_template("4 1 2\n0:0 0:1 1:0\n0:0 0:1 1:1\n0:0 1:0 1:1\n")
    assert tpl.kk_free is True
    tpl = parse_template("4 0 4\n0:0 0:1 0:2\n0:0 0:1 0:3\n0:0 0:2 0:3\n0:1 0:2 0:3\n")
    assert tpl.kk_free is False


def _simple_s():
    p = simple_protocol(G32)
    return transcript_set(p, choose_transcript(p))


def test_product_t0_full_template_is_identity():
    s = _simple_s()
    pg = build_product(G32, s, 0, full_template(3, 0, G32.n))
    assert pg.graph.layer == pg.base.layer
    assert pg.graph.cross == pg.base.cross


@pytest.mark.parametrize("t", [1, 2])
def test_product_edge_count_by_double_counting(t):
    s = _simple_s()
    base = build_graph(s)
    pg = build_product(G32, s, t, default_template(3, t, G32.n))
    half = 2 ** (t - 1)
    expected = sum(half * half if x == y else 2 * half * half for x, y in base.layer)
    assert len(pg.graph.layer) == expected
    for u, v in pg.graph.layer:
        assert (u, v) in pg.template.edges
        assert tuple(sorted((u % G32.n, v % G32.n))) in base.layer


def test_product_template_shape_mismatch():
    with pytest.raises(ParameterError):
        build_product(G32, _simple_s(), 2, default_template(3, 1, G32.n))


def test_default_template_needs_k3():
    with pytest.raises(ParameterError):
        default_template(4, 1, 4)
    with pytest.raises(ParameterError):
        default_template(3, 0, 4)


# -- serialisation


def test_graph_is_deterministic():
    s = _simple_s()
    assert edgelist_text(build_graph(s)) == edgelist_text(build_graph(s))


@settings(max_examples=80, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 7)), max_size=10))
def test_edgelist_and_json_roundtrip(raw):
    # keep one z per head so the layering is single valued
    heads = {}
    for x, y, z in raw:
        heads.setdefault(tuple(sorted((x, y))), z)
    s = EntrySet(3, (6, 6, 8), frozenset(symmetric_closure(heads.items())))
    g = build_graph(s)
    text = edgelist_text(g)
    back, conflicts = parse_edgelist(text)
    assert conflicts == []
    assert edgelist_text(back) == text
    assert edgelist_text(parse_graph_json(graph_json(g))) == text


def test_edgelist_parser_reports_conflicts_and_bad_input():
    g, conflicts = parse_edgelist("# rsforge v1 k=3 nA=4 nB=4\nA:0 A:1 z=B:1\nA:1 A:0 z=B:2\n")
    assert conflicts == [{"edge": (0, 1), "layers": [1, 2]}]
    with pytest.raises(ParameterError):
        parse_edgelist("# rsforge v2 k=3 nA=4 nB=4\n")
    with pytest.raises(ParameterError):
        parse_edgelist("# rsforge v1 k=3 nA=4 nB=4\nA:0 A:9 z=B:1\n")
    with pytest.raises(ParameterError):
        parse_edgelist("# rsforge v1 k=3 nA=4 nB=4\nA:0 B:1 B:2\n")
    with pytest.raises(ParameterError):
        parse_edgelist("")


def test_cross_edges_come_from_every_subset():
    s = entry_set(symmetric_closure([((0, 1, 2), 5)], k=4), k=4, dims=(4, 4, 4, 16))
    g = build_graph(s)
    assert {part for part, _ in g.cross} == set(combinations((0, 1, 2), 2))
