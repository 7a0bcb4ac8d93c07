"""Artifact file formats.

Edge list (``*.edgelist``)::

    # rsforge v1 k=<k> nA=<n> nB=<N>
    A:<i> A:<j> z=B:<z>          A-part edge (k-1 A vertices) with its layer
    A:<i> B:<z>                  cross edge (k-2 A vertices and one B vertex)
    # degenerate A:<i> A:<i> A:<j> z=B:<z>

A k = 3 self loop is written with its vertex repeated. A-part edges come first
in increasing vertex order, then cross edges, then degenerate records (entries
with a repeated A-vertex, k > 3 only). Other ``#`` lines are ignored on input.

JSON graph (``*.json``): ``{"format", "k", "nA", "nB", "a_edges": [{"vertices",
"z"}], "cross_edges": [{"vertices"}], "degenerate": [{"vertices", "z"}]}``.

Stats, layers and manifest files are JSON with sorted keys and a trailing
newline, so identical configurations give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import re

from .construct import LayeredGraph
from .errors import ParameterError

FORMAT = "rsforge v1"
_HEADER = re.compile(r"^# rsforge v1 k=(\d+) nA=(\d+) nB=(\d+)\s*$")


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def edgelist_text(g: LayeredGraph) -> str:
    lines = [f"# {FORMAT} k={g.k} nA={g.n_a} nB={g.n_b}"]
    lines.extend(g.canonical_lines())
    for head, z in g.degenerate:
        lines.append("# degenerate " + " ".join(f"A:{v}" for v in head) + f" z=B:{z}")
    return "\n".join(lines) + "\n"


def _vertex(tok, prefix):
    if not tok.startswith(prefix + ":"):
        raise ParameterError(f"expected a {prefix}-vertex, got {tok!r}")
    return int(tok[len(prefix) + 1 :])


def parse_edgelist(text: str):
    """Return (graph, conflicts). Layer conflicts are collected, not raised."""
    lines = text.splitlines()
    if not lines:
        raise ParameterError("empty edge list")
    m = _HEADER.match(lines[0])
    if not m:
        raise ParameterError(f"bad edge-list header: {lines[0]!r}")
    k, n_a, n_b = (int(v) for v in m.groups())
    g = LayeredGraph(k, n_a, n_b)
    conflicts = []
    for raw in lines[1:]:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# degenerate "):
            toks = line[len("# degenerate ") :].split()
            head = tuple(sorted(_vertex(t, "A") for t in toks[:-1]))
            g.degenerate.append((head, _vertex(toks[-1][2:], "B")))
            continue
        if line.startswith("#"):
            continue
        toks = line.split()
        if toks[-1].startswith("z="):
            head = tuple(sorted(_vertex(t, "A") for t in toks[:-1]))
            if len(head) != k - 1:
                raise ParameterError(f"A-part edge {line!r} does not have {k - 1} vertices")
            z = _vertex(toks[-1][2:], "B")
            old = g.layer.setdefault(head, z)
            if old != z:
                conflicts.append({"edge": head, "layers": [old, z]})
        else:
            part = tuple(sorted(_vertex(t, "A") for t in toks[:-1]))
            if len(part) != k - 2:
                raise ParameterError(f"cross edge {line!r} does not have {k - 2} A-vertices")
            g.cross.add((part, _vertex(toks[-1], "B")))
    for e in list(g.layer) + [part for part, _ in g.cross]:
        if any(not 0 <= v < n_a for v in e):
            raise ParameterError(f"A-vertex out of range in {e}")
    g.degenerate = sorted(set(g.degenerate))
    return g, conflicts


def graph_json(g: LayeredGraph) -> dict:
    return {
        "format": FORMAT,
        "k": g.k,
        "nA": g.n_a,
        "nB": g.n_b,
        "a_edges": [{"vertices": [f"A:{v}" for v in e], "z": f"B:{g.layer[e]}"} for e in g.a_edges],
        "cross_edges": [
            {"vertices": [f"A:{v}" for v in part] + [f"B:{z}"]} for part, z in sorted(g.cross)
        ],
        "degenerate": [{"vertices": [f"A:{v}" for v in h], "z": f"B:{z}"} for h, z in g.degenerate],
    }


def parse_graph_json(obj) -> LayeredGraph:
    if obj.get("format") != FORMAT:
        raise ParameterError("not an rsforge v1 graph document")
    g = LayeredGraph(obj["k"], obj["nA"], obj["nB"])
    for rec in obj["a_edges"]:
        g.add_a_edge(tuple(_vertex(t, "A") for t in rec["vertices"]), _vertex(rec["z"], "B"))
    for rec in obj["cross_edges"]:
        *a, b = rec["vertices"]
        g.cross.add((tuple(sorted(_vertex(t, "A") for t in a)), _vertex(b, "B")))
    for rec in obj["degenerate"]:
        g.degenerate.append((tuple(sorted(_vertex(t, "A") for t in rec["vertices"])), _vertex(rec["z"], "B")))
    return g


def layers_json(layers) -> dict:
    return {"layers": [{"z": z, "edges": [list(e) for e in edges]} for z, edges in layers]}
