"""Command-line front end.

    rsforge construct --q 3 --d 2 --protocol simple --out run/
    rsforge verify --out run/ [--check induced --check census ...]
    rsforge stats --out run/
    rsforge export --out run/ --format json --dest graph.json

Exit codes: 0 success, 1 a check failed, 2 parameter error, 3 enumeration cap
exceeded, 4 contract violation (asymmetric set, layer conflict), 5 manifest
mismatch, 6 unwritable path. ``RSFORGE_CAP`` overrides the enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import fields

from .artifacts import (
    dump_json,
    edgelist_text,
    graph_json,
    layers_json,
    parse_edgelist,
    sha256_bytes,
)
from .construct import default_template, load_template, partition_layers
from .errors import ParameterError, RSForgeError
from .functions import check_lines
from .nof import (
    check_correct,
    check_star_free,
    check_symmetric,
    choose_transcript,
    interval_protocol,
    transcript_set,
)
from .pipeline import (
    RunConfig,
    entry_count,
    graph_stats,
    make_function,
    make_protocol_for,
    recipe_stats,
    run_recipe,
)
from .verify import (
    VerificationReport,
    bound_report,
    check_concentration,
    check_induced_steiner_partition,
    check_product_bounds,
    cross_clique_census,
)

log = logging.getLogger("rsforge")

EXIT_CHECK_FAILED = 1
EXIT_MANIFEST = 5
EXIT_UNWRITABLE = 6

CHECKS = ("lines", "correct", "symmetric", "star_free", "induced", "census", "concentration", "bounds", "product", "augment")


class ManifestError(RSForgeError):
    exit_code = EXIT_MANIFEST


class UnwritableError(RSForgeError):
    exit_code = EXIT_UNWRITABLE


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UnwritableError(f"cannot write {path}: {exc}") from exc


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _config_from_args(args) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        try:
            base = json.loads(_read(args.config))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config file {args.config}: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        unknown = set(base) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    for f in fields(RunConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            base[f.name] = val
    return RunConfig(**base).validate()


# construct ------------------------------------------------------------------------------


def cmd_construct(args) -> int:
    cfg = _config_from_args(args)
    res = run_recipe(cfg)
    out = cfg.out
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise UnwritableError(f"cannot create {out}: {exc}") from exc

    files = {}

    def emit(name, text):
        _write(os.path.join(out, name), text)
        files[name] = sha256_bytes(text.encode())

    emit("graph.edgelist", edgelist_text(res.graph))
    if cfg.format == "json":
        emit("graph.json", dump_json(graph_json(res.graph)))
    emit("layers.json", dump_json(layers_json(res.layers)))
    stats = recipe_stats(res)
    emit("stats.json", dump_json(stats))
    if res.augmented_graph is not None:
        emit("augmented.edgelist", edgelist_text(res.augmented_graph))
    if res.product is not None:
        emit("product.edgelist", edgelist_text(res.product.graph))
        emit("product_stats.json", dump_json(check_product_bounds(res.product).to_dict()))
    manifest = {
        "format": "rsforge v1",
        "config": cfg.identity(),
        "config_hash": cfg.hash(),
        "transcript": res.transcript,
        "files": files,
    }
    _write(os.path.join(out, "manifest.json"), dump_json(manifest))
    print(json.dumps(stats, sort_keys=True))
    return 0


# artifact loading ---------------------------------------------------------------------------


def _load_manifest(out):
    path = os.path.join(out, "manifest.json")
    try:
        manifest = json.loads(_read(path))
        cfg = RunConfig(**manifest["config"], out=out)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ManifestError(f"unreadable manifest {path}: {exc}") from exc
    if cfg.hash() != manifest.get("config_hash"):
        raise ManifestError("manifest config does not match its recorded hash")
    return manifest, cfg


def _modified_files(out, manifest):
    bad = []
    for name, digest in sorted(manifest.get("files", {}).items()):
        try:
            with open(os.path.join(out, name), "rb") as fh:
                if sha256_bytes(fh.read()) != digest:
                    bad.append(name)
        except OSError:
            bad.append(name)
    return bad


def _load_graph(out, name="graph.edgelist"):
    try:
        return parse_edgelist(_read(os.path.join(out, name)))
    except OSError as exc:
        raise ManifestError(f"missing artifact {name}: {exc}") from exc


# verify ----------------------------------------------------------------------------------


def _applicable(cfg):
    checks = ["lines", "correct", "symmetric", "induced", "census", "bounds"]
    if cfg.protocol == "simple":
        # interval-based sets are unions over colours and may contain stars
        checks.insert(3, "star_free")
    if cfg.k == 3:
        checks.append("concentration")
    if cfg.t is not None:
        checks.append("product")
    if cfg.augment:
        checks.append("augment")
    return checks


def run_checks(cfg, manifest, out, selected=None):
    f = make_function(cfg)
    p = make_protocol_for(cfg, f)
    transcript = manifest.get("transcript")
    if transcript is None:
        transcript = choose_transcript(p, cfg.transcript, cap=cfg.cap)
    reports = []
    cache = {}

    def entries():
        if "s" not in cache:
            cache["s"] = transcript_set(p, transcript, cap=cfg.cap)
        return cache["s"]

    def graph():
        if "g" not in cache:
            cache["g"] = _load_graph(out)
        return cache["g"]

    for name in selected or _applicable(cfg):
        if name == "lines":
            rep = VerificationReport("lines")
            mode = "weak" if cfg.family == "cube" else "sub"
            for lr in check_lines(f, mode, cap=cfg.cap):
                for v in lr.violations:
                    rep.add({"dimension": lr.dimension, "line": v})
            rep.metrics["mode"] = mode
        elif name == "correct":
            rep = VerificationReport("correct")
            for x in check_correct(p, cap=cfg.cap, threads=cfg.threads):
                rep.add({"input": x})
        elif name == "symmetric":
            rep = VerificationReport("symmetric")
            if not check_symmetric(entries()):
                rep.add({"set": "S_k(T)", "transcript": transcript})
        elif name == "star_free":
            rep = VerificationReport("star_free")
            for centre, witnesses in check_star_free(entries(), cap=cfg.cap):
                rep.add({"centre": centre, "witnesses": witnesses})
        elif name == "induced":
            g, conflicts = graph()
            rep = VerificationReport("induced_steiner")
            for c in conflicts:
                rep.add({"kind": "layer_conflict", **c})
            sub = check_induced_steiner_partition(g)
            for c in sub.counterexamples:
                rep.add(c)
            rep.violation_count += sub.violation_count - len(sub.counterexamples)
            rep.metrics.update(sub.metrics)
        elif name == "census":
            g, _ = graph()
            rep = cross_clique_census(g, entries())
        elif name == "concentration":
            rep = check_concentration(cfg.q, cfg.d, r_sq=cfg.interval_length, cap=cfg.cap)
            if cfg.family == "midpoint":
                ip = p if cfg.protocol == "interval" else interval_protocol(f, cfg.interval_length, cap=cfg.cap)
                s_mu = transcript_set(ip, ip.mean_transcript(), cap=cfg.cap)
                rep.metrics["transcript_set_size"] = len(s_mu)
                if rep.metrics["mean_interval_pairs"] != len(s_mu):
                    rep.add({"p_cross_check": [rep.metrics["mean_interval_pairs"], len(s_mu)]})
        elif name == "bounds":
            g, _ = graph()
            stats = json.loads(_read(os.path.join(out, "stats.json")))
            rep = bound_report(
                q=cfg.q, d=cfg.d, k=cfg.k, n=f.n, N=f.N, gamma=stats["gamma"],
                s_size=entry_count(g), layers=len(set(g.layer.values())),
            )
        elif name == "product":
            from .construct import ProductGraph, build_graph

            pg_graph, conflicts = _load_graph(out, "product.edgelist")
            tpl = load_template(cfg.template) if cfg.template else default_template(cfg.k, cfg.t, f.n)
            rep = check_product_bounds(ProductGraph(cfg.t, build_graph(entries()), tpl, pg_graph))
            for c in conflicts:
                rep.add({"kind": "layer_conflict", **c})
            rep.metrics["template_kk_free"] = tpl.kk_free
        elif name == "augment":
            g, _ = _load_graph(out, "augmented.edgelist")
            stats = json.loads(_read(os.path.join(out, "stats.json")))
            n_prime = f.N * 2 ** stats["gamma"]
            rep = check_induced_steiner_partition(g)
            rep.check = "augment"
            layers = len(partition_layers(g))
            if layers > n_prime or entry_count(g) != len(entries()):
                rep.add({"layers": layers, "Nprime": n_prime, "entries": entry_count(g)})
            rep.metrics.update(Nprime=n_prime, augmented_layers=layers)
        else:
            raise ParameterError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
        reports.append(rep)
    return reports


def cmd_verify(args) -> int:
    manifest, cfg = _load_manifest(args.out)
    if args.threads:
        cfg.threads = args.threads
    modified = _modified_files(args.out, manifest)
    if modified:
        msg = f"artifacts differ from the manifest: {', '.join(modified)}"
        if args.strict:
            raise ManifestError(msg)
        log.warning(msg)
    reports = run_checks(cfg, manifest, args.out, args.check)
    lines = [r.to_json() for r in reports]
    for line in lines:
        print(line)
    if args.report:
        _write(args.report, "\n".join(lines) + "\n")
    return 0 if all(r.passed for r in reports) else EXIT_CHECK_FAILED


# stats / export -----------------------------------------------------------------------------


def cmd_stats(args) -> int:
    manifest, cfg = _load_manifest(args.out)
    g, conflicts = _load_graph(args.out)
    if conflicts:
        raise RSForgeError(f"edge list has layer conflicts: {conflicts[:3]}")
    stored = json.loads(_read(os.path.join(args.out, "stats.json")))
    f = make_function(cfg)
    stats = graph_stats(cfg, g, stored["gamma"], f.N, f.n)
    print(dump_json(stats), end="")
    return 0


def cmd_export(args) -> int:
    _load_manifest(args.out)
    g, _ = _load_graph(args.out, args.which + ".edgelist")
    text = edgelist_text(g) if args.format == "edgelist" else dump_json(graph_json(g))
    if args.dest in (None, "-"):
        sys.stdout.write(text)
    else:
        _write(args.dest, text)
    return 0


# parser ----------------------------------------------------------------------------------


def _add_config_flags(p):
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int, help="interval radius (length r^2)")
    p.add_argument("--r-sq", dest="r_sq", type=int, help="interval length r^2 (default d)")
    p.add_argument("--family", choices=("midpoint", "cube"))
    p.add_argument("--protocol", choices=("simple", "interval", "kplayer"))
    p.add_argument("--transcript", help="auto | mu | explicit:<bits>")
    p.add_argument("--t", type=int, help="product exponent")
    p.add_argument("--template", help="K_k-free template file for the product")
    p.add_argument("--augment", action="store_const", const=True, default=None)
    p.add_argument("--cap", type=int)
    p.add_argument("--format", choices=("edgelist", "json"))


def build_parser():
    parser = argparse.ArgumentParser(prog="rsforge", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="run the recipe and write artifacts")
    _add_config_flags(c)
    c.add_argument("--out")
    c.add_argument("--threads", type=int)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check constructed artifacts")
    v.add_argument("--out", required=True)
    v.add_argument("--check", action="append", choices=CHECKS)
    v.add_argument("--strict", action="store_true", help="exit 5 when artifacts differ from the manifest")
    v.add_argument("--report", help="also write the JSON reports here")
    v.add_argument("--threads", type=int)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="recompute stats from the written edge list")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_stats)

    e = sub.add_parser("export", help="re-serialise a constructed graph")
    e.add_argument("--out", required=True)
    e.add_argument("--format", choices=("edgelist", "json"), default="edgelist")
    e.add_argument("--which", choices=("graph", "product", "augmented"), default="graph")
    e.add_argument("--dest", help="output file (default stdout)")
    e.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except RSForgeError as exc:
        print(f"rsforge: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
