import hashlib
import json
import os

import pytest

from rsforge.cli import main

SIMPLE = ["--q", "3", "--d", "2", "--k", "3", "--protocol", "simple", "--transcript", "auto"]


def construct(tmp_path, name, *flags):
    out = tmp_path / name
    code = main(["construct", *flags, "--out", str(out)])
    return code, out


def read_json(path):
    return json.loads(path.read_text())


def digest_dir(path):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(path.iterdir())}


def test_construct_simple(tmp_path, capsys):
    code, out = construct(tmp_path, "run", *SIMPLE)
    assert code == 0
    assert {p.name for p in out.iterdir()} == {"graph.edgelist", "layers.json", "stats.json", "manifest.json"}
    stats = read_json(out / "stats.json")
    assert set(stats) == {"q", "d", "k", "r", "protocol", "gamma", "N", "Nprime", "p", "layers", "max_clique_per_edge", "bounds"}
    assert set(stats["bounds"]) == {"N_le_2q_pow_d", "h_bound"}
    assert stats["gamma"] == 2 and stats["Nprime"] == 100
    assert stats["layers"] <= 25
    assert (out / "graph.edgelist").read_text().startswith("# rsforge v1 k=3 nA=9 nB=25\n")
    manifest = read_json(out / "manifest.json")
    assert set(manifest["files"]) == {"graph.edgelist", "layers.json", "stats.json"}
    assert "out" not in manifest["config"]


def test_verify_passes_on_fresh_artifacts(tmp_path, capsys):
    _, out = construct(tmp_path, "run", *SIMPLE)
    capsys.readouterr()
    assert main(["verify", "--out", str(out)]) == 0
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert all(r["passed"] for r in lines)
    assert {r["check"] for r in lines} >= {"lines", "correct", "symmetric", "star_free", "induced_steiner", "clique_census", "bounds", "concentration"}


def test_verify_detects_injected_edge(tmp_path, capsys):
    _, out = construct(tmp_path, "run", *SIMPLE)
    with open(out / "graph.edgelist", "a") as fh:
        fh.write("A:0 A:4 z=B:9\n")
    capsys.readouterr()
    assert main(["verify", "--out", str(out), "--check", "induced"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["check"] == "induced_steiner"
    assert any(c["kind"] == "induced" for c in report["counterexamples"])
    assert main(["verify", "--out", str(out), "--strict"]) == 5


def test_verify_single_check(tmp_path, capsys):
    _, out = construct(tmp_path, "run", *SIMPLE)
    capsys.readouterr()
    report = tmp_path / "report.jsonl"
    assert main(["verify", "--out", str(out), "--check", "concentration", "--report", str(report)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["check"] == "concentration"
    assert report.read_text().splitlines() == lines


def test_manifest_tampering_exits_5(tmp_path):
    _, out = construct(tmp_path, "run", *SIMPLE)
    m = read_json(out / "manifest.json")
    m["config"]["q"] = 4
    (out / "manifest.json").write_text(json.dumps(m))
    assert main(["verify", "--out", str(out)]) == 5
    assert main(["verify", "--out", str(tmp_path / "missing")]) == 5


def test_never_occurring_transcript_gives_empty_graph(tmp_path):
    code, out = construct(tmp_path, "run", "--transcript", "explicit:1111")
    assert code == 0
    assert (out / "graph.edgelist").read_text() == "# rsforge v1 k=3 nA=9 nB=25\n"
    assert read_json(out / "stats.json")["p"] == 0


def test_kplayer_construct(tmp_path):
    code, out = construct(tmp_path, "run", "--k", "4", "--protocol", "kplayer", "--q", "2", "--d", "2")
    assert code == 0
    assert (out / "graph.edgelist").read_text().startswith("# rsforge v1 k=4 nA=4 nB=16\n")
    assert main(["verify", "--out", str(out)]) == 0


def test_product_and_augment_artifacts(tmp_path):
    code, out = construct(tmp_path, "run", *SIMPLE, "--t", "2", "--augment", "--format", "json")
    assert code == 0
    names = {p.name for p in out.iterdir()}
    assert {"graph.json", "product.edgelist", "product_stats.json", "augmented.edgelist"} <= names
    assert read_json(out / "product_stats.json")["passed"]
    assert main(["verify", "--out", str(out), "--check", "product", "--check", "augment"]) == 0


def test_template_file(tmp_path):
    tpl = tmp_path / "tpl.txt"
    lines = ["3 1 9"] + [f"0:{x} 1:{y}" for x in range(9) for y in range(9)]
    tpl.write_text("\n".join(lines) + "\n")
    code, out = construct(tmp_path, "run", *SIMPLE, "--t", "1", "--template", str(tpl))
    assert code == 0
    assert main(["verify", "--out", str(out), "--check", "product"]) == 0


@pytest.mark.parametrize(
    "flags, code",
    [
        (["--k", "2"], 2),
        (["--k", "3", "--protocol", "kplayer"], 2),
        (["--protocol", "interval", "--r", "0"], 2),
        (["--transcript", "explicit:12"], 2),
        (["--q", "5", "--d", "3"], 3),
    ],
)
def test_construct_error_codes(tmp_path, monkeypatch, flags, code):
    monkeypatch.setenv("RSFORGE_CAP", "100000")
    assert construct(tmp_path, "run", *flags)[0] == code


def test_cap_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("RSFORGE_CAP", "10")
    assert construct(tmp_path, "run", *SIMPLE)[0] == 3


def test_asymmetric_set_exits_4(tmp_path):
    # the symmetry bit off: the k-player mean set loses its symmetry
    from rsforge import cli, pipeline
    from rsforge.nof import kplayer_protocol

    orig = pipeline.make_protocol_for

    def unsymmetrized(cfg, f=None):
        f = f or pipeline.make_function(cfg)
        return kplayer_protocol(f, cfg.interval_length, symmetrize=False)

    pipeline.make_protocol_for = unsymmetrized
    try:
        code = main(["construct", "--k", "4", "--protocol", "kplayer", "--q", "3", "--d", "2", "--r-sq", "4", "--out", str(tmp_path / "x")])
    finally:
        pipeline.make_protocol_for = orig
    assert code == 4


def test_interval_augmentation_is_asymmetric(tmp_path):
    # the colour sent about one head coordinate makes the lifted set ordered
    assert construct(tmp_path, "run", "--protocol", "interval", "--augment")[0] == 4


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"q": 2, "d": 2, "protocol": "interval"}))
    code, out = construct(tmp_path, "run", "--config", str(cfg), "--d", "1")
    assert code == 0
    stats = read_json(out / "stats.json")
    assert (stats["q"], stats["d"], stats["protocol"]) == (2, 1, "interval")
    cfg.write_text(json.dumps({"bogus": 1}))
    assert construct(tmp_path, "bad", "--config", str(cfg))[0] == 2


def test_stats_roundtrip(tmp_path, capsys):
    for i, flags in enumerate([SIMPLE, ["--protocol", "interval"], ["--k", "4", "--protocol", "kplayer", "--q", "2", "--d", "2"]]):
        _, out = construct(tmp_path, f"run{i}", *flags)
        capsys.readouterr()
        assert main(["stats", "--out", str(out)]) == 0
        assert capsys.readouterr().out == (out / "stats.json").read_text()


def test_export(tmp_path, capsys):
    _, out = construct(tmp_path, "run", *SIMPLE)
    dest = tmp_path / "g.edgelist"
    assert main(["export", "--out", str(out), "--dest", str(dest)]) == 0
    assert dest.read_text() == (out / "graph.edgelist").read_text()
    assert main(["export", "--out", str(out), "--format", "json", "--dest", str(tmp_path / "g.json")]) == 0
    assert read_json(tmp_path / "g.json")["format"] == "rsforge v1"
    assert main(["export", "--out", str(out), "--dest", str(tmp_path / "nope" / "g")]) == 6


def test_unwritable_out_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["construct", *SIMPLE, "--out", str(blocker / "sub")]) == 6


@pytest.mark.parametrize(
    "flags",
    [SIMPLE, ["--protocol", "interval", "--t", "1"], ["--k", "4", "--protocol", "kplayer", "--q", "2", "--d", "2", "--format", "json"]],
    ids=["simple", "interval-product", "kplayer"],
)
def test_byte_identical_reruns(tmp_path, flags):
    _, a = construct(tmp_path, "a", *flags)
    _, b = construct(tmp_path, "b", *flags, "--threads", "2")
    assert digest_dir(a) == digest_dir(b)
