import json
from pathlib import Path

from hgpoly.cli import main
from hgpoly.corpus import corpus_raw

CORPUS = Path(__file__).resolve().parents[1] / "src" / "hgpoly" / "corpus"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def path(name):
    return str(CORPUS / name)


def test_constructs_count(capsys):
    code, out, _ = run(capsys, "hg", "constructs", path("hg_pentagon.json"), "--count")
    assert code == 0
    assert json.loads(out) == {"by_rank": [5, 5, 1], "total": 11}


def test_constructs_listing_rank_filter(capsys):
    code, out, _ = run(
        capsys, "hg", "constructs", path("hg_pentagon.json"), "--rank", "0"
    )
    assert code == 0
    assert len(json.loads(out)) == 5


def test_hg_check(capsys):
    code, out, _ = run(capsys, "hg", "check", path("hg_hexagon.json"))
    assert code == 0
    data = json.loads(out)
    assert data["connected"] and data["vertices"] == 3


def test_hg_poset_formats(capsys):
    code, out, _ = run(capsys, "hg", "poset", path("hg_segment.json"))
    assert code == 0
    assert len(json.loads(out)["faces"]) == 3
    code, out, _ = run(
        capsys, "hg", "poset", path("hg_segment.json"), "--format", "dot"
    )
    assert code == 0
    assert out.startswith("digraph")


def test_hg_poset_over_capacity_reports_counts(capsys):
    code, out, _ = run(
        capsys, "hg", "poset", path("hg_pentagon.json"), "--max-faces", "2"
    )
    assert code == 0
    assert json.loads(out) == {"capped": True, "by_rank": [5, 5, 1], "total": 11}


def test_hg_diamond(capsys):
    code, out, _ = run(capsys, "hg", "diamond", path("hg_hexagon.json"))
    assert code == 0
    assert json.loads(out) == {"diamond": True}


def test_hg_realize_verified(capsys):
    code, out, _ = run(
        capsys,
        "hg",
        "realize",
        path("hg_hexagon.json"),
        "--game",
        "loday",
        "--verify-brute-force",
    )
    assert code == 0
    data = json.loads(out)
    assert data["verification"] == {"brute_force_agrees": True, "num_vertices": 6}
    assert len(data["vertices"]) == 6


def test_hg_realize_brute_force_violation_exits_two(capsys, monkeypatch):
    import hgpoly.games

    monkeypatch.setattr(hgpoly.games, "brute_force_vertices", lambda rep: ())
    code, _, err = run(
        capsys,
        "hg",
        "realize",
        path("hg_segment.json"),
        "--game",
        "loday",
        "--verify-brute-force",
    )
    assert code == 2
    assert "witness" in err


def test_graph_validate(capsys):
    code, out, _ = run(capsys, "graph", "validate", path("graph_multiloop.json"))
    assert code == 0
    data = json.loads(out)
    assert data["internal_edges"] == ["u", "v", "x", "y", "z"]
    assert data["b1"] == 3


def test_graph_hyper(capsys):
    code, out, _ = run(capsys, "graph", "hyper", path("graph_theta.json"))
    assert code == 0
    data = json.loads(out)
    assert data["vertices"] == ["a", "b", "c"]
    assert len(data["hyperedges"]) == 6


def test_graph_gtrees_count(capsys):
    code, out, _ = run(capsys, "graph", "gtrees", path("graph_theta.json"), "--count")
    assert code == 0
    assert json.loads(out)["total"] == 13


def test_model_homology(capsys):
    code, out, _ = run(capsys, "model", "homology", path("graph_theta.json"))
    assert code == 0
    data = json.loads(out)
    assert data["betti"] == [1, 0, 0]
    assert data["d_squared_zero"] is True


def test_model_boundary_matrix_and_triplets(capsys):
    code, out, _ = run(
        capsys, "model", "boundary", path("graph_line3.json"), "--rank", "1"
    )
    assert code == 0
    data = json.loads(out)
    assert data["tag"]["sign_convention"] == "default"
    assert data["matrices"]["1"] == [["1"], ["-1"]] or data["matrices"]["1"] == [
        ["-1"],
        ["1"],
    ]
    code, out, _ = run(
        capsys, "model", "boundary", path("graph_line3.json"), "--format", "triplet"
    )
    assert code == 0
    assert set(out.strip().splitlines()) == {"1 0 0 1", "1 1 0 -1"}


def test_model_boundary_alt_convention(capsys):
    code, out, _ = run(
        capsys,
        "model",
        "boundary",
        path("graph_line3.json"),
        "--sign-convention",
        "alt",
    )
    assert code == 0
    data = json.loads(out)
    assert data["tag"]["sign_convention"] == "alt"


def test_model_check(capsys):
    code, out, _ = run(capsys, "model", "check", path("graph_line4.json"))
    assert code == 0
    data = json.loads(out)
    assert all(
        data[k]
        for k in (
            "d_squared_zero",
            "support_plus_minus_one",
            "diamond_signs",
            "chain_map",
            "alpha_roundtrip",
        )
    )


def test_variants_classify_with_genus(capsys, tmp_path):
    raw = corpus_raw("graph", "line3")
    raw["genus"] = {"1": 1, "2": 0, "3": 2}
    target = tmp_path / "graded.json"
    target.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "variants", "classify", str(target))
    assert code == 0
    assert json.loads(out)["genus"] == 3


def test_exit_codes(capsys):
    code, _, _ = run(capsys, "hg", "check", "/nonexistent.json")
    assert code == 1
    code, _, _ = run(capsys, "bogus")
    assert code == 64
    code, _, _ = run(capsys, "hg")
    assert code == 64


def test_determinism(capsys):
    _, first, _ = run(capsys, "model", "homology", path("graph_line4.json"))
    _, second, _ = run(capsys, "model", "homology", path("graph_line4.json"))
    assert first == second
    _, p1, _ = run(capsys, "hg", "poset", path("hg_pentagon.json"))
    _, p2, _ = run(capsys, "hg", "poset", path("hg_pentagon.json"))
    assert p1 == p2


def test_invalid_graph_json_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "vertices": ["1"],
                "flags": {"1": ["a", "b", "c"]},
                "involution": [["a", "b"], ["b", "c"]],
                "legs": [],
            }
        )
    )
    code, _, err = run(capsys, "graph", "validate", str(bad))
    assert code == 1
    assert "involution" in err
