import itertools
import json

import pytest

from hgpoly.errors import InputError, ValidationError
from hgpoly.graphs import Graph, canonical_contraction, incidence_hypergraph
from hgpoly.pipeline import complex_for_graph
from hgpoly.variants import (
    GenusGrading,
    Orientation,
    check_srtr_closure,
    check_subcategory,
    classify,
    genus,
    induce_genus,
    is_contractible,
    is_rooted,
    is_strongly_rooted,
    is_wheeled_oriented,
    restrict_model,
)


# -- genus ---------------------------------------------------------------------


def test_genus_multiloop_zeros(graphs):
    assert genus(graphs["multiloop"]) == 3


def test_genus_tree_zero(graphs):
    assert genus(graphs["line3"]) == 0


def test_genus_sum(graphs):
    g = graphs["line3"]
    assert genus(g, GenusGrading(g, {"1": 1, "2": 0, "3": 2})) == 3


def test_genus_grading_validation(graphs):
    g = graphs["line3"]
    with pytest.raises(InputError):
        GenusGrading(g, {"1": 1})
    with pytest.raises(InputError):
        GenusGrading(g, {"1": -1, "2": 0, "3": 0})


def test_induce_genus_line3(graphs):
    g = graphs["line3"]
    zeros = GenusGrading.zeros(g)
    cc = canonical_contraction(g, ["b"])
    fiber, quotient = induce_genus(g, zeros, cc)
    assert quotient.values == {"1": 0, "2": 0}


def test_induce_genus_cycle_fiber(graphs):
    g = graphs["multiloop"]
    zeros = GenusGrading.zeros(g)
    cc = canonical_contraction(g, ["x", "y"])  # fiber has b1 = 1
    fiber, quotient = induce_genus(g, zeros, cc)
    assert quotient.values[cc.merged_vertex] == 1


def test_genus_preserved_under_contraction(graphs):
    for name, g in graphs.items():
        if not g.edges or len(g.edges) > 5:
            continue
        h = incidence_hypergraph(g)
        grading = GenusGrading(
            g, {v: i % 3 for i, v in enumerate(g.vertices)}
        )
        names = list(h.vertices)
        for r in range(1, len(names) + 1):
            for subset in itertools.combinations(names, r):
                if not h._connected_within(h.mask_of(subset)):
                    continue
                cc = canonical_contraction(g, list(subset))
                _, quotient = induce_genus(g, grading, cc)
                assert genus(cc.quotient, quotient) == genus(g, grading)


# -- contractibility and orientation --------------------------------------------------


def test_contractible(graphs):
    assert is_contractible(graphs["line3"])
    assert not is_contractible(graphs["multiloop"])
    assert not is_contractible(graphs["theta"])


def test_wheeled_orientation(graphs):
    g = graphs["line3"]
    o = Orientation(g, {"a": "a", "b": "b"}, {})
    assert is_wheeled_oriented(g, o)
    missing = Orientation(g, {"a": "a"}, {})
    assert not is_wheeled_oriented(g, missing)
    g2 = graphs["fragile_root"]
    o2 = Orientation(g2, {"f1": "f1", "f2": "f2"}, {"f4": "in", "f5": "out"})
    assert is_wheeled_oriented(g2, o2)
    theta = graphs["theta"]
    o3 = Orientation(theta, {"a": "a'", "b": "b", "c": "c"}, {})
    assert is_wheeled_oriented(theta, o3)


# -- rootedness ----------------------------------------------------------------------


def test_fragile_root_unrooted_by_contraction(graphs):
    g = graphs["fragile_root"]
    assert is_rooted(g)
    cc = canonical_contraction(g, ["f1"])
    assert not is_rooted(cc.quotient)


def test_line3_like_tree_rooted():
    g = Graph(
        ["1", "2"],
        [["r", "e"], ["e'", "x"]],
        {"e": "e'", "e'": "e"},
        ["r", "x"],
    )
    assert is_rooted(g)
    swapped = Graph(
        ["1", "2"],
        [["e", "r"], ["e'", "x"]],
        {"e": "e'", "e'": "e"},
        ["r", "x"],
    )
    assert not is_rooted(swapped)


def test_rooted_requires_tree(graphs):
    with pytest.raises(InputError):
        is_rooted(graphs["theta"])


def test_cherry_pair(graphs):
    srtr = graphs["cherry_increasing"]
    rtr = graphs["cherry_decreasing"]
    assert is_rooted(srtr) and is_strongly_rooted(srtr)
    assert is_rooted(rtr) and not is_strongly_rooted(rtr)


def test_corolla_strongly_rooted():
    corolla = Graph(["1"], [["r", "i1", "i2"]], {}, ["r", "i1", "i2"])
    assert is_rooted(corolla)
    assert is_strongly_rooted(corolla)


def test_reversed_linear_not_strongly_rooted():
    g = Graph(
        ["1", "2"],
        [["e", "x"], ["r", "e'"]],
        {"e": "e'", "e'": "e"},
        ["r", "x"],
    )
    # root leg r sits at vertex 2; vertex 1 hangs below it
    assert is_rooted(g)
    assert not is_strongly_rooted(g)


def test_strongly_rooted_needs_rooted(graphs):
    cc = canonical_contraction(graphs["fragile_root"], ["f1"])
    with pytest.raises(InputError):
        is_strongly_rooted(cc.quotient)


# -- SRTr closure -----------------------------------------------------------------------


def increasing_trees(n_edges):
    """All strongly rooted trees with `n_edges` edges, one root leg, inputs
    ordered by child label: parent(v) < v gives exactly these shapes."""
    k = n_edges + 1
    for parents in itertools.product(*[range(v) for v in range(1, k)]):
        # parents[v-1] is the parent of vertex v (0-indexed labels)
        children = {v: [] for v in range(k)}
        for v, p in enumerate(parents, start=1):
            children[p].append(v)
        flag_lists = {}
        involution = {}
        legs = ["root"]
        flag_lists[0] = ["root"] + [f"d{c}" for c in children[0]]
        for v in range(1, k):
            flag_lists[v] = [f"u{v}"] + [f"d{c}" for c in children[v]]
            involution[f"u{v}"] = f"d{v}"
            involution[f"d{v}"] = f"u{v}"
        yield Graph(
            [str(v) for v in range(k)],
            [flag_lists[v] for v in range(k)],
            involution,
            legs,
        )


def test_increasing_trees_are_strongly_rooted():
    for n in range(1, 4):
        for g in increasing_trees(n):
            assert is_rooted(g)
            assert is_strongly_rooted(g)


def test_srtr_closure_cherry(graphs):
    ok, witness = check_srtr_closure(graphs["cherry_increasing"])
    assert ok, witness


def test_srtr_closure_exhaustive_small():
    for n in range(1, 5):
        for g in increasing_trees(n):
            ok, witness = check_srtr_closure(g)
            assert ok, (g, witness)


def test_closure_rejects_non_strongly_rooted(graphs):
    with pytest.raises(InputError):
        check_srtr_closure(graphs["cherry_decreasing"])


# -- model restriction ----------------------------------------------------------------------


def test_restrict_model_identity(graphs):
    g = graphs["multiloop"]
    grading = GenusGrading.zeros(g)
    restricted = restrict_model(g, "ggGrc", grading=grading)
    plain = complex_for_graph(g)
    assert restricted.matrices == plain.matrices
    assert restricted.bases == plain.bases
    r_json = restricted.to_json()
    p_json = plain.to_json()
    assert json.dumps(r_json["matrices"], sort_keys=True) == json.dumps(
        p_json["matrices"], sort_keys=True
    )
    assert r_json["tag"]["subcategory"] == "ggGrc"


def test_restrict_model_srtr(graphs):
    g = graphs["cherry_increasing"]
    restricted = restrict_model(g, "SRTr")
    assert restricted.matrices == complex_for_graph(g).matrices


def test_restrict_model_tr(graphs):
    g = graphs["line3"]
    restricted = restrict_model(g, "Tr")
    assert restricted.matrices == complex_for_graph(g).matrices


def test_restrict_model_predicate_failure(graphs):
    with pytest.raises(ValidationError):
        restrict_model(graphs["theta"], "Tr")
    with pytest.raises(ValidationError):
        restrict_model(graphs["cherry_decreasing"], "SRTr")


def test_check_subcategory_names(graphs):
    g = graphs["line3"]
    assert check_subcategory(g, "Tr")
    with pytest.raises(InputError):
        check_subcategory(g, "nope")


# -- classification -----------------------------------------------------------------------------


def test_classify_reports(graphs):
    assert classify(graphs["fragile_root"]) == {
        "contractible": True,
        "rooted": True,
        "strongly_rooted": False,
        "wheeled_oriented": False,
        "genus": 0,
    }
    report = classify(graphs["theta"])
    assert report["contractible"] is False
    assert report["genus"] == 2
    srtr = classify(graphs["cherry_increasing"])
    assert srtr["rooted"] and srtr["strongly_rooted"]
