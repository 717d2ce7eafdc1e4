"""Bundled instances: the worked examples plus enough graphs with one to
six internal edges to exercise every structural theorem."""

import json
from importlib import resources

from ..graphs import Graph
from ..hypergraph import Hypergraph

GRAPH_NAMES = (
    "edge",
    "loop",
    "cherry_increasing",
    "cherry_decreasing",
    "line3",
    "fragile_root",
    "theta",
    "triangle",
    "line4",
    "star4",
    "theta_loop",
    "line5",
    "multiloop",
    "line6",
    "line7",
    "bowtie",
)

HYPERGRAPH_NAMES = (
    "segment",
    "pentagon",
    "hexagon",
    "path4",
    "star4",
    "k4",
    "k5_minus",
)


def _load(kind: str, name: str) -> dict:
    text = resources.files(__package__).joinpath(f"{kind}_{name}.json").read_text()
    return json.loads(text)


def corpus_graph(name: str) -> Graph:
    return Graph.from_json(_load("graph", name))


def corpus_hypergraph(name: str) -> Hypergraph:
    return Hypergraph.from_json(_load("hg", name))


def corpus_graphs() -> dict:
    return {name: corpus_graph(name) for name in GRAPH_NAMES}


def corpus_hypergraphs() -> dict:
    return {name: corpus_hypergraph(name) for name in HYPERGRAPH_NAMES}


def corpus_raw(kind: str, name: str) -> dict:
    return _load(kind, name)
