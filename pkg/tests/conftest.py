import pytest

from hgpoly.corpus import corpus_graphs, corpus_hypergraphs


@pytest.fixture(scope="session")
def graphs():
    return corpus_graphs()


@pytest.fixture(scope="session")
def hypergraphs():
    return corpus_hypergraphs()
