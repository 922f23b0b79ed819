import networkx as nx
import numpy as np
import pytest

from graph_core import Graph, make_named


def from_nx(G):
    """networkx graph on 0..n-1 -> Graph."""
    return Graph.from_edges(G.number_of_nodes(), G.edges())


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges())
    return G


def random_symmetric(rng, order):
    x = rng.normal(size=(order, order))
    return (x + x.T) / 2.0


def assert_values_close(actual, expected, tol):
    actual = sorted(actual, reverse=True)
    expected = sorted(expected, reverse=True)
    assert len(actual) == len(expected)
    assert np.max(np.abs(np.array(actual) - np.array(expected)), initial=0.0) <= tol


@pytest.fixture
def k2():
    return make_named("complete", [2])


@pytest.fixture
def k3():
    return make_named("complete", [3])


@pytest.fixture
def p3():
    return make_named("path", [3])


@pytest.fixture
def c4():
    return make_named("cycle", [4])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
