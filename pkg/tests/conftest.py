import numpy as np
import pytest

from netab.graph import Graph
from netab.ising import IsingParams
from netab.seeds import spawn_rng


def random_graph(n, edge_prob, rng):
    """Small Erdos-Renyi graph for oracle tests."""
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                edges.append((i, j))
    return Graph(num_nodes=n, edges=tuple(edges))


def random_params(rng, scale=0.5):
    vals = rng.uniform(-scale, scale, size=5)
    return IsingParams(*vals)


def random_assignment(n, rng):
    return rng.integers(0, 2, size=n).astype(np.int8)


def random_spins(n, rng):
    return (2 * rng.integers(0, 2, size=n) - 1).astype(np.int8)


@pytest.fixture
def rng():
    return spawn_rng(20240817)


@pytest.fixture
def path_graph():
    # 0 - 1 - 2
    return Graph(num_nodes=3, edges=((0, 1), (1, 2)))


@pytest.fixture
def triangle():
    return Graph(num_nodes=3, edges=((0, 1), (0, 2), (1, 2)))
