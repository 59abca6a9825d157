import numpy as np
import pytest

from gsx.errors import NotDiagonalizable, RepeatedEigenvalues
from gsx.graphs_io import cyclic_graph, knn_sensor_graph
from gsx.spectral_core import Graph, eigendecompose

# first knn seed (n=20, k=6) whose unit-weight graph has a simple spectrum
KNN_SEED = 2


def random_undirected(rng, n):
    w = rng.uniform(0.1, 1.0, (n, n))
    a = np.triu(w, 1)
    return Graph(a + a.T)


def random_directed(rng, n, density=0.6):
    a = rng.uniform(0.1, 1.0, (n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(a, 0.0)
    return Graph(a)


def decomposable(make, rng, max_cond=None, tries=50):
    """Draw graphs from ``make(rng)`` until one decomposes (and is well conditioned)."""
    for _ in range(tries):
        g = make(rng)
        try:
            d = eigendecompose(g)
        except (RepeatedEigenvalues, NotDiagonalizable):
            continue
        if max_cond is None or np.linalg.cond(d.v) <= max_cond:
            return d
    raise RuntimeError("no usable graph drawn")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def cyclic8():
    return eigendecompose(cyclic_graph(8))


@pytest.fixture(scope="session")
def knn20():
    g, _ = knn_sensor_graph(20, 6, KNN_SEED)
    return eigendecompose(g)


@pytest.fixture(scope="session")
def undirected10():
    return decomposable(lambda r: random_undirected(r, 10), np.random.default_rng(10))


@pytest.fixture(scope="session")
def directed8():
    return decomposable(lambda r: random_directed(r, 8), np.random.default_rng(8), max_cond=1e3)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.REPORT, key=lambda s: s.split()[1]):
            terminalreporter.write_line(line)
