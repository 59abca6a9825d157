import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsx.errors import DimensionMismatch, WrongDomain
from gsx.gft import (
    FOURIER,
    GraphSignal,
    dual_gft,
    dual_igft,
    energy,
    frame_bounds,
    gft,
    igft,
    inner,
)
from gsx.graphs_io import cyclic_graph
from gsx.spectral_core import eigendecompose

from conftest import decomposable, random_directed

# the 10-sparse Fourier vector listed with the sensor-network simulation
SPARSE_XF = np.array([-0.296, -1.497, -0.905, -0.404, -0.726, -0.866, -0.423, -0.943, 1.3419, -0.989]
                    + [0.0] * 10)


def test_gft_of_constant_on_cycle4():
    d = eigendecompose(cyclic_graph(4))
    np.testing.assert_allclose(gft(d, np.ones(4)).values, [2, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(igft(d, GraphSignal([2, 0, 0, 0], FOURIER)).values, np.ones(4), atol=1e-12)


def test_gft_of_eigenvector_is_delta(directed8):
    for i in range(directed8.n):
        np.testing.assert_allclose(gft(directed8, directed8.v[:, i]).values, np.eye(8)[i], atol=1e-10)
        np.testing.assert_allclose(igft(directed8, GraphSignal(np.eye(8)[i], FOURIER)).values,
                                   directed8.v[:, i], atol=1e-12)


def test_domain_tags_enforced(cyclic8):
    x_f = gft(cyclic8, np.ones(8))
    with pytest.raises(WrongDomain):
        gft(cyclic8, x_f)
    with pytest.raises(WrongDomain):
        igft(cyclic8, GraphSignal(np.ones(8)))
    with pytest.raises(DimensionMismatch):
        gft(cyclic8, np.ones(3))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_round_trip_and_frame_sandwich(seed):
    rng = np.random.default_rng(seed)
    d = decomposable(lambda r: random_directed(r, 7), rng, max_cond=1e4)
    x = rng.normal(size=7) + 1j * rng.normal(size=7)
    x_f = gft(d, x)
    back = igft(d, x_f).values
    assert np.linalg.norm(back - x) <= 1e-10 * np.linalg.norm(x) * max(1, np.linalg.cond(d.v) / 1e3)
    fb = frame_bounds(d)
    assert fb.contains(energy(x), energy(x_f.values))


def test_parseval_unitary(knn20, rng):
    x = rng.normal(size=20)
    assert energy(gft(knn20, x).values) == pytest.approx(energy(x), rel=1e-9)


def test_dual_gft_unitary_equals_gft(knn20, rng):
    x = rng.normal(size=20)
    np.testing.assert_allclose(dual_gft(knn20, x).values, gft(knn20, x).values, atol=1e-10)


def test_dual_pair_preserves_inner_products(rng):
    d = decomposable(lambda r: random_directed(r, 6), rng, max_cond=1e4)
    for _ in range(10):
        x = rng.normal(size=6) + 1j * rng.normal(size=6)
        y = rng.normal(size=6) + 1j * rng.normal(size=6)
        lhs = inner(x, y)
        rhs = inner(dual_gft(d, x).values, gft(d, y).values)
        assert abs(lhs - rhs) <= 1e-9 * max(1, abs(lhs))
        np.testing.assert_allclose(dual_igft(d, dual_gft(d, x)).values, x, atol=1e-9)
    np.testing.assert_array_equal(dual_gft(d, np.zeros(6)).values, np.zeros(6))


def test_frame_bounds_unitary(knn20):
    fb = frame_bounds(knn20)
    assert fb.alpha == pytest.approx(1, abs=1e-9)
    assert fb.beta == pytest.approx(1, abs=1e-9)


def test_frame_bounds_norm_two():
    from gsx.spectral_core import Graph

    d = eigendecompose(Graph(np.diag([1.0, 2.0])))
    # V^-1 = diag(2, 1/2): spectral norm 2
    scaled = type(d)(v=np.diag([0.5, 2.0]), eigenvalues=d.eigenvalues, v_inv=np.diag([2.0, 0.5]),
                     ordering=d.ordering, unitary_v=False, adjacency=d.adjacency)
    fb = frame_bounds(scaled)
    assert fb.beta == pytest.approx(4)
    assert fb.literal_alpha == pytest.approx(0.25)
    assert fb.alpha == pytest.approx(0.25)


def test_frame_sandwich_directed_probes(directed8, rng):
    fb = frame_bounds(directed8)
    assert fb.alpha <= fb.beta
    for _ in range(100):
        x = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert fb.contains(energy(x), energy(gft(directed8, x).values))


def test_energy_basics():
    assert energy(np.zeros(4)) == 0
    assert energy(np.eye(4)[0]) == 1


def test_listed_sparse_vector_energy():
    exact = float(np.sum(SPARSE_XF**2))
    assert energy(SPARSE_XF) == pytest.approx(exact, rel=1e-15)
    assert abs(exact - 8.32) / 8.32 <= 0.02
