import numpy as np
import pytest

from gsx.correlation import (
    autocorr_cyclic,
    autocorr_matrix,
    crosscorr_cyclic,
    crosscorr_vector,
    graph_autocorr,
    graph_crosscorr,
)
from gsx.errors import DimensionMismatch, FastPathUnavailable
from gsx.graphs_io import cyclic_graph, write_correlation
from gsx.shift_ops import make_a_e, make_a_phi, raw_shift
from gsx.spectral_core import eigendecompose


def _cplx(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def _loop_auto(y, l):
    n = len(y)
    return sum(y[(i + l) % n] * np.conj(y[i]) for i in range(n))


def _loop_cross(x, y, l):
    n = len(y)
    return sum(x[(i + l) % n] * np.conj(y[i]) for i in range(n))


def test_autocorr_cyclic_basics(rng):
    y = _cplx(rng, 6)
    assert autocorr_cyclic(y, 0) == pytest.approx(np.linalg.norm(y) ** 2)
    e1 = np.eye(4)[0]
    assert autocorr_cyclic(e1, 0) == 1
    assert autocorr_cyclic(e1, 1) == 0


def test_cyclic_correlations_match_loops_and_matrix_forms(rng):
    n = 7
    c = cyclic_graph(n).adjacency
    x, y = _cplx(rng, n), _cplx(rng, n)
    for l in range(-n, 2 * n):
        assert autocorr_cyclic(y, l) == pytest.approx(_loop_auto(y, l), abs=1e-12)
        assert crosscorr_cyclic(x, y, l) == pytest.approx(_loop_cross(x, y, l), abs=1e-12)
        cl = np.linalg.matrix_power(c, l % n)
        assert crosscorr_cyclic(x, y, l) == pytest.approx(np.vdot(cl @ y, x), abs=1e-10)


def test_crosscorr_delta_pair():
    # x = e_1, y = e_2: C moves y onto x after N-1 steps
    x, y = np.eye(4)[0], np.eye(4)[1]
    vals = [crosscorr_cyclic(x, y, l) for l in range(4)]
    assert [abs(v) > 0 for v in vals] == [False, False, False, True]
    assert crosscorr_cyclic(x, x, 0) == 1
    with pytest.raises(DimensionMismatch):
        crosscorr_cyclic(np.ones(3), np.ones(4), 0)


@pytest.mark.parametrize("n", [3, 8, 16])
def test_graph_correlations_reduce_on_cycle(n, rng):
    d = eigendecompose(cyclic_graph(n))
    s = make_a_e(d)
    x, y = _cplx(rng, n), _cplx(rng, n)
    for l in range(n):
        assert graph_crosscorr(s, x, y, l) == pytest.approx(crosscorr_cyclic(x, y, l), abs=1e-10)
        for m in range(n):
            assert graph_autocorr(s, y, l, m) == pytest.approx(autocorr_cyclic(y, l - m), abs=1e-10)


def test_graph_autocorr_dense_oracle(directed8, rng):
    s = make_a_phi(directed8, rng.uniform(0, 2 * np.pi, 8))
    y = _cplx(rng, 8)
    a = s.matrix
    for l, m in [(0, 0), (2, 2), (1, 3), (4, 0)]:
        expected = np.vdot(np.linalg.matrix_power(a, l) @ y, np.linalg.matrix_power(a, m) @ y)
        assert graph_autocorr(s, y, l, m) == pytest.approx(expected, abs=1e-9 * abs(expected) + 1e-12)
    assert graph_autocorr(s, np.zeros(8), 1, 2) == 0


def test_graph_corr_trivial_lags(knn20, rng):
    s = make_a_e(knn20)
    x, y = rng.normal(size=20), rng.normal(size=20)
    assert graph_autocorr(s, y, 3, 3) == pytest.approx(np.linalg.norm(y) ** 2)
    assert graph_crosscorr(s, x, y, 0) == pytest.approx(np.vdot(y, x))
    assert graph_crosscorr(s, y, y, 0) == pytest.approx(np.linalg.norm(y) ** 2)


def test_fast_and_slow_paths_agree(undirected10, rng):
    s = make_a_e(undirected10)
    x, y = rng.normal(size=10), rng.normal(size=10)
    fast = autocorr_matrix(s, y, 4, use_spectral_fast_path=True)
    slow = autocorr_matrix(s, y, 4, use_spectral_fast_path=False)
    np.testing.assert_allclose(fast.r, slow.r, atol=1e-9)
    r = fast.r
    for i in range(1, 4):
        for j in range(1, 4):
            assert r[i, j] == pytest.approx(r[i - 1, j - 1], abs=1e-9)
    assert fast.toeplitz and fast.hermitian
    np.testing.assert_allclose(crosscorr_vector(s, x, y, 4, True), crosscorr_vector(s, x, y, 4, False), atol=1e-9)
    assert autocorr_matrix(s, y, 1).r[0, 0] == pytest.approx(np.linalg.norm(y) ** 2)
    assert crosscorr_vector(s, x, y, 1)[0] == pytest.approx(np.vdot(y, x))
    np.testing.assert_array_equal(crosscorr_vector(s, np.zeros(10), y, 3), np.zeros(3))


def test_unit_shift_form_only_for_unit_modulus(undirected10, rng):
    y = rng.normal(size=10)
    y_f = undirected10.v_inv @ y
    w = np.abs(y_f) ** 2
    idx = np.arange(5)
    for s, should_match in ((make_a_e(undirected10), True), (raw_shift(undirected10), False)):
        lam = s.eigenvalues
        general = np.einsum("n,ni,nj->ij", w, np.conj(lam[:, None] ** idx), lam[:, None] ** idx)
        unit = np.einsum("n,nij->ij", w, lam[:, None, None] ** np.subtract.outer(idx, idx).T[None])
        assert np.allclose(general, unit, atol=1e-9) == should_match


def test_gram_psd(directed8, rng):
    s = make_a_phi(directed8, rng.uniform(0, 2 * np.pi, 8))
    r = autocorr_matrix(s, _cplx(rng, 8), 6).r
    np.testing.assert_allclose(r, r.conj().T, atol=1e-12)
    ev = np.linalg.eigvalsh(r)
    assert ev.min() >= -1e-9 * np.linalg.norm(r, 2)


def test_fast_path_guard(directed8, rng):
    s = make_a_e(directed8)
    with pytest.raises(FastPathUnavailable):
        autocorr_matrix(s, rng.normal(size=8), 3, use_spectral_fast_path=True)
    with pytest.raises(FastPathUnavailable):
        crosscorr_vector(s, rng.normal(size=8), rng.normal(size=8), 3, use_spectral_fast_path=True)
    assert not autocorr_matrix(s, rng.normal(size=8), 3).toeplitz


def test_correlation_export(tmp_path, cyclic8, rng):
    corr = autocorr_matrix(make_a_e(cyclic8), rng.normal(size=8), 3)
    write_correlation(tmp_path / "r.csv", corr)
    assert (tmp_path / "r.json").read_text().count("toeplitz") == 1
    assert (tmp_path / "r.csv").read_text().splitlines()[0] == "re_0,im_0,re_1,im_1,re_2,im_2"
