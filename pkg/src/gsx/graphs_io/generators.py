"""Seeded graph and signal generators.

Randomness comes from numpy's PCG64 bit generator. Gaussian variates are drawn
with the Box-Muller transform on PCG64 uniform doubles (``Generator.random``)
rather than numpy's ziggurat, so another implementation with the same bit
stream can reproduce them.
"""

from __future__ import annotations

import numpy as np

from ..gft import GraphSignal, igft
from ..spectral_core import EigenDecomposition, Graph

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derived_seed(seed: int, index: int) -> int:
    """Per-trial seed: splitmix64 of ``seed XOR index``."""
    return splitmix64((int(seed) ^ int(index)) & MASK64)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def box_muller(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` standard normals; pairs (cos, sin) from one (u1, u2) draw."""
    pairs = (size + 1) // 2
    u = rng.random(2 * pairs)
    u1, u2 = u[0::2], u[1::2]
    r = np.sqrt(-2.0 * np.log1p(-u1))
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(2 * np.pi * u2)
    z[1::2] = r * np.sin(2 * np.pi * u2)
    return z[:size]


def cyclic_graph(n: int) -> Graph:
    """Directed cycle: ``C[k, k-1] = 1`` (and ``C[0, n-1] = 1``)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = np.zeros((n, n))
    c[np.arange(n), np.arange(n) - 1] = 1.0
    return Graph(c)


def random_points(n: int, seed: int) -> np.ndarray:
    return make_rng(seed).random((n, 2))


def _knn_support(coords: np.ndarray, k: int) -> np.ndarray:
    n = coords.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt(np.sum(diff**2, axis=-1))
    np.fill_diagonal(dist, np.inf)
    # stable sort: equidistant neighbours resolved by lower index
    nbrs = np.argsort(dist, axis=1, kind="stable")[:, :k]
    sel = np.zeros((n, n), dtype=bool)
    sel[np.repeat(np.arange(n), k), nbrs.ravel()] = True
    return sel | sel.T


def knn_sensor_graph(n: int, k: int, seed: int) -> tuple[Graph, np.ndarray]:
    """Unit-weight k-nearest-neighbour graph on n uniform points in the unit square.

    An edge joins i and j if either selects the other. Returns the graph and
    the ``(n, 2)`` point coordinates.
    """
    coords = random_points(n, seed)
    return Graph(_knn_support(coords, k).astype(float)), coords


def exp_weighted_graph(n: int, seed: int, theta: float, k: int = 6) -> tuple[Graph, np.ndarray]:
    """Weights ``exp(-d_ij^2 / theta)`` on the (symmetrized) k-NN support."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    coords = random_points(n, seed)
    support = _knn_support(coords, k)
    d2 = np.sum((coords[:, None, :] - coords[None, :, :]) ** 2, axis=-1)
    return Graph(np.where(support, np.exp(-d2 / theta), 0.0)), coords


def exp_weight(distance, theta: float):
    return np.exp(-np.asarray(distance, dtype=float) ** 2 / theta)


def directed_subsample(g: Graph, prob: float, seed: int) -> Graph:
    """Keep every directed edge (i, j) independently with probability ``prob``."""
    if not 0 < prob <= 1:
        raise ValueError("prob must lie in (0, 1]")
    a = g.adjacency
    keep = make_rng(seed).random(a.shape) < prob
    return Graph(np.where(keep, a, 0.0))


def k_sparse_signal(d: EigenDecomposition, K: int, seed: int) -> GraphSignal:
    """Signal whose GFT is K standard normals in the first K canonical slots."""
    if not 1 <= K <= d.n:
        raise ValueError(f"K must lie in [1, {d.n}]")
    x_f = np.zeros(d.n, dtype=complex)
    x_f[:K] = box_muller(make_rng(seed), K)
    return igft(d, GraphSignal(x_f, "fourier"))


def add_noise(x, sigma: float, seed: int) -> GraphSignal:
    """``x + noise`` with total per-entry variance ``sigma**2``.

    Real signals get real noise; complex signals split the variance evenly
    between the real and imaginary parts.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    v = np.asarray(x, dtype=complex).ravel()
    if sigma == 0:
        return GraphSignal(v)
    rng = make_rng(seed)
    if np.all(v.imag == 0):
        noise = sigma * box_muller(rng, v.size)
    else:
        z = box_muller(rng, 2 * v.size)
        noise = (sigma / np.sqrt(2)) * (z[: v.size] + 1j * z[v.size :])
    return GraphSignal(v + noise)


def signal_power(x) -> float:
    v = np.asarray(x)
    return float(np.mean(np.abs(v) ** 2))


def snr_db(x, sigma: float) -> float:
    """Average signal power over noise variance, in dB."""
    return float(10 * np.log10(signal_power(x) / sigma**2))


def sigma_for_snr(x, snr: float) -> float:
    return float(np.sqrt(signal_power(x) / 10 ** (snr / 10)))
