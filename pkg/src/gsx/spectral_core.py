"""Eigendecomposition of adjacency matrices and the Vandermonde machinery.

Everything spectral in the package hangs off an :class:`EigenDecomposition`
``A = V diag(lambda) V^-1``. The eigenvalues are kept in a canonical,
deterministic order (see :func:`canonical_order`) because the energy-preserving
shift ``A_e`` assigns its phases by position in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DuplicateNodes,
    IllConditioned,
    IndexOutOfRange,
    NotDiagonalizable,
    RepeatedEigenvalues,
)

RECON_RTOL = 1e-9
DISTINCT_RTOL = 1e-8
SYMMETRY_RTOL = 1e-12


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Weighted graph given by a dense adjacency matrix.

    Entry ``(i, j)`` holds the weight ``a_ij``. ``directed`` is derived: a graph
    is undirected when its adjacency is symmetric to within a relative 1e-12.
    """

    adjacency: np.ndarray
    directed: bool = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError(f"adjacency must be a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("adjacency has non-finite entries")
        scale = np.max(np.abs(a)) if a.size else 0.0
        asym = np.max(np.abs(a - a.T))
        object.__setattr__(self, "adjacency", _frozen(a))
        object.__setattr__(self, "directed", bool(asym > SYMMETRY_RTOL * scale))

    @property
    def n_vertices(self) -> int:
        return self.adjacency.shape[0]

    def __len__(self):
        return self.n_vertices


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """``A = V diag(eigenvalues) V^-1`` with eigenvalues in canonical order.

    ``ordering[k]`` is the slot of the k-th eigenvalue in the raw solver output.
    Rows of ``v_inv`` are the dual vectors: ``v_inv[l] @ v[:, m] == delta(l, m)``
    (plain transpose pairing, no conjugation).
    """

    v: np.ndarray
    eigenvalues: np.ndarray
    v_inv: np.ndarray
    ordering: np.ndarray
    unitary_v: bool
    adjacency: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.v * self.eigenvalues) @ self.v_inv

    def dual_vector(self, i: int) -> np.ndarray:
        """``v~_i``, the i-th column of ``(V^-1)^T`` (0-based)."""
        return self.v_inv[i, :]

    def vandermonde_condition(self) -> float:
        return float(np.linalg.cond(np.vander(self.eigenvalues, increasing=True)))


@dataclass(frozen=True, eq=False)
class Eigengraph:
    """Rank-one projector ``v_i v~_i^T``. ``index`` is 0-based."""

    index: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class MinimalPolynomial:
    """Monic annihilating polynomial ``sum_i alpha[i] M^i = 0``, ``alpha[degree] == 1``."""

    alpha: np.ndarray

    @property
    def degree(self) -> int:
        return self.alpha.shape[0] - 1

    def evaluate(self, m: np.ndarray) -> np.ndarray:
        """Evaluate the polynomial at a square matrix by Horner's rule."""
        m = np.asarray(m, dtype=complex)
        out = np.zeros_like(m)
        eye = np.eye(m.shape[0], dtype=complex)
        for a in self.alpha[::-1]:
            out = out @ m + a * eye
        return out


def canonical_order(eigenvalues: np.ndarray) -> np.ndarray:
    """Deterministic ordering of a spectrum.

    Primary key is the clockwise angle from the positive real axis, so that the
    cyclic graph's spectrum comes out as ``exp(-2j*pi*k/n)`` for k = 0..n-1.
    Ties (e.g. all-real spectra) go by descending magnitude, then by raw slot.
    For a nonnegative undirected adjacency this puts the Perron eigenvalue first.
    """
    lam = np.asarray(eigenvalues, dtype=complex)
    if lam.size == 0:
        return np.zeros(0, dtype=int)
    scale = np.max(np.abs(lam))
    tol = 1e-9 * scale
    im = np.where(np.abs(lam.imag) <= tol, 0.0, lam.imag)
    theta = np.mod(-np.arctan2(im, lam.real), 2 * np.pi)
    theta[theta > 2 * np.pi - 1e-9] = 0.0
    theta_q = np.round(theta / 1e-9).astype(np.int64)
    mag_q = -np.round(np.abs(lam) / max(tol, 1e-300)).astype(np.float64)
    slots = np.arange(lam.size)
    return np.lexsort((slots, mag_q, theta_q))


def _normalize_columns(v: np.ndarray) -> np.ndarray:
    # unit norm; phase fixed so the first entry of at least half the peak
    # magnitude is real positive (gives the DFT convention on cyclic graphs)
    v = v / np.linalg.norm(v, axis=0, keepdims=True)
    mags = np.abs(v)
    first = np.argmax(mags >= 0.5 * mags.max(axis=0, keepdims=True), axis=0)
    pivot = v[first, np.arange(v.shape[1])]
    return v * (np.abs(pivot) / pivot)


def min_gap(values: np.ndarray) -> float:
    z = np.asarray(values, dtype=complex)
    if z.size < 2:
        return np.inf
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


def eigendecompose(g: Graph) -> EigenDecomposition:
    """Diagonalize ``g.adjacency``.

    Symmetric adjacencies go through ``eigh`` (orthonormal V); everything else
    through the general solver with ``V^-1`` from an explicit inverse.

    Raises:
        RepeatedEigenvalues: two eigenvalues closer than 1e-8 * max|lambda|.
        NotDiagonalizable: reconstruction residual above 1e-9 * ||A||_F.
    """
    a = g.adjacency
    n = g.n_vertices
    if not g.directed:
        lam, v = np.linalg.eigh(a)
        lam = lam.astype(complex)
        v = v.astype(complex)
    else:
        lam, v = np.linalg.eig(a)
        lam = lam.astype(complex)
        v = v.astype(complex)

    order = canonical_order(lam)
    lam = lam[order]
    v = _normalize_columns(v[:, order])

    scale = np.max(np.abs(lam))
    gap = min_gap(lam)
    if gap <= DISTINCT_RTOL * scale:
        raise RepeatedEigenvalues(
            f"eigenvalues not distinct: min gap {gap:.3e} <= {DISTINCT_RTOL:g} * {scale:.3e}"
        )

    if not g.directed:
        v_inv = v.conj().T
    else:
        try:
            v_inv = np.linalg.inv(v)
        except np.linalg.LinAlgError as exc:
            raise NotDiagonalizable("eigenvector matrix is singular") from exc

    a_norm = np.linalg.norm(a)
    resid = np.linalg.norm((v * lam) @ v_inv - a)
    if resid > RECON_RTOL * a_norm:
        raise NotDiagonalizable(
            f"reconstruction residual {resid:.3e} exceeds {RECON_RTOL:g} * ||A||_F = {RECON_RTOL * a_norm:.3e}"
        )

    unitary = np.linalg.norm(v.conj().T @ v - np.eye(n)) <= 1e-9 * n
    return EigenDecomposition(
        v=_frozen(v),
        eigenvalues=_frozen(lam),
        v_inv=_frozen(v_inv),
        ordering=_frozen(order),
        unitary_v=bool(unitary),
        adjacency=g.adjacency,
    )


def eigengraph(d: EigenDecomposition, i: int) -> Eigengraph:
    """The i-th (0-based) eigengraph ``v_i v~_i^T``."""
    if not 0 <= i < d.n:
        raise IndexOutOfRange(f"eigengraph index {i} outside [0, {d.n})")
    return Eigengraph(index=i, matrix=_frozen(np.outer(d.v[:, i], d.v_inv[i, :])))


def leja_order(nodes: np.ndarray) -> np.ndarray:
    """Leja ordering of interpolation nodes; improves Newton-form accuracy."""
    z = np.asarray(nodes, dtype=complex)
    m = z.size
    if m == 0:
        return np.zeros(0, dtype=int)
    order = [int(np.argmax(np.abs(z)))]
    remaining = np.ones(m, dtype=bool)
    remaining[order[0]] = False
    logprod = np.zeros(m)
    for _ in range(1, m):
        with np.errstate(divide="ignore"):
            logprod += np.log(np.abs(z - z[order[-1]]))
        cand = np.where(remaining, logprod, -np.inf)
        nxt = int(np.argmax(cand))
        order.append(nxt)
        remaining[nxt] = False
    return np.asarray(order)


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z, dtype=complex)
    for c in coeffs[::-1]:
        out = out * z + c
    return out


def vandermonde_solve(nodes, rhs, rtol: float = 1e-8) -> np.ndarray:
    """Solve ``sum_k g[k] * nodes[i]**k == rhs[i]`` for the monomial coefficients g.

    Uses Newton divided differences on Leja-ordered nodes followed by an
    expansion of the Newton form into monomials (Bjorck-Pereyra), O(m^2),
    never forming the inverse of the Vandermonde matrix.

    Raises:
        DuplicateNodes: two nodes closer than 1e-8 * max|node|.
        IllConditioned: the interpolation residual exceeds ``rtol * max|rhs|``.
    """
    z = np.asarray(nodes, dtype=complex).ravel()
    b = np.asarray(rhs, dtype=complex).ravel()
    if z.shape != b.shape:
        raise ValueError(f"nodes and rhs differ in length: {z.size} vs {b.size}")
    m = z.size
    if m == 0:
        return np.zeros(0, dtype=complex)
    if min_gap(z) <= DISTINCT_RTOL * np.max(np.abs(z)):
        raise DuplicateNodes("interpolation nodes are not pairwise distinct")

    perm = leja_order(z)
    zp, c = z[perm], b[perm].copy()
    for j in range(1, m):
        c[j:] = (c[j:] - c[j - 1 : m - 1]) / (zp[j:] - zp[: m - j])

    g = np.zeros(m, dtype=complex)
    g[0] = c[m - 1]
    deg = 0
    for k in range(m - 2, -1, -1):
        # g <- g * (x - zp[k]) + c[k]
        g[1 : deg + 2] = g[: deg + 1] - zp[k] * g[1 : deg + 2]
        g[0] = -zp[k] * g[0] + c[k]
        deg += 1

    resid = np.max(np.abs(_horner(g, z) - b))
    ref = np.max(np.abs(b))
    if not np.isfinite(resid) or resid > rtol * max(ref, np.finfo(float).tiny):
        raise IllConditioned(
            f"Vandermonde residual {resid:.3e} exceeds {rtol:g} * {ref:.3e}"
        )
    return g


def minimal_polynomial(source) -> MinimalPolynomial:
    """Minimal polynomial of a diagonalizable matrix with distinct eigenvalues.

    ``source`` is anything exposing ``eigenvalues`` (an :class:`EigenDecomposition`
    or a shift operator). The lower coefficients solve the Vandermonde system
    ``sum_{i<L} alpha_i lambda_k^i = -lambda_k^L`` with ``alpha_L = 1``.
    A shift built with canonical phases has the closed form ``z^n - exp(j n phi_const)``.
    """
    closed = getattr(source, "closed_form_minimal_polynomial", None)
    if closed is not None:
        alpha = closed()
        if alpha is not None:
            return MinimalPolynomial(alpha=_frozen(alpha))
    lam = np.asarray(source.eigenvalues, dtype=complex)
    deg = lam.size
    lower = vandermonde_solve(lam, -(lam**deg))
    return MinimalPolynomial(alpha=_frozen(np.append(lower, 1.0 + 0j)))
