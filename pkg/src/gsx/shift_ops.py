"""Graph shift operators.

``A_phi = V diag(exp(j phi)) V^-1`` keeps the eigenvectors of the adjacency and
replaces every eigenvalue by a pure phase, so shifting never changes the
Fourier-domain energy. ``A_e`` is the member whose phases step by ``-2 pi / n``
along the canonical eigenvalue order; it satisfies ``A_e^n = I``.

Raw and max-magnitude-normalized adjacency shifts are provided as baselines.
All shifts are applied in the spectral domain; the dense matrix is only built
on request and cached.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicatePhases,
    IllConditioned,
    PhaseOutOfRange,
    ZeroSpectrum,
)
from .gft import GraphSignal, as_signal
from .spectral_core import (
    DISTINCT_RTOL,
    EigenDecomposition,
    Graph,
    eigendecompose,
    min_gap,
    vandermonde_solve,
)

TWO_PI = 2 * np.pi


class ShiftKind(str, Enum):
    GENERIC_PHI = "GenericPhi"
    CANONICAL_E = "CanonicalE"
    RAW = "RawAdjacency"
    NORMALIZED = "NormalizedAdjacency"

    @property
    def energy_preserving(self) -> bool:
        return self in (ShiftKind.GENERIC_PHI, ShiftKind.CANONICAL_E)


def decomposition_hash(d: EigenDecomposition) -> str:
    a = np.ascontiguousarray(d.adjacency, dtype="<f8")
    return hashlib.sha256(a.tobytes() + str(a.shape).encode()).hexdigest()


class ShiftOperator:
    """A shift sharing the eigenvectors of a decomposition.

    Energy-preserving kinds are stored by their phases (eigenvalues are
    ``exp(1j * phases)`` and powers are ``exp(1j * k * phases)``, so the unit
    modulus is exact). Baseline kinds store their eigenvalues directly.
    """

    def __init__(self, decomposition: EigenDecomposition, kind: ShiftKind, *,
                 phases=None, eigenvalues=None, phi_const: float = 0.0):
        self.decomposition = decomposition
        self.kind = ShiftKind(kind)
        self.phi_const = float(phi_const)
        if self.kind.energy_preserving:
            ph = np.array(phases, dtype=float, copy=True)
            ph.setflags(write=False)
            self._phases = ph
            lam = np.exp(1j * ph)
        else:
            self._phases = None
            lam = np.array(eigenvalues, dtype=complex, copy=True)
        lam.setflags(write=False)
        self._eigenvalues = lam
        self._matrix = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"ShiftOperator(kind={self.kind.value}, n={self.n})"

    @property
    def n(self) -> int:
        return self.decomposition.n

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigenvalues

    @property
    def phases(self) -> np.ndarray:
        if self._phases is None:
            raise AttributeError(f"{self.kind.value} shift has no phase representation")
        return self._phases

    @property
    def energy_preserving(self) -> bool:
        return self.kind.energy_preserving

    def spectral_power(self, k) -> np.ndarray:
        """Eigenvalues of ``S^k``. ``k`` may be an array (result then has shape (n, len(k)))."""
        k = np.asarray(k)
        if self._phases is not None:
            return np.exp(1j * np.multiply.outer(self._phases, k))
        return np.power.outer(self._eigenvalues, k)

    @property
    def matrix(self) -> np.ndarray:
        """Dense ``V diag(lambda) V^-1``, built once."""
        if self._matrix is None:
            with self._lock:
                if self._matrix is None:
                    d = self.decomposition
                    m = (d.v * self._eigenvalues) @ d.v_inv
                    m.setflags(write=False)
                    self._matrix = m
        return self._matrix

    def power_matrix(self, k: int) -> np.ndarray:
        d = self.decomposition
        return (d.v * self.spectral_power(k)) @ d.v_inv

    def closed_form_minimal_polynomial(self):
        if self.kind is not ShiftKind.CANONICAL_E:
            return None
        alpha = np.zeros(self.n + 1, dtype=complex)
        alpha[0] = -np.exp(1j * self.n * self.phi_const)
        alpha[-1] = 1.0
        return alpha

    def to_json(self) -> dict:
        out = {
            "kind": self.kind.value,
            "n": self.n,
            "decomposition_sha256": decomposition_hash(self.decomposition),
        }
        if self._phases is not None:
            out["phases"] = [float(p) for p in self._phases]
            out["phi_const"] = self.phi_const
        else:
            out["eigenvalues"] = [[float(z.real), float(z.imag)] for z in self._eigenvalues]
        return out


def make_a_phi(d: EigenDecomposition, phases) -> ShiftOperator:
    """Energy-preserving shift with the given phases, one per canonical eigenvalue slot.

    Raises:
        PhaseOutOfRange: a phase outside [0, 2 pi).
        DuplicatePhases: two phases give (numerically) the same eigenvalue.
    """
    ph = np.asarray(phases, dtype=float).ravel()
    if ph.shape[0] != d.n:
        raise DimensionMismatch(f"need {d.n} phases, got {ph.shape[0]}")
    if np.any(~np.isfinite(ph)) or np.any(ph < 0) or np.any(ph >= TWO_PI):
        raise PhaseOutOfRange("phases must lie in [0, 2*pi)")
    if min_gap(np.exp(1j * ph)) <= DISTINCT_RTOL:
        raise DuplicatePhases("phases must be pairwise distinct")
    return ShiftOperator(d, ShiftKind.GENERIC_PHI, phases=ph)


def make_a_e(d: EigenDecomposition, phi_const: float = 0.0) -> ShiftOperator:
    """The canonical shift: phase ``phi_const - 2 pi k / n`` on the k-th eigenvalue (0-based)."""
    k = np.arange(d.n)
    ph = np.mod(phi_const - TWO_PI * k / d.n, TWO_PI)
    ph[ph >= TWO_PI] = 0.0
    return ShiftOperator(d, ShiftKind.CANONICAL_E, phases=ph, phi_const=phi_const)


def _decomp(g) -> EigenDecomposition:
    return g if isinstance(g, EigenDecomposition) else eigendecompose(g)


def raw_shift(g: Graph | EigenDecomposition) -> ShiftOperator:
    """The adjacency itself used as shift."""
    d = _decomp(g)
    return ShiftOperator(d, ShiftKind.RAW, eigenvalues=d.eigenvalues)


def normalized_shift(g: Graph | EigenDecomposition) -> ShiftOperator:
    """``A / |lambda_max|`` where ``lambda_max`` has the largest magnitude."""
    d = _decomp(g)
    lam_max = np.max(np.abs(d.eigenvalues))
    if lam_max == 0:
        raise ZeroSpectrum("adjacency has an all-zero spectrum")
    return ShiftOperator(d, ShiftKind.NORMALIZED, eigenvalues=d.eigenvalues / lam_max)


def apply_shift(s: ShiftOperator, x, k: int = 1) -> GraphSignal:
    """``S^k x`` evaluated as ``V (lambda^k * (V^-1 x))``."""
    if k < 0:
        raise ValueError("shift count must be non-negative")
    d = s.decomposition
    x = as_signal(x, n=d.n)
    return GraphSignal(d.v @ (s.spectral_power(k) * (d.v_inv @ x.values)))


def shift_powers(s: ShiftOperator, x, count: int) -> np.ndarray:
    """``[x, S x, ..., S^(count-1) x]`` as an ``n x count`` matrix."""
    if count < 1:
        raise ValueError("count must be >= 1")
    d = s.decomposition
    x = as_signal(x, n=d.n)
    x_f = d.v_inv @ x.values
    return d.v @ (x_f[:, None] * s.spectral_power(np.arange(count)))


@dataclass(frozen=True, eq=False)
class FilterDecomposition:
    """``A = A_h A_phi`` with ``A_h = V diag(lambda_h) V^-1``."""

    lambda_h: np.ndarray
    shift: ShiftOperator

    @property
    def a_h(self) -> np.ndarray:
        d = self.shift.decomposition
        return (d.v * self.lambda_h) @ d.v_inv


def decompose_adjacency(d: EigenDecomposition, s: ShiftOperator) -> FilterDecomposition:
    """Split A into the energy-preserving shift and the remaining filter part."""
    if s.decomposition is not d:
        raise ValueError("shift operator was built from a different decomposition")
    lam_h = d.eigenvalues / s.eigenvalues
    lam_h.setflags(write=False)
    return FilterDecomposition(lambda_h=lam_h, shift=s)


def polynomial_tolerance(cond_z: float, scale: float) -> float:
    return max(1e-8, 1e-14 * cond_z) * scale


def matrix_polynomial(coeffs, m: np.ndarray) -> np.ndarray:
    """``sum_k coeffs[k] m^k`` by Horner's rule."""
    m = np.asarray(m, dtype=complex)
    out = np.zeros_like(m)
    eye = np.eye(m.shape[0], dtype=complex)
    for c in np.asarray(coeffs, dtype=complex)[::-1]:
        out = out @ m + c * eye
    return out


def a_phi_as_polynomial_of_a(d: EigenDecomposition, s: ShiftOperator) -> np.ndarray:
    """Coefficients g with ``sum_k g[k] A^k = S``.

    Solves the Vandermonde system on the eigenvalues of A and checks the dense
    reconstruction against ``max(1e-8, 1e-14 cond(Z)) ||S||_F``.
    """
    lam = d.eigenvalues
    cond_z = d.vandermonde_condition()
    rtol = max(1e-8, 1e-14 * cond_z)
    g = vandermonde_solve(lam, s.eigenvalues, rtol=rtol)
    target = s.matrix
    tol = polynomial_tolerance(cond_z, np.linalg.norm(target))
    resid = np.linalg.norm(matrix_polynomial(g, d.adjacency) - target)
    if not np.isfinite(resid) or resid > tol:
        raise IllConditioned(
            f"polynomial reconstruction residual {resid:.3e} exceeds {tol:.3e} (cond(Z)={cond_z:.2e})"
        )
    return g
