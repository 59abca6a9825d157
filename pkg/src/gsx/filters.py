"""Linear shift-invariant graph filters ``H = sum_k h_k S^k``.

Filters are evaluated in the Fourier domain, where ``H`` is diagonal with the
frequency response ``sum_k h_k lambda_m^k`` on entry m.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegreeMismatch, IncompatibleShift, LengthExceedsDegree
from .gft import GraphSignal, as_signal
from .shift_ops import (
    ShiftKind,
    ShiftOperator,
    polynomial_tolerance,
    matrix_polynomial,
)
from .spectral_core import EigenDecomposition, MinimalPolynomial, vandermonde_solve

TRIM_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class FilterTaps:
    """Tap vector ``h_0 .. h_{L-1}``; ``shift_kind`` records which shift they refer to."""

    h: np.ndarray
    shift_kind: ShiftKind | None = None

    def __post_init__(self):
        h = np.array(self.h, dtype=complex, copy=True).ravel()
        if h.size < 1:
            raise ValueError("a filter needs at least one tap")
        if not np.all(np.isfinite(h)):
            raise ValueError("filter taps must be finite")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        if self.shift_kind is not None:
            object.__setattr__(self, "shift_kind", ShiftKind(self.shift_kind))

    def __len__(self):
        return self.h.shape[0]

    def to_json(self) -> dict:
        return {
            "shift_kind": None if self.shift_kind is None else self.shift_kind.value,
            "taps": [[float(c.real), float(c.imag)] for c in self.h],
        }

    @classmethod
    def from_json(cls, obj) -> FilterTaps:
        taps = [complex(re, im) for re, im in obj["taps"]]
        return cls(np.asarray(taps), obj.get("shift_kind"))


def _taps(t) -> FilterTaps:
    return t if isinstance(t, FilterTaps) else FilterTaps(np.asarray(t))


def _check(s: ShiftOperator, t: FilterTaps):
    if t.shift_kind is not None and t.shift_kind is not s.kind:
        raise IncompatibleShift(f"taps designed for {t.shift_kind.value}, shift is {s.kind.value}")


def frequency_response(s: ShiftOperator, t) -> np.ndarray:
    """Diagonal of ``V^-1 H V``: entry m is ``sum_k h_k lambda_m^k``."""
    t = _taps(t)
    _check(s, t)
    powers = s.spectral_power(np.arange(len(t)))
    return powers @ t.h


def lsi_filter_matrix(s: ShiftOperator, t) -> np.ndarray:
    d = s.decomposition
    return (d.v * frequency_response(s, t)) @ d.v_inv


def apply_filter(s: ShiftOperator, t, x) -> GraphSignal:
    """``H x`` computed as ``V (response * (V^-1 x))``."""
    d = s.decomposition
    x = as_signal(x, n=d.n)
    return GraphSignal(d.v @ (frequency_response(s, t) * (d.v_inv @ x.values)))


def adjacency_as_lsi_taps(d: EigenDecomposition, s: ShiftOperator) -> FilterTaps:
    """Taps h with ``sum_k h_k S^k = A``.

    For the canonical shift ``lambda_m = sum_k h_k exp(j phi_c k) exp(-2j pi m k / n)``,
    so ``h`` is the inverse DFT of the eigenvalue vector, demodulated by
    ``exp(-j phi_c k)``. Any other energy-preserving shift goes through a
    Vandermonde solve on its eigenvalues.
    """
    if s.kind is ShiftKind.CANONICAL_E:
        k = np.arange(d.n)
        h = np.fft.ifft(d.eigenvalues) * np.exp(-1j * s.phi_const * k)
    else:
        nodes = s.eigenvalues
        cond_z = float(np.linalg.cond(np.vander(nodes, increasing=True)))
        h = vandermonde_solve(nodes, d.eigenvalues, rtol=max(1e-8, 1e-14 * cond_z))
    return FilterTaps(h, s.kind)


def adjacency_reconstruction_residual(d: EigenDecomposition, s: ShiftOperator,
                                      t: FilterTaps) -> tuple[float, float]:
    """Dense check of ``||sum_k h_k S^k - A||_F`` against its tolerance."""
    cond_z = float(np.linalg.cond(np.vander(s.eigenvalues, increasing=True)))
    resid = np.linalg.norm(matrix_polynomial(t.h, s.matrix) - d.adjacency)
    return float(resid), polynomial_tolerance(cond_z, np.linalg.norm(d.adjacency))


def reduce_taps(t, mp: MinimalPolynomial) -> FilterTaps:
    """Fold taps of order >= deg(mp) back onto lower powers.

    Uses ``S^L = -sum_{i<L} alpha_i S^i`` from the highest power down, i.e. the
    remainder of ``h(z)`` modulo the minimal polynomial. Taps already shorter
    than the degree are returned unchanged.
    """
    t = _taps(t)
    deg = mp.degree
    if deg < 1:
        raise DegreeMismatch("minimal polynomial must have degree >= 1")
    if len(t) < deg:
        return t
    h = t.h.copy()
    alpha = mp.alpha[:deg]
    for k in range(len(h) - 1, deg - 1, -1):
        c = h[k]
        if c != 0:
            h[k - deg : k] -= c * alpha
        h[k] = 0
    return FilterTaps(h[:deg], t.shift_kind)


class FilterClass(str, Enum):
    GFIR = "GFIR"
    GIIR = "GIIR"


def effective_length(t) -> int:
    t = _taps(t)
    mags = np.abs(t.h)
    peak = mags.max()
    if peak == 0:
        return 1
    nz = np.nonzero(mags > TRIM_RTOL * peak)[0]
    return int(nz[-1]) + 1


def classify(t, mp: MinimalPolynomial) -> FilterClass:
    """GFIR if the trimmed tap count is below the minimal-polynomial degree, GIIR if equal."""
    length = effective_length(t)
    if length > mp.degree:
        raise LengthExceedsDegree(
            f"{length} taps exceed minimal-polynomial degree {mp.degree}; reduce first"
        )
    return FilterClass.GFIR if length < mp.degree else FilterClass.GIIR
