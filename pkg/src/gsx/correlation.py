"""Auto- and cross-correlation of graph signals.

Lag convention: the graph quantities are the inner products

    R^G(l, m) = (S^l y)^H (S^m y)        r^G(l) = (S^l y)^H x

with 0-based lags (row/column i of the Wiener-Hopf matrix is lag i). On the
directed cycle ``C`` delays a signal, ``(C y)_n = y_{n-1}``, so the circular
counterparts are

    R(l) = sum_n y_{n+l} conj(y_n)       r(l) = sum_n x_{n+l} conj(y_n)

with indices taken mod N; then ``R^G(l, m) = R(l - m)`` and ``r^G(l) = r(l)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FastPathUnavailable
from .gft import as_signal
from .shift_ops import ShiftOperator, shift_powers


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    r: np.ndarray
    hermitian: bool
    toeplitz: bool

    @property
    def lag_count(self) -> int:
        return self.r.shape[0]

    def flags(self) -> dict:
        return {"lag_count": self.lag_count, "hermitian": self.hermitian, "toeplitz": self.toeplitz}


def _vec(x, n=None):
    v = np.asarray(x, dtype=complex).ravel()
    if n is not None and v.size != n:
        raise DimensionMismatch(f"expected length {n}, got {v.size}")
    return v


def autocorr_cyclic(y, l: int) -> complex:
    """Circular autocorrelation ``sum_n y_{(n+l) mod N} conj(y_n)``."""
    y = _vec(y)
    return complex(np.vdot(y, np.roll(y, -l)))


def crosscorr_cyclic(x, y, l: int) -> complex:
    """Circular cross-correlation ``sum_n x_{(n+l) mod N} conj(y_n)``."""
    x, y = _vec(x), _vec(y)
    if x.size != y.size:
        raise DimensionMismatch("x and y differ in length")
    return complex(np.vdot(y, np.roll(x, -l)))


def _fast_path_ok(s: ShiftOperator) -> bool:
    return s.energy_preserving and s.decomposition.unitary_v


def graph_autocorr(s: ShiftOperator, y, l: int, m: int) -> complex:
    """``y^H (S^l)^H S^m y`` via ``y_F^H conj(Lambda^l) V^H V Lambda^m y_F``."""
    d = s.decomposition
    y = as_signal(y, n=d.n).values
    y_f = d.v_inv @ y
    left = d.v @ (s.spectral_power(l) * y_f)
    right = d.v @ (s.spectral_power(m) * y_f)
    return complex(np.vdot(left, right))


def graph_crosscorr(s: ShiftOperator, x, y, l: int) -> complex:
    """``y^H (S^l)^H x`` via ``y_F^H conj(Lambda^l) V^H x``."""
    d = s.decomposition
    x = as_signal(x, n=d.n).values
    y = as_signal(y, n=d.n).values
    y_f = d.v_inv @ y
    return complex(np.vdot(s.spectral_power(l) * y_f, d.v.conj().T @ x))


def autocorr_matrix(s: ShiftOperator, y, L: int,
                    use_spectral_fast_path: bool | None = None) -> CorrelationMatrix:
    """``L x L`` matrix ``R[i, j] = R^G(i, j)``.

    The fast path ``sum_n |y_F(n)|^2 lambda_n^(j-i)`` needs an energy-preserving
    shift on a unitary eigenbasis; ``None`` picks it whenever it is legal.
    """
    legal = _fast_path_ok(s)
    if use_spectral_fast_path is None:
        use_spectral_fast_path = legal
    if use_spectral_fast_path and not legal:
        raise FastPathUnavailable(
            "spectral autocorrelation needs unitary V and an energy-preserving shift"
        )
    d = s.decomposition
    if use_spectral_fast_path:
        y_f = d.v_inv @ as_signal(y, n=d.n).values
        lags = np.arange(L)
        diff = lags[None, :] - lags[:, None]
        weights = np.abs(y_f) ** 2
        r = np.einsum("n,nij->ij", weights, np.exp(1j * np.multiply.outer(s.phases, diff)))
    else:
        b = shift_powers(s, y, L)
        r = b.conj().T @ b
    return CorrelationMatrix(r=r, hermitian=True, toeplitz=legal)


def crosscorr_vector(s: ShiftOperator, x, y, L: int,
                     use_spectral_fast_path: bool | None = None) -> np.ndarray:
    """Length-L vector ``r[i] = r^G(i)``; fast path ``sum_n conj(y_F) x_F conj(lambda)^i``."""
    legal = _fast_path_ok(s)
    if use_spectral_fast_path is None:
        use_spectral_fast_path = legal
    if use_spectral_fast_path and not legal:
        raise FastPathUnavailable(
            "spectral cross-correlation needs unitary V and an energy-preserving shift"
        )
    d = s.decomposition
    x = as_signal(x, n=d.n).values
    if use_spectral_fast_path:
        y_f = d.v_inv @ as_signal(y, n=d.n).values
        x_f = d.v_inv @ x
        return (y_f.conj() * x_f) @ np.conj(s.spectral_power(np.arange(L)))
    b = shift_powers(s, y, L)
    return b.conj().T @ x
