"""Optimal (Wiener) LSI graph filters.

Given a clean signal x and an observation y, find taps h minimizing
``||B h - x||`` where ``B = [y, S y, ..., S^(L-1) y]``. The public solver uses
an orthogonal factorization of B; :func:`wiener_taps_normal` solves the
graph Wiener-Hopf system ``R^G h = r^G`` literally and is kept as a cross-check.
For the canonical shift on a unitary eigenbasis with ``L = n`` there is a
closed form per Fourier bin (:func:`wiener_taps_spectral`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .correlation import autocorr_matrix, crosscorr_vector
from .errors import (
    ConditionsNotMet,
    DimensionMismatch,
    SingularNormalEquations,
    SpectralNull,
    ZeroReference,
)
from .filters import FilterTaps, apply_filter
from .gft import as_signal
from .shift_ops import ShiftKind, ShiftOperator, shift_powers

SPECTRUM_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class WienerProblem:
    shift: ShiftOperator
    x: np.ndarray
    y: np.ndarray
    L: int

    def __post_init__(self):
        n = self.shift.n
        x = as_signal(self.x, n=n).values
        y = as_signal(self.y, n=n).values
        if not 1 <= self.L <= n:
            raise DimensionMismatch(f"tap count L={self.L} must lie in [1, {n}]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True, eq=False)
class WienerSolution:
    taps: FilterTaps
    residual: float
    condition: float
    path: str

    def to_json(self) -> dict:
        out = self.taps.to_json()
        out.update(residual=self.residual, condition=self.condition, path=self.path)
        return out


def build_shift_basis(s: ShiftOperator, y, L: int) -> np.ndarray:
    """``n x L`` matrix whose column k is ``S^k y``."""
    return shift_powers(s, y, L)


def wiener_taps_ls(p: WienerProblem, allow_pinv: bool = False) -> FilterTaps:
    """Least-squares taps via QR of the shift basis.

    Raises:
        SingularNormalEquations: B is numerically rank deficient. With
            ``allow_pinv`` the minimum-norm least-squares solution is returned
            instead.
    """
    b = build_shift_basis(p.shift, p.y, p.L)
    sv = np.linalg.svd(b, compute_uv=False)
    tol = sv[0] * max(b.shape) * np.finfo(float).eps
    if sv[-1] <= tol:
        if not allow_pinv:
            raise SingularNormalEquations(
                f"shift basis is rank deficient (sigma_min={sv[-1]:.3e}, sigma_max={sv[0]:.3e})"
            )
        h = np.linalg.lstsq(b, p.x, rcond=None)[0]
    else:
        q, r = np.linalg.qr(b)
        h = scipy.linalg.solve_triangular(r, q.conj().T @ p.x)
    return FilterTaps(h, p.shift.kind)


def wiener_taps_normal(p: WienerProblem) -> FilterTaps:
    """Solve ``R^G h = r^G`` built from the definitional correlations."""
    r = autocorr_matrix(p.shift, p.y, p.L, use_spectral_fast_path=False).r
    rhs = crosscorr_vector(p.shift, p.x, p.y, p.L, use_spectral_fast_path=False)
    try:
        h = scipy.linalg.solve(r, rhs, assume_a="her")
    except np.linalg.LinAlgError as exc:
        raise SingularNormalEquations(str(exc)) from exc
    return FilterTaps(h, p.shift.kind)


def wiener_taps_spectral(p: WienerProblem) -> FilterTaps:
    """Closed-form power-spectrum solution for the canonical shift.

    With ``lambda_i = exp(j(phi_c - 2 pi i / n))`` the Wiener-Hopf matrix is
    ``W_lambda Y_F W_lambda^H`` and the system diagonalizes under the DFT:
    ``h_DFT(i) = r_xy,DFT(i) / (n |y_F(i)|^2)``, with ``h_DFT = W h`` for the
    unitary DFT matrix W. A nonzero ``phi_c`` is removed by modulating the
    cross-correlation lags by ``exp(j phi_c i)`` first.

    Raises:
        ConditionsNotMet: shift is not canonical, V is not unitary or L != n.
        SpectralNull: some ``|y_F(i)|`` is at most 1e-10 * max |y_F|.
    """
    s = p.shift
    d = s.decomposition
    n = d.n
    if s.kind is not ShiftKind.CANONICAL_E or not d.unitary_v or p.L != n:
        raise ConditionsNotMet(
            "closed-form Wiener solution needs the canonical shift, unitary V and L = n"
        )
    y_f = d.v_inv @ p.y
    power = np.abs(y_f) ** 2
    if np.min(np.abs(y_f)) <= SPECTRUM_RTOL * np.max(np.abs(y_f)):
        raise SpectralNull("observation has a (numerically) empty Fourier bin")

    lags = np.arange(n)
    mod = np.exp(1j * s.phi_const * lags)
    r_xy = crosscorr_vector(s, p.x, p.y, n, use_spectral_fast_path=True) * mod
    r_dft = np.fft.fft(r_xy) / np.sqrt(n)
    h_dft = r_dft / (n * power)
    h = np.fft.ifft(h_dft) * np.sqrt(n) / mod
    return FilterTaps(h, s.kind)


def solve(p: WienerProblem, path: str = "auto", allow_pinv: bool = False) -> WienerSolution:
    """Solve and report taps, residual ``||B h - x||``, cond(B) and the path used."""
    if path == "auto":
        try:
            taps = wiener_taps_spectral(p)
            path = "spectral"
        except (ConditionsNotMet, SpectralNull):
            taps = wiener_taps_ls(p, allow_pinv=allow_pinv)
            path = "ls"
    elif path == "spectral":
        taps = wiener_taps_spectral(p)
    elif path == "ls":
        taps = wiener_taps_ls(p, allow_pinv=allow_pinv)
    else:
        raise ValueError(f"unknown path {path!r}")
    b = build_shift_basis(p.shift, p.y, p.L)
    residual = float(np.linalg.norm(b @ taps.h - p.x))
    return WienerSolution(taps=taps, residual=residual, condition=float(np.linalg.cond(b)), path=path)


def filtered(p: WienerProblem, taps: FilterTaps) -> np.ndarray:
    """``H y`` for the given taps."""
    return apply_filter(p.shift, taps, p.y).values


def reconstruction_error(x, x_hat) -> float:
    """``||x - x_hat|| / ||x||``."""
    x = np.asarray(x, dtype=complex).ravel()
    x_hat = np.asarray(x_hat, dtype=complex).ravel()
    if x.shape != x_hat.shape:
        raise DimensionMismatch("x and x_hat differ in length")
    ref = np.linalg.norm(x)
    if ref == 0:
        raise ZeroReference("reference signal has zero norm")
    return float(np.linalg.norm(x - x_hat) / ref)
