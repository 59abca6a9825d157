"""Graph signals, the graph Fourier transform and its dual, frame bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, WrongDomain
from .spectral_core import EigenDecomposition

VERTEX = "vertex"
FOURIER = "fourier"


@dataclass(frozen=True, eq=False)
class GraphSignal:
    """Complex vector over the vertices, tagged with the domain it lives in."""

    values: np.ndarray
    domain: str = VERTEX

    def __post_init__(self):
        v = np.array(self.values, dtype=complex, copy=True).ravel()
        if not np.all(np.isfinite(v)):
            raise ValueError("graph signal has non-finite entries")
        if self.domain not in (VERTEX, FOURIER):
            raise ValueError(f"unknown domain {self.domain!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def as_signal(x, domain: str = VERTEX, n: int | None = None) -> GraphSignal:
    """Coerce arrays to a :class:`GraphSignal`; tagged signals must match ``domain``."""
    if isinstance(x, GraphSignal):
        if x.domain != domain:
            raise WrongDomain(f"expected a {domain}-domain signal, got {x.domain}")
        sig = x
    else:
        sig = GraphSignal(np.asarray(x), domain)
    if n is not None and len(sig) != n:
        raise DimensionMismatch(f"signal has length {len(sig)}, graph has {n} vertices")
    return sig


def gft(d: EigenDecomposition, x) -> GraphSignal:
    """``x_F = V^-1 x``."""
    x = as_signal(x, VERTEX, d.n)
    return GraphSignal(d.v_inv @ x.values, FOURIER)


def igft(d: EigenDecomposition, x_f) -> GraphSignal:
    """``x = V x_F``."""
    x_f = as_signal(x_f, FOURIER, d.n)
    return GraphSignal(d.v @ x_f.values, VERTEX)


def dual_gft(d: EigenDecomposition, x) -> GraphSignal:
    """``x~_F = V^H x``; pairs with :func:`gft` as ``<x, y> == <x~_F, y_F>``."""
    x = as_signal(x, VERTEX, d.n)
    return GraphSignal(d.v.conj().T @ x.values, FOURIER)


def dual_igft(d: EigenDecomposition, x_f) -> GraphSignal:
    """Inverse of :func:`dual_gft`, i.e. ``V^-H x~_F``."""
    x_f = as_signal(x_f, FOURIER, d.n)
    return GraphSignal(d.v_inv.conj().T @ x_f.values, VERTEX)


def inner(x, y) -> complex:
    """``<x, y> = y^H x``."""
    return complex(np.vdot(np.asarray(y), np.asarray(x)))


@dataclass(frozen=True)
class FrameBounds:
    """Frame bounds of the analysis operator ``V^-1``.

    ``alpha``/``beta`` are the squared extreme singular values of ``V^-1``, so
    ``alpha ||x||^2 <= ||x_F||^2 <= beta ||x||^2`` holds for every x.
    ``literal_alpha`` is ``1 / ||V^-1||_2^2``, which is only a valid lower bound
    when V is unitary; it is kept for reporting.
    """

    alpha: float
    beta: float
    literal_alpha: float

    def contains(self, x_energy: float, xf_energy: float, rtol: float = 1e-9) -> bool:
        lo = self.alpha * x_energy * (1 - rtol)
        hi = self.beta * x_energy * (1 + rtol)
        return lo <= xf_energy <= hi

    def shift_domain_range(self, xf_energy: float) -> tuple[float, float]:
        """Range of ``||x||^2`` allowed for a given Fourier-domain energy."""
        return xf_energy / self.beta, xf_energy / self.alpha


def frame_bounds(d: EigenDecomposition) -> FrameBounds:
    s = np.linalg.svd(d.v_inv, compute_uv=False)
    beta = float(s[0] ** 2)
    return FrameBounds(alpha=float(s[-1] ** 2), beta=beta, literal_alpha=1.0 / beta)


def energy(x) -> float:
    """Squared 2-norm."""
    v = np.asarray(x)
    return float(np.real(np.vdot(v, v)))
