"""Periodic differentiation, quadrature and norms on the uniform grid.

The spectral scheme differentiates the trigonometric interpolant exactly
(Nyquist mode zeroed for odd orders); fd4 uses 4th-order central stencils
with periodic wraparound.  Quadrature is the uniform rectangle rule, which
is spectrally accurate for smooth periodic integrands and keeps the
discrete divergence theorem exact.  Dealiasing zeroes modes above n/3 and
is a no-op under fd4.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .core import Grid, NonFinite

__all__ = ["deriv", "integrate", "lp_norm", "sobolev_seminorm", "dealias"]

_mult_cache: dict = {}


def _spectral_multiplier(n: int, order: int) -> np.ndarray:
    key = (n, order)
    mult = _mult_cache.get(key)
    if mult is None:
        k = np.arange(n // 2 + 1, dtype=np.float64)
        if order == 1:
            mult = 2j * np.pi * k
            mult[-1] = 0.0  # Nyquist has no well-defined odd derivative
        else:
            mult = -((2.0 * np.pi * k) ** 2)
        _mult_cache[key] = mult
    return mult


def deriv(field: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Differentiate a periodic grid function (order 1 or 2)."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    field = np.asarray(field, dtype=np.float64)
    if field.shape != (grid.n,):
        raise ValueError(f"field of shape {field.shape} on n={grid.n} grid")
    if not np.all(np.isfinite(field)):
        raise NonFinite("deriv input contains non-finite samples")
    if grid.scheme == "spectral":
        spectrum = np.fft.rfft(field)
        spectrum *= _spectral_multiplier(grid.n, order)
        return np.fft.irfft(spectrum, grid.n)
    if order == 1:
        return kernels.fd4_deriv1(field, grid.dx)
    return kernels.fd4_deriv2(field, grid.dx)


def dealias(field: np.ndarray, grid: Grid) -> np.ndarray:
    """Zero the top third of the spectrum (2/3 rule); identity under fd4."""
    if grid.scheme != "spectral":
        return np.asarray(field, dtype=np.float64)
    spectrum = np.fft.rfft(field)
    spectrum[grid.n // 3 + 1:] = 0.0
    return np.fft.irfft(spectrum, grid.n)


def integrate(field: np.ndarray, grid: Grid) -> float:
    """Rectangle-rule integral over the periodic unit interval."""
    field = np.asarray(field, dtype=np.float64)
    if field.shape != (grid.n,):
        raise ValueError(f"field of shape {field.shape} on n={grid.n} grid")
    return float(np.sum(field) * grid.dx)


def lp_norm(field: np.ndarray, grid: Grid, p: float) -> float:
    """L^p norm by quadrature; p = inf returns the sample maximum of |field|."""
    field = np.asarray(field, dtype=np.float64)
    if p == math.inf:
        return float(np.max(np.abs(field)))
    if p < 1.0:
        raise ValueError(f"p must be >= 1 or inf, got {p!r}")
    return float(integrate(np.abs(field) ** p, grid) ** (1.0 / p))


def sobolev_seminorm(field: np.ndarray, grid: Grid, k: int) -> float:
    """L2 norm of the k-th derivative, k = 1..4, by repeated first derivatives."""
    if not 1 <= k <= 4:
        raise ValueError(f"k must be in 1..4, got {k!r}")
    out = np.asarray(field, dtype=np.float64)
    for _ in range(k):
        out = deriv(out, grid, 1)
    return lp_norm(out, grid, 2.0)
