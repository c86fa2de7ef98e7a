"""Hot pointwise kernels with a numba fast path and a pure-numpy fallback.

The environment flag DEGFLOW_NUMBA selects the path at import time:
DEGFLOW_NUMBA=0 forces the numpy implementations; anything else (or unset)
uses numba @njit when numba is importable.  Both implementations are kept
importable (suffixes `_numpy` / `_numba`) so tests and the benchmark can
compare them directly.

Everything here works on contiguous float64 1D arrays and is free of
transforms; the spectral machinery lives in `spatial`.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("DEGFLOW_NUMBA", "1") != "0"
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

__all__ = [
    "USE_NUMBA",
    "fd4_deriv1",
    "fd4_deriv2",
    "momentum_terms",
    "active_potential_values",
    "bd_velocity_values",
    "w_rhs_values",
    "jet_rhs_values",
]


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def fd4_deriv1_numpy(f: np.ndarray, dx: float) -> np.ndarray:
    """4th-order central first derivative with periodic wraparound."""
    fp1 = np.roll(f, -1)
    fm1 = np.roll(f, 1)
    fp2 = np.roll(f, -2)
    fm2 = np.roll(f, 2)
    return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * dx)


def fd4_deriv2_numpy(f: np.ndarray, dx: float) -> np.ndarray:
    """4th-order central second derivative with periodic wraparound."""
    fp1 = np.roll(f, -1)
    fm1 = np.roll(f, 1)
    fp2 = np.roll(f, -2)
    fm2 = np.roll(f, 2)
    return (-fp2 + 16.0 * fp1 - 30.0 * f + 16.0 * fm1 - fm2) / (12.0 * dx * dx)


def momentum_terms_numpy(rho, u, dxr, dxu, d2xu, c_p, gamma, c_mu, alpha):
    """Pointwise nonlinear terms of the primitive-velocity momentum equation.

    Returns (adv, visc, pres) with
      adv  = u * du/dx
      visc = c_mu*alpha*rho**(alpha-2) * drho/dx * du/dx
             + c_mu*rho**(alpha-1) * d2u/dx2
      pres = c_p*gamma*rho**(gamma-2) * drho/dx
    so that du/dt = -adv + visc - pres + f.
    """
    adv = u * dxu
    visc = c_mu * alpha * rho ** (alpha - 2.0) * dxr * dxu + c_mu * rho ** (alpha - 1.0) * d2xu
    pres = c_p * gamma * rho ** (gamma - 2.0) * dxr
    return adv, visc, pres


def active_potential_values_numpy(rho, dxu, c_p, gamma, c_mu, alpha):
    return -c_p * rho ** gamma + c_mu * rho ** alpha * dxu


def bd_velocity_values_numpy(rho, dxr, u, c_mu, alpha):
    return u + c_mu * rho ** (alpha - 2.0) * dxr


def w_rhs_values_numpy(rho, u, dxr, w, dxw, d2xw, c_p, gamma, c_mu, alpha):
    """Right side of the active-potential evolution, minus the forcing term.

    Adds up diffusion, drift, the linear and quadratic zero-order terms and
    the constant source; the caller appends c_mu*rho**alpha * df/dx.
    """
    diff = c_mu * rho ** (alpha - 1.0) * d2xw
    drift = -(u + c_mu * rho ** (alpha - 2.0) * dxr) * dxw
    lin = (c_p / c_mu) * (gamma - 2.0 * (alpha + 1.0)) * rho ** (gamma - alpha) * w
    quad = -((alpha + 1.0) / c_mu) * rho ** (-alpha) * w * w
    src = (c_p * c_p / c_mu) * (gamma - (alpha + 1.0)) * rho ** (2.0 * gamma - alpha)
    return diff + drift + lin + quad + src


def jet_rhs_values_numpy(h, u, dxh, dxu, d2xu, surface_tension, nu):
    """Pointwise right sides of the slender-jet system in (h, u) variables.

    dh/dt = -u*dh/dx - 0.5*h*du/dx
    du/dt = -u*du/dx + surface_tension*dh/dx/h**2
            + 3*nu*(2*(dh/dx/h)*du/dx + d2u/dx2)    (gravity added by caller)
    """
    dh_dt = -u * dxh - 0.5 * h * dxu
    du_dt = (
        -u * dxu
        + surface_tension * dxh / (h * h)
        + 3.0 * nu * (2.0 * (dxh / h) * dxu + d2xu)
    )
    return dh_dt, du_dt


# ---------------------------------------------------------------------------
# numba twins (explicit loops; identical arithmetic per point)
# ---------------------------------------------------------------------------

if USE_NUMBA:

    @njit(cache=True)
    def fd4_deriv1_numba(f, dx):
        n = f.shape[0]
        out = np.empty(n)
        c = 1.0 / (12.0 * dx)
        for j in range(n):
            jp1 = j + 1 if j + 1 < n else j + 1 - n
            jp2 = j + 2 if j + 2 < n else j + 2 - n
            jm1 = j - 1 if j - 1 >= 0 else j - 1 + n
            jm2 = j - 2 if j - 2 >= 0 else j - 2 + n
            out[j] = (8.0 * (f[jp1] - f[jm1]) - (f[jp2] - f[jm2])) * c
        return out

    @njit(cache=True)
    def fd4_deriv2_numba(f, dx):
        n = f.shape[0]
        out = np.empty(n)
        c = 1.0 / (12.0 * dx * dx)
        for j in range(n):
            jp1 = j + 1 if j + 1 < n else j + 1 - n
            jp2 = j + 2 if j + 2 < n else j + 2 - n
            jm1 = j - 1 if j - 1 >= 0 else j - 1 + n
            jm2 = j - 2 if j - 2 >= 0 else j - 2 + n
            out[j] = (-f[jp2] + 16.0 * f[jp1] - 30.0 * f[j] + 16.0 * f[jm1] - f[jm2]) * c
        return out

    @njit(cache=True)
    def momentum_terms_numba(rho, u, dxr, dxu, d2xu, c_p, gamma, c_mu, alpha):
        n = rho.shape[0]
        adv = np.empty(n)
        visc = np.empty(n)
        pres = np.empty(n)
        for j in range(n):
            adv[j] = u[j] * dxu[j]
            visc[j] = (
                c_mu * alpha * rho[j] ** (alpha - 2.0) * dxr[j] * dxu[j]
                + c_mu * rho[j] ** (alpha - 1.0) * d2xu[j]
            )
            pres[j] = c_p * gamma * rho[j] ** (gamma - 2.0) * dxr[j]
        return adv, visc, pres

    @njit(cache=True)
    def active_potential_values_numba(rho, dxu, c_p, gamma, c_mu, alpha):
        n = rho.shape[0]
        out = np.empty(n)
        for j in range(n):
            out[j] = -c_p * rho[j] ** gamma + c_mu * rho[j] ** alpha * dxu[j]
        return out

    @njit(cache=True)
    def bd_velocity_values_numba(rho, dxr, u, c_mu, alpha):
        n = rho.shape[0]
        out = np.empty(n)
        for j in range(n):
            out[j] = u[j] + c_mu * rho[j] ** (alpha - 2.0) * dxr[j]
        return out

    @njit(cache=True)
    def w_rhs_values_numba(rho, u, dxr, w, dxw, d2xw, c_p, gamma, c_mu, alpha):
        n = rho.shape[0]
        out = np.empty(n)
        for j in range(n):
            diff = c_mu * rho[j] ** (alpha - 1.0) * d2xw[j]
            drift = -(u[j] + c_mu * rho[j] ** (alpha - 2.0) * dxr[j]) * dxw[j]
            lin = (
                (c_p / c_mu)
                * (gamma - 2.0 * (alpha + 1.0))
                * rho[j] ** (gamma - alpha)
                * w[j]
            )
            quad = -((alpha + 1.0) / c_mu) * rho[j] ** (-alpha) * w[j] * w[j]
            src = (c_p * c_p / c_mu) * (gamma - (alpha + 1.0)) * rho[j] ** (
                2.0 * gamma - alpha
            )
            out[j] = diff + drift + lin + quad + src
        return out

    @njit(cache=True)
    def jet_rhs_values_numba(h, u, dxh, dxu, d2xu, surface_tension, nu):
        n = h.shape[0]
        dh_dt = np.empty(n)
        du_dt = np.empty(n)
        for j in range(n):
            dh_dt[j] = -u[j] * dxh[j] - 0.5 * h[j] * dxu[j]
            du_dt[j] = (
                -u[j] * dxu[j]
                + surface_tension * dxh[j] / (h[j] * h[j])
                + 3.0 * nu * (2.0 * (dxh[j] / h[j]) * dxu[j] + d2xu[j])
            )
        return dh_dt, du_dt

    fd4_deriv1 = fd4_deriv1_numba
    fd4_deriv2 = fd4_deriv2_numba
    momentum_terms = momentum_terms_numba
    active_potential_values = active_potential_values_numba
    bd_velocity_values = bd_velocity_values_numba
    w_rhs_values = w_rhs_values_numba
    jet_rhs_values = jet_rhs_values_numba
else:
    fd4_deriv1 = fd4_deriv1_numpy
    fd4_deriv2 = fd4_deriv2_numpy
    momentum_terms = momentum_terms_numpy
    active_potential_values = active_potential_values_numpy
    bd_velocity_values = bd_velocity_values_numpy
    w_rhs_values = w_rhs_values_numpy
    jet_rhs_values = jet_rhs_values_numpy
