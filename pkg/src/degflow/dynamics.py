"""Semi-discrete right-hand sides and derived fields.

The momentum equation is evolved in primitive-velocity form

    du/dt = -u u_x + mu'(rho) rho_x / rho * u_x + mu(rho)/rho * u_xx
            - p'(rho)/rho * rho_x + f,

with the conservative form retained only as a cross-check; mass is advanced
in conservative flux form -d(rho u)/dx.  Under the spectral scheme every
nonlinear product term is dealiased with the 2/3 rule; fractional powers are
evaluated pointwise (they are not polynomial, so dealiasing them is
approximate and controlled by resolution).  mu'(rho) rho_x is assembled
pointwise as c_mu*alpha*rho**(alpha-1)*rho_x rather than by differentiating
mu(rho) spectrally, which would differentiate a non-band-limited field.

The active potential w and effective velocity X are always recomputed
pointwise from (rho, u); they are diagnostics here, never evolved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    ConstitutiveLaw,
    FluidState,
    ForcingSpec,
    Grid,
    NonPositiveDensity,
)
from .constitutive import pi_potential
from .spatial import dealias, deriv

__all__ = [
    "DerivedFields",
    "forcing_values",
    "forcing_x_derivative",
    "rhs",
    "rhs_arrays",
    "rhs_conservative",
    "active_potential",
    "bd_velocity",
    "energy_entropy_densities",
    "derived_fields",
    "w_rhs",
    "jet_rhs_arrays",
]


def _check_positive(rho: np.ndarray):
    if np.any(rho <= 0.0):
        j = int(np.argmin(rho))
        raise NonPositiveDensity(j, float(rho[j]))


def forcing_values(forcing: ForcingSpec, x: np.ndarray, t: float) -> np.ndarray:
    """Evaluate f(x, t) on the grid points."""
    f = np.zeros_like(x)
    if forcing.kind == "none":
        return f
    for term in forcing.terms:
        env = term.envelope.value(t)
        if env == 0.0:
            continue
        arg = 2.0 * np.pi * term.k * x + term.phase
        if forcing.kind == "gradient":
            # terms define g; f = dg/dx
            f += -2.0 * np.pi * term.k * term.amplitude * np.sin(arg) * env
        else:
            f += term.amplitude * np.cos(arg) * env
    return f


def forcing_x_derivative(forcing: ForcingSpec, x: np.ndarray, t: float) -> np.ndarray:
    """Evaluate df/dx(x, t) in closed form (zero for x-independent forcing)."""
    fx = np.zeros_like(x)
    if forcing.kind in ("none", "time_only"):
        return fx
    for term in forcing.terms:
        env = term.envelope.value(t)
        if env == 0.0:
            continue
        tpk = 2.0 * np.pi * term.k
        arg = tpk * x + term.phase
        if forcing.kind == "gradient":
            fx += -(tpk ** 2) * term.amplitude * np.cos(arg) * env
        else:
            fx += -tpk * term.amplitude * np.sin(arg) * env
    return fx


def rhs_arrays(
    t: float,
    rho: np.ndarray,
    u: np.ndarray,
    law: ConstitutiveLaw,
    grid: Grid,
    forcing: ForcingSpec,
    source=None,
):
    """Right-hand sides as raw arrays (the integrator's hot path).

    `source` is an optional callable t -> (S_rho, S_u) of extra source terms
    (used by manufactured-solution runs).
    """
    _check_positive(rho)
    dxr = deriv(rho, grid, 1)
    dxu = deriv(u, grid, 1)
    d2xu = deriv(u, grid, 2)

    flux = dealias(rho * u, grid)
    drho_dt = -deriv(flux, grid, 1)

    adv, visc, pres = kernels.momentum_terms(
        rho, u, dxr, dxu, d2xu, law.c_p, law.gamma, law.c_mu, law.alpha
    )
    du_dt = -dealias(adv, grid) + dealias(visc, grid) - dealias(pres, grid)
    du_dt += forcing_values(forcing, grid.points, t)

    if source is not None:
        s_rho, s_u = source(t)
        drho_dt = drho_dt + s_rho
        du_dt = du_dt + s_u
    return drho_dt, du_dt


def rhs(state: FluidState, law: ConstitutiveLaw, grid: Grid, forcing: ForcingSpec,
        t: float | None = None, source=None):
    """(drho/dt, du/dt) for a validated state."""
    t = state.t if t is None else t
    return rhs_arrays(t, state.rho, state.u, law, grid, forcing, source)


def rhs_conservative(state: FluidState, law: ConstitutiveLaw, grid: Grid,
                     forcing: ForcingSpec, t: float | None = None):
    """du/dt assembled from the conservative momentum equation.

    Expands d(rho u)/dt = -d(rho u^2)/dx - dp/dx + d(mu u_x)/dx + rho f and
    divides out rho; kept as a cross-check of the primitive form only.
    """
    t = state.t if t is None else t
    rho, u = state.rho, state.u
    _check_positive(rho)
    dxu = deriv(u, grid, 1)
    p = law.c_p * rho ** law.gamma
    mu = law.c_mu * rho ** law.alpha
    mom_flux = dealias(dealias(rho * u, grid) * u, grid)
    visc_flux = dealias(mu * dxu, grid)
    f = forcing_values(forcing, grid.points, t)
    dmom_dt = -deriv(mom_flux, grid, 1) - deriv(p, grid, 1) + deriv(visc_flux, grid, 1)
    dmom_dt = dmom_dt + rho * f
    drho_dt = -deriv(dealias(rho * u, grid), grid, 1)
    return (dmom_dt - u * drho_dt) / rho


def active_potential(state: FluidState, law: ConstitutiveLaw, grid: Grid) -> np.ndarray:
    """w = -p(rho) + mu(rho) * du/dx, pointwise."""
    _check_positive(state.rho)
    dxu = deriv(state.u, grid, 1)
    return kernels.active_potential_values(
        state.rho, dxu, law.c_p, law.gamma, law.c_mu, law.alpha
    )


def bd_velocity(state: FluidState, law: ConstitutiveLaw, grid: Grid) -> np.ndarray:
    """X = u + c_mu * rho**(alpha-2) * drho/dx, pointwise."""
    _check_positive(state.rho)
    dxr = deriv(state.rho, grid, 1)
    return kernels.bd_velocity_values(state.rho, dxr, state.u, law.c_mu, law.alpha)


def energy_entropy_densities(state: FluidState, law: ConstitutiveLaw, grid: Grid):
    """e = rho u^2/2 + pi(rho) and s = rho X^2/2 + pi(rho)."""
    pi = pi_potential(state.rho, law)
    x_field = bd_velocity(state, law, grid)
    e = 0.5 * state.rho * state.u ** 2 + pi
    s = 0.5 * state.rho * x_field ** 2 + pi
    return e, s


@dataclass(frozen=True)
class DerivedFields:
    """Pointwise derived fields of one state."""

    w: np.ndarray
    X: np.ndarray
    e: np.ndarray
    s: np.ndarray
    p: np.ndarray
    mu: np.ndarray


def derived_fields(state: FluidState, law: ConstitutiveLaw, grid: Grid) -> DerivedFields:
    _check_positive(state.rho)
    rho = state.rho
    e, s = energy_entropy_densities(state, law, grid)
    return DerivedFields(
        w=active_potential(state, law, grid),
        X=bd_velocity(state, law, grid),
        e=e,
        s=s,
        p=law.c_p * rho ** law.gamma,
        mu=law.c_mu * rho ** law.alpha,
    )


def w_rhs(state: FluidState, law: ConstitutiveLaw, grid: Grid, forcing: ForcingSpec,
          t: float | None = None) -> np.ndarray:
    """Pointwise right side of the active-potential evolution equation:

    dw/dt = c_mu rho**(a-1) w_xx - (u + c_mu rho**(a-2) rho_x) w_x
            + (c_p/c_mu)(g - 2(a+1)) rho**(g-a) w
            - ((a+1)/c_mu) rho**(-a) w^2
            + (c_p^2/c_mu)(g - (a+1)) rho**(2g-a)
            + c_mu rho**a df/dx.
    """
    t = state.t if t is None else t
    rho = state.rho
    _check_positive(rho)
    dxr = deriv(rho, grid, 1)
    w = active_potential(state, law, grid)
    dxw = deriv(w, grid, 1)
    d2xw = deriv(w, grid, 2)
    out = kernels.w_rhs_values(
        rho, state.u, dxr, w, dxw, d2xw, law.c_p, law.gamma, law.c_mu, law.alpha
    )
    if forcing.kind not in ("none", "time_only"):
        fx = forcing_x_derivative(forcing, grid.points, t)
        out = out + law.c_mu * rho ** law.alpha * fx
    return out


def jet_rhs_arrays(t: float, h: np.ndarray, u: np.ndarray, grid: Grid,
                   surface_tension: float, nu: float, gravity: float):
    """Right-hand sides of the slender-jet system in its native (h, u) variables.

    Used to demonstrate equivalence with the generic system under rho = h**2;
    production runs use the mapped law instead.
    """
    if np.any(h <= 0.0):
        j = int(np.argmin(h))
        raise NonPositiveDensity(j, float(h[j]))
    dxh = deriv(h, grid, 1)
    dxu = deriv(u, grid, 1)
    d2xu = deriv(u, grid, 2)
    dh_raw, du_raw = kernels.jet_rhs_values(h, u, dxh, dxu, d2xu, surface_tension, nu)
    dh_dt = dealias(dh_raw, grid)
    du_dt = dealias(du_raw, grid) - gravity
    return dh_dt, du_dt
