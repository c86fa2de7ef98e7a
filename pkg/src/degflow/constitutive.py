"""Thermodynamic closed forms, model presets and the theorem-hypothesis tables.

All fractional powers use the principal real branch and require strictly
positive density; there is no epsilon-regularization, since a regularized
viscosity would invalidate the degenerate-viscosity bounds being monitored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ConstitutiveLaw, DegflowError, FluidState, Grid, validate_law
from .spatial import deriv

__all__ = [
    "ModelPreset",
    "RegimeVerdict",
    "pressure",
    "pressure_derivative",
    "viscosity",
    "viscosity_derivative",
    "pi_potential",
    "enthalpy",
    "preset_to_law",
    "jet_transform",
    "classify_regime",
    "check_initial_condition_T13",
    "REGIME_TAGS",
]


def _positive(rho):
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho <= 0.0):
        raise DegflowError("rho must be strictly positive")
    return rho


def _scalarize(out, rho):
    return float(out) if np.isscalar(rho) or np.ndim(rho) == 0 else out


def pressure(rho, law: ConstitutiveLaw):
    """p(rho) = c_p * rho**gamma."""
    r = _positive(rho)
    return _scalarize(law.c_p * r ** law.gamma, rho)


def pressure_derivative(rho, law: ConstitutiveLaw):
    """p'(rho) = c_p * gamma * rho**(gamma - 1)."""
    r = _positive(rho)
    return _scalarize(law.c_p * law.gamma * r ** (law.gamma - 1.0), rho)


def viscosity(rho, law: ConstitutiveLaw):
    """mu(rho) = c_mu * rho**alpha > 0."""
    r = _positive(rho)
    return _scalarize(law.c_mu * r ** law.alpha, rho)


def viscosity_derivative(rho, law: ConstitutiveLaw):
    """mu'(rho) = c_mu * alpha * rho**(alpha - 1)."""
    r = _positive(rho)
    return _scalarize(law.c_mu * law.alpha * r ** (law.alpha - 1.0), rho)


def pi_potential(rho, law: ConstitutiveLaw):
    """Pressure potential with pi'' = p'/rho.

    gamma != 1: c_p/(gamma-1) * rho**gamma (the closed form absorbs both the
    rho_ref = 0 and rho_ref = infinity branches); gamma = 1: c_p*rho*log(rho).
    """
    r = _positive(rho)
    if law.gamma == 1.0:
        out = law.c_p * r * np.log(r)
    else:
        out = law.c_p / (law.gamma - 1.0) * r ** law.gamma
    return _scalarize(out, rho)


def enthalpy(rho, law: ConstitutiveLaw):
    """Antiderivative of p'(rho)/rho.

    gamma != 1: c_p*gamma/(gamma-1) * rho**(gamma-1); gamma = 1: c_p*log(rho)
    (normalized to vanish at rho = 1).  Only gradients of this enter the
    dynamics, so the normalization is inert.
    """
    r = _positive(rho)
    if law.gamma == 1.0:
        out = law.c_p * np.log(r)
    else:
        out = law.c_p * law.gamma / (law.gamma - 1.0) * r ** (law.gamma - 1.0)
    return _scalarize(out, rho)


@dataclass(frozen=True)
class ModelPreset:
    """Named physical model mapped onto the generic power-law system.

    generic / navier_stokes carry an explicit law; shallow_water carries
    (gravity, viscosity_nu); slender_jet carries (surface_tension,
    viscosity_nu, gravity) and works in the neck radius h with rho = h**2.
    """

    name: str
    law: ConstitutiveLaw | None = None
    gravity: float = 0.0
    viscosity_nu: float = 0.0
    surface_tension: float = 0.0

    NAMES = ("generic", "navier_stokes", "shallow_water", "slender_jet")

    def __post_init__(self):
        if self.name not in self.NAMES:
            raise DegflowError(f"unknown preset {self.name!r}")


def preset_to_law(preset: ModelPreset):
    """Map a preset to (law, state_transform, forcing_addend).

    state_transform is "none" or "h_squared" (store rho = h**2); the forcing
    addend is a constant accelerating term (only the jet's -g is nonzero).
    """
    if preset.name in ("generic", "navier_stokes"):
        if preset.law is None:
            raise DegflowError(f"preset {preset.name!r} requires an explicit law")
        law = validate_law(preset.law)
        if preset.name == "navier_stokes" and law.c_p <= 0.0:
            raise DegflowError("navier_stokes preset requires c_p > 0")
        return law, "none", 0.0
    if preset.name == "shallow_water":
        if preset.gravity <= 0.0 or preset.viscosity_nu <= 0.0:
            raise DegflowError("shallow_water requires gravity > 0 and viscosity_nu > 0")
        law = ConstitutiveLaw(
            c_p=preset.gravity / 2.0, gamma=2.0, c_mu=4.0 * preset.viscosity_nu, alpha=1.0
        )
        return validate_law(law), "none", 0.0
    # slender_jet
    if preset.surface_tension <= 0.0 or preset.viscosity_nu <= 0.0 or preset.gravity <= 0.0:
        raise DegflowError(
            "slender_jet requires surface_tension, viscosity_nu and gravity > 0"
        )
    law = ConstitutiveLaw(
        c_p=-preset.surface_tension, gamma=0.5, c_mu=3.0 * preset.viscosity_nu, alpha=1.0
    )
    return validate_law(law), "h_squared", -preset.gravity


def jet_transform(values, direction: str):
    """Change of variables between the jet radius h and the density h**2."""
    v = np.asarray(values, dtype=np.float64)
    if np.any(v <= 0.0):
        raise DegflowError("jet_transform requires strictly positive input")
    if direction == "forward":
        return v * v
    if direction == "inverse":
        return np.sqrt(v)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


REGIME_TAGS = ("T1.1i", "T1.1ii", "T1.2", "T1.3", "T1.4")

# Forcing class each regime additionally demands at run time (law-only tags
# carry None).  "time_only" admits unforced runs; "gradient" likewise.
REGIME_FORCING = {
    "T1.1i": None,
    "T1.1ii": None,
    "T1.2": None,
    "T1.3": "time_only",
    "T1.4": "gradient",
}


@dataclass(frozen=True)
class RegimeVerdict:
    tag: str
    applies: bool
    conditions: dict = field(default_factory=dict)
    requires_forcing: str | None = None


def classify_regime(law: ConstitutiveLaw) -> dict:
    """Evaluate each theorem's parameter hypotheses literally.

    Returns {tag: RegimeVerdict}; a verdict's `conditions` dict records the
    truth value of every clause so reports can show which one failed.
    Forcing-class requirements are carried as metadata and enforced by the
    run-time monitors, not here.
    """
    cp, g, a = law.c_p, law.gamma, law.alpha
    tables = {
        "T1.1i": {
            "c_p > 0": cp > 0.0,
            "alpha > 1/2": a > 0.5,
            "gamma != 1": g != 1.0,
            "gamma >= alpha - 1/2": g >= a - 0.5,
        },
        "T1.1ii": {
            "c_p < 0": cp < 0.0,
            "1/2 < alpha <= 3/2": 0.5 < a <= 1.5,
            "gamma < 1": g < 1.0,
            "0 < gamma <= alpha": 0.0 < g <= a,
        },
        "T1.2": {
            "c_p > 0": cp > 0.0,
            "1/2 < alpha <= 1": 0.5 < a <= 1.0,
            "gamma >= 2*alpha": g >= 2.0 * a,
        },
        "T1.3": {
            "c_p > 0": cp > 0.0,
            "alpha > 1/2": a > 0.5,
            "alpha <= gamma <= alpha + 1": a <= g <= a + 1.0,
            "gamma != 1": g != 1.0,
        },
        "T1.4": {
            "c_p > 0": cp > 0.0,
            "c_mu > 0": law.c_mu > 0.0,
            "alpha >= 1/2": a >= 0.5,
            "max(2-alpha, alpha) <= gamma <= alpha + 1": max(2.0 - a, a) <= g <= a + 1.0,
        },
    }
    return {
        tag: RegimeVerdict(
            tag=tag,
            applies=all(conds.values()),
            conditions=conds,
            requires_forcing=REGIME_FORCING[tag],
        )
        for tag, conds in tables.items()
    }


def regime_tags(law: ConstitutiveLaw) -> set:
    return {tag for tag, v in classify_regime(law).items() if v.applies}


def check_initial_condition_T13(state0: FluidState, law: ConstitutiveLaw, grid: Grid):
    """Pointwise data condition du0/dx <= (c_p/c_mu) * rho0**(gamma-alpha).

    Returns (ok, slack) with slack = max over the grid of the left side minus
    the right side; ok iff slack <= 0.  The condition is equivalent to the
    active potential being nonpositive initially.
    """
    dxu = deriv(state0.u, grid, 1)
    bound = (law.c_p / law.c_mu) * state0.rho ** (law.gamma - law.alpha)
    slack = float(np.max(dxu - bound))
    return slack <= 0.0, slack
