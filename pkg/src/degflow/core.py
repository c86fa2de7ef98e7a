"""Shared domain types: constitutive law, grid, state, forcing, diagnostics.

Everything here is plain data.  Validation lives in `validate_law` /
`validate_state`; numerical work lives in the other modules.  All types are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DegflowError",
    "InvalidLaw",
    "NonPositiveDensity",
    "LengthMismatch",
    "NonFinite",
    "ConstitutiveLaw",
    "Grid",
    "FluidState",
    "Envelope",
    "ForcingTerm",
    "ForcingSpec",
    "DiagnosticsRecord",
    "pi_reference_for",
    "validate_law",
    "validate_state",
]


class DegflowError(Exception):
    """Base class for all package errors."""


class InvalidLaw(DegflowError):
    pass


class NonPositiveDensity(DegflowError):
    """Density lost strict positivity.  Carries the first offending index."""

    def __init__(self, index: int, value: float):
        self.index = int(index)
        self.value = float(value)
        super().__init__(f"rho[{self.index}] = {self.value!r} is not > 0")


class LengthMismatch(DegflowError):
    pass


class NonFinite(DegflowError):
    pass


def pi_reference_for(gamma: float) -> str:
    """Reference-density branch of the pressure potential forced by gamma."""
    if gamma > 1.0:
        return "zero"
    if gamma == 1.0:
        return "one"
    return "infinity"


@dataclass(frozen=True)
class ConstitutiveLaw:
    """Power-law pressure and viscosity coefficients.

    p(rho) = c_p * rho**gamma   (c_p may be negative, never zero)
    mu(rho) = c_mu * rho**alpha (c_mu > 0)

    `pi_reference` tags the reference density of the pressure potential;
    it is determined by gamma and defaults accordingly.
    """

    c_p: float
    gamma: float
    c_mu: float
    alpha: float
    pi_reference: str = ""

    def __post_init__(self):
        if not self.pi_reference:
            object.__setattr__(self, "pi_reference", pi_reference_for(self.gamma))

    def to_dict(self) -> dict:
        return {
            "c_p": self.c_p,
            "gamma": self.gamma,
            "c_mu": self.c_mu,
            "alpha": self.alpha,
            "pi_reference": self.pi_reference,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConstitutiveLaw":
        return cls(
            c_p=float(d["c_p"]),
            gamma=float(d["gamma"]),
            c_mu=float(d["c_mu"]),
            alpha=float(d["alpha"]),
            pi_reference=str(d.get("pi_reference", "")),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ConstitutiveLaw":
        return cls.from_dict(json.loads(text))


def validate_law(law: ConstitutiveLaw) -> ConstitutiveLaw:
    """Check the admissibility of a constitutive law; return it unchanged.

    Rejects c_p = 0, c_mu <= 0, gamma <= 0, non-finite parameters and a
    pi_reference tag inconsistent with gamma.
    """
    for name in ("c_p", "gamma", "c_mu", "alpha"):
        v = getattr(law, name)
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise InvalidLaw(f"{name} must be a finite real, got {v!r}")
    if law.c_p == 0.0:
        raise InvalidLaw("c_p must be nonzero")
    if law.c_mu <= 0.0:
        raise InvalidLaw(f"c_mu must be > 0, got {law.c_mu!r}")
    if law.gamma <= 0.0:
        raise InvalidLaw(f"gamma must be > 0, got {law.gamma!r}")
    expected = pi_reference_for(law.gamma)
    if law.pi_reference != expected:
        raise InvalidLaw(
            f"pi_reference {law.pi_reference!r} inconsistent with gamma={law.gamma!r}"
            f" (expected {expected!r})"
        )
    return law


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on (0, 1] with n points x_j = j/n, j = 1..n.

    n must be a power of two, n >= 16.  `scheme` selects the differentiation
    machinery: "spectral" (Fourier) or "fd4" (4th-order central stencils).
    """

    n: int
    scheme: str = "spectral"

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 16 or (n & (n - 1)) != 0:
            raise DegflowError(f"n must be a power of two >= 16, got {n!r}")
        if self.scheme not in ("spectral", "fd4"):
            raise DegflowError(f"unknown scheme {self.scheme!r}")

    @property
    def dx(self) -> float:
        return 1.0 / self.n

    @property
    def points(self) -> np.ndarray:
        x = np.arange(1, self.n + 1, dtype=np.float64) / self.n
        x.setflags(write=False)
        return x

    def to_dict(self) -> dict:
        return {"n": self.n, "scheme": self.scheme}

    @classmethod
    def from_dict(cls, d: dict) -> "Grid":
        return cls(n=int(d["n"]), scheme=str(d.get("scheme", "spectral")))


def _frozen_array(values) -> np.ndarray:
    a = np.array(values, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FluidState:
    """Sampled density and velocity fields at one instant.

    For the slender-jet preset the stored `rho` is h**2 (the mapped density).
    Positivity of rho is a precondition everywhere; it is validated, never
    clamped, because its loss is exactly the blowup event being detected.
    """

    t: float
    rho: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", _frozen_array(self.rho))
        object.__setattr__(self, "u", _frozen_array(self.u))

    def to_dict(self) -> dict:
        return {"t": self.t, "rho": self.rho.tolist(), "u": self.u.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "FluidState":
        return cls(t=float(d["t"]), rho=d["rho"], u=d["u"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "FluidState":
        return cls.from_dict(json.loads(text))


def validate_state(state: FluidState, grid: Grid) -> FluidState:
    """Confirm lengths, finiteness and strict density positivity."""
    if state.rho.shape != (grid.n,) or state.u.shape != (grid.n,):
        raise LengthMismatch(
            f"fields of shape {state.rho.shape}/{state.u.shape} on n={grid.n} grid"
        )
    if not (np.all(np.isfinite(state.rho)) and np.all(np.isfinite(state.u))):
        raise NonFinite("state contains non-finite samples")
    if np.any(state.rho <= 0.0):
        j = int(np.argmin(state.rho))
        raise NonPositiveDensity(j, float(state.rho[j]))
    return state


ENVELOPE_KINDS = ("constant", "sin", "exp")


@dataclass(frozen=True)
class Envelope:
    """Time profile of a forcing term: 1, sin(omega*t) or exp(-lambda*t)."""

    kind: str = "constant"
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise DegflowError(f"unknown envelope kind {self.kind!r}")

    def value(self, t: float) -> float:
        if self.kind == "constant":
            return 1.0
        if self.kind == "sin":
            return math.sin(self.param * t)
        return math.exp(-self.param * t)

    def derivative(self, t: float) -> float:
        if self.kind == "constant":
            return 0.0
        if self.kind == "sin":
            return self.param * math.cos(self.param * t)
        return -self.param * math.exp(-self.param * t)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "param": self.param}

    @classmethod
    def from_dict(cls, d: dict) -> "Envelope":
        return cls(kind=str(d.get("kind", "constant")), param=float(d.get("param", 0.0)))


@dataclass(frozen=True)
class ForcingTerm:
    """One Fourier mode a*cos(2*pi*k*x + phase) carrying a time envelope."""

    k: int
    amplitude: float
    phase: float = 0.0
    envelope: Envelope = field(default_factory=Envelope)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "amplitude": self.amplitude,
            "phase": self.phase,
            "envelope": self.envelope.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ForcingTerm":
        return cls(
            k=int(d["k"]),
            amplitude=float(d["amplitude"]),
            phase=float(d.get("phase", 0.0)),
            envelope=Envelope.from_dict(d.get("envelope", {})),
        )


FORCING_KINDS = ("none", "time_only", "gradient", "general")


@dataclass(frozen=True)
class ForcingSpec:
    """Analytic forcing description.

    kind "none":      f = 0 (terms must be empty).
    kind "time_only": f(t) only; every term must have k = 0.
    kind "gradient":  the terms define g(x, t) and f = dg/dx, so f has zero
                      spatial mean.
    kind "general":   f(x, t) is the term sum itself.
    """

    kind: str = "none"
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.kind not in FORCING_KINDS:
            raise DegflowError(f"unknown forcing kind {self.kind!r}")
        if self.kind == "none" and self.terms:
            raise DegflowError("forcing kind 'none' admits no terms")
        if self.kind == "time_only" and any(term.k != 0 for term in self.terms):
            raise DegflowError("forcing kind 'time_only' requires every term to have k = 0")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "terms": [t.to_dict() for t in self.terms]}

    @classmethod
    def from_dict(cls, d: dict) -> "ForcingSpec":
        return cls(
            kind=str(d.get("kind", "none")),
            terms=tuple(ForcingTerm.from_dict(td) for td in d.get("terms", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ForcingSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Per-instant scalar functionals: the verification ledger row.

    `dissipation_entropy` keeps the sign of the integrand (it flips with
    c_p).  `hk_norms` maps "h{k}_{field}" to the L2 norm of the k-th
    derivative, k = 1..3.  `density_floor_bound` is present only when the
    run scenario satisfies the closed-form floor's hypotheses.
    `rhs_w_l2` stores the six-term right side of the w L2 balance and
    `grad_rho_m_sq` the squared L2 norm of d/dx(rho**m) used by the
    time-averaged max-density chain; both exist so residual and chain checks
    run from records alone.
    """

    t: float
    mass: float
    energy: float
    entropy: float
    min_rho: float
    max_rho: float
    max_w: float
    min_w: float
    l2_w: float
    dissipation_energy: float
    dissipation_entropy: float
    power_in_energy: float
    power_in_entropy: float
    hk_norms: dict
    density_floor_bound: float | None = None
    rhs_w_l2: float = 0.0
    grad_rho_m_sq: float | None = None
    run_id: int | None = None

    def __post_init__(self):
        if self.min_rho > self.max_rho:
            raise DegflowError("min_rho > max_rho")
        if not self.mass > 0.0:
            raise DegflowError("mass must be positive")
