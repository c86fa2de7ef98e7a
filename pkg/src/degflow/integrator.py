"""Explicit RK4 time advancement with step control and event detection.

The step size obeys both an advective CFL limit (using sqrt(|p'(rho)|) as
the stiffness scale even when c_p < 0 makes p' negative) and a diffusive
limit on mu(rho)/rho, and is additionally capped so the trajectory lands
exactly on record, snapshot and end times.  A run is strictly sequential
and deterministic; errors during stage evaluation become outcome statuses,
never exceptions.  Integration is abandoned exactly when the density
minimum crosses the vacuum floor: smooth continuation past that point is
the one thing the underlying theory rules out, so no clamping or rescue is
attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ConstitutiveLaw,
    DegflowError,
    DiagnosticsRecord,
    FluidState,
    ForcingSpec,
    Grid,
    NonFinite,
    NonPositiveDensity,
    validate_state,
)
from .constitutive import check_initial_condition_T13, classify_regime
from .dynamics import rhs_arrays

__all__ = ["StepControl", "RunOutcome", "DtUnderflow", "step", "select_dt", "run"]


class DtUnderflow(DegflowError):
    pass


@dataclass(frozen=True)
class StepControl:
    """Step-size and termination policy for a run.

    `vacuum_floor` of None resolves at run start to 1e-6 times the initial
    density minimum, making the vacuum detector scale-free.
    """

    end_time: float
    cfl_adv: float = 0.4
    cfl_diff: float = 0.25
    dt_min: float = 1e-12
    dt_max: float = math.inf
    vacuum_floor: float | None = None

    def __post_init__(self):
        if not (0.0 < self.cfl_adv <= 1.0 and 0.0 < self.cfl_diff <= 1.0):
            raise DegflowError("CFL fractions must lie in (0, 1]")
        if not (0.0 < self.dt_min <= self.dt_max):
            raise DegflowError("require 0 < dt_min <= dt_max")
        if self.vacuum_floor is not None and not self.vacuum_floor > 0.0:
            raise DegflowError("vacuum_floor must be positive")


@dataclass
class RunOutcome:
    """Result of a run: terminal status, final state and the diagnostics ledger.

    status is one of completed | vacuum_approach | nonfinite | dt_underflow.
    `snapshots` holds (t, state) pairs at requested times, `event` carries
    details of the terminating event.
    """

    status: str
    final_state: FluidState
    records: list
    snapshots: list = field(default_factory=list)
    steps: int = 0
    event: dict = field(default_factory=dict)


def _rk4_arrays(t, rho, u, dt, law, grid, forcing, source):
    half = 0.5 * dt
    k1r, k1u = rhs_arrays(t, rho, u, law, grid, forcing, source)
    k2r, k2u = rhs_arrays(t + half, rho + half * k1r, u + half * k1u, law, grid, forcing, source)
    k3r, k3u = rhs_arrays(t + half, rho + half * k2r, u + half * k2u, law, grid, forcing, source)
    k4r, k4u = rhs_arrays(t + dt, rho + dt * k3r, u + dt * k3u, law, grid, forcing, source)
    sixth = dt / 6.0
    rho_new = rho + sixth * (k1r + 2.0 * (k2r + k3r) + k4r)
    u_new = u + sixth * (k1u + 2.0 * (k2u + k3u) + k4u)
    return rho_new, u_new


def step(state: FluidState, law: ConstitutiveLaw, grid: Grid, forcing: ForcingSpec,
         dt: float, source=None) -> FluidState:
    """One classical RK4 step; the returned state is validated."""
    if not dt > 0.0:
        raise DegflowError(f"dt must be positive, got {dt!r}")
    rho, u = _rk4_arrays(state.t, state.rho, state.u, dt, law, grid, forcing, source)
    return validate_state(FluidState(t=state.t + dt, rho=rho, u=u), grid)


def select_dt(state: FluidState, law: ConstitutiveLaw, grid: Grid,
              control: StepControl) -> float:
    """Stability-limited step: min of advective and diffusive CFL bounds.

    Raises DtUnderflow when the stability formula itself demands less than
    dt_min (caps applied for landing on output times are not underflow).
    """
    rho, u = state.rho, state.u
    sound = np.sqrt(np.abs(law.c_p * law.gamma) * rho ** (law.gamma - 1.0))
    dt_adv = control.cfl_adv * grid.dx / float(np.max(np.abs(u) + sound))
    dt_diff = control.cfl_diff * grid.dx ** 2 / (law.c_mu * float(np.max(rho ** (law.alpha - 1.0))))
    raw = min(dt_adv, dt_diff)
    if raw < control.dt_min:
        raise DtUnderflow(f"stable dt {raw!r} below dt_min {control.dt_min!r}")
    return min(raw, control.dt_max)


def _floor_context(initial, law, grid, forcing):
    """(t0, rho_min0) when the closed-form density floor applies, else None."""
    if not classify_regime(law)["T1.3"].applies:
        return None
    if forcing.kind not in ("none", "time_only"):
        return None
    ok, _ = check_initial_condition_T13(initial, law, grid)
    if not ok:
        return None
    return initial.t, float(np.min(initial.rho))


def run(initial: FluidState, law: ConstitutiveLaw, grid: Grid, forcing: ForcingSpec,
        control: StepControl, record_interval: float = 0.0, snapshot_times=(),
        source=None, run_id: int | None = None) -> RunOutcome:
    """Advance to end_time or a terminating event, emitting diagnostics.

    record_interval = 0 records after every step; a positive interval
    records at t0 + k*interval (the integrator lands on those times
    exactly).  Snapshot times are captured the same way.
    """
    from .diagnostics import record as make_record

    validate_state(initial, grid)
    if not control.end_time > initial.t:
        raise DegflowError("end_time must exceed the initial time")
    floor = control.vacuum_floor
    if floor is None:
        floor = 1e-6 * float(np.min(initial.rho))
    floor_from = _floor_context(initial, law, grid, forcing)

    def snap_state(t, rho, u):
        return FluidState(t=t, rho=rho, u=u)

    def emit(state):
        records.append(
            make_record(state, law, grid, forcing, run_id=run_id, floor_from=floor_from)
        )

    t = initial.t
    rho = np.array(initial.rho, dtype=np.float64)
    u = np.array(initial.u, dtype=np.float64)
    end = control.end_time
    snaps_pending = sorted(ts for ts in snapshot_times if initial.t <= ts <= end)
    snapshots = []
    records: list[DiagnosticsRecord] = []
    last_valid = initial
    steps = 0

    emit(initial)
    if snaps_pending and snaps_pending[0] <= t:
        snapshots.append((t, initial))
        snaps_pending = [ts for ts in snaps_pending if ts > t]
    if float(np.min(rho)) <= floor:
        return RunOutcome(
            status="vacuum_approach", final_state=initial, records=records,
            snapshots=snapshots, steps=0,
            event=_vacuum_event(t, rho, grid, floor),
        )

    rec_index = 1
    while t < end:
        state_now = snap_state(t, rho, u)
        try:
            dt = select_dt(state_now, law, grid, control)
        except DtUnderflow as exc:
            return RunOutcome(
                status="dt_underflow", final_state=state_now, records=records,
                snapshots=snapshots, steps=steps, event={"t": t, "detail": str(exc)},
            )
        stops = [end]
        if record_interval > 0.0:
            stops.append(initial.t + rec_index * record_interval)
        if snaps_pending:
            stops.append(snaps_pending[0])
        next_stop = min(stops)
        capped = dt >= next_stop - t
        if capped:
            dt = next_stop - t

        try:
            rho_new, u_new = _rk4_arrays(t, rho, u, dt, law, grid, forcing, source)
        except (NonPositiveDensity, NonFinite) as exc:
            return RunOutcome(
                status="nonfinite", final_state=state_now, records=records,
                snapshots=snapshots, steps=steps, event={"t": t, "detail": str(exc)},
            )
        if not (np.all(np.isfinite(rho_new)) and np.all(np.isfinite(u_new))):
            return RunOutcome(
                status="nonfinite", final_state=state_now, records=records,
                snapshots=snapshots, steps=steps,
                event={"t": t, "detail": "non-finite state after step"},
            )
        if np.any(rho_new <= 0.0):
            return RunOutcome(
                status="nonfinite", final_state=state_now, records=records,
                snapshots=snapshots, steps=steps,
                event={"t": t, "detail": "density lost positivity within one step"},
            )

        t = next_stop if capped else t + dt
        rho, u = rho_new, u_new
        steps += 1
        state_new = snap_state(t, rho, u)
        last_valid = state_new

        if float(np.min(rho)) <= floor:
            emit(state_new)
            return RunOutcome(
                status="vacuum_approach", final_state=state_new, records=records,
                snapshots=snapshots, steps=steps,
                event=_vacuum_event(t, rho, grid, floor),
            )

        if snaps_pending and t >= snaps_pending[0]:
            snapshots.append((t, state_new))
            snaps_pending.pop(0)
        if record_interval > 0.0:
            if t >= initial.t + rec_index * record_interval:
                emit(state_new)
                rec_index += 1
            elif t >= end:
                emit(state_new)
        else:
            emit(state_new)

    return RunOutcome(
        status="completed", final_state=last_valid, records=records,
        snapshots=snapshots, steps=steps, event={},
    )


def _vacuum_event(t, rho, grid, floor):
    j = int(np.argmin(rho))
    return {
        "t": t,
        "min_rho": float(rho[j]),
        "x": float(grid.points[j]),
        "vacuum_floor": floor,
    }
