"""Time-domain simulation of the shaft -> clutch -> gear -> flywheel chain.

Model summary
-------------
The drive shaft follows a commanded speed profile (the braking hardware
is abstracted away; only the resulting shaft speed matters). An
overrunning clutch couples the gear-boosted shaft to the flywheel
whenever the boosted speed keeps up with the wheel's coasting speed;
while coupled the flywheel is kinematically slaved to ratio *
omega_shaft (clutch slip is not modelled), and the input work over a
step is defined by the energy balance of that constraint. A shaft that
decelerates more gently than the wheel's natural decay therefore keeps
carrying the wheel down its ramp; the wheel releases only where the
commanded deceleration outpaces the decay, and from that instant it
freewheels under resistive and generator torques, integrated with
classical fixed-step fourth-order Runge-Kutta. The loss and generator
work integrals ride along in the Runge-Kutta state vector, so the energy
ledger closes to integration accuracy at every sample.

Phases classify each sample of a run: IDLE before the wheel is first
energized, ENGAGED while coupled and climbing, SYNCHRONIZED while
coupled after the first peak (e.g. the constant-speed hold of a
rise-hold-brake profile), FREE_SPIN after the clutch overruns, and
STOPPED below the stop threshold. A profile with no hold interval
produces no SYNCHRONIZED phase at all; the sequence then skips straight
from ENGAGED to FREE_SPIN.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import (ConfigError, EnergyLedger, FlywheelSpec, NumericFault,
                   Phase, SpeedTrace, inertia)
from .electrical import Alternator, ChargeEvent, UltracapBank

__all__ = [
    "GearTrain",
    "IntegratorSettings",
    "LossModel",
    "PhaseSpan",
    "RbsState",
    "Scenario",
    "ShaftProfile",
    "SimulationResult",
    "clutch_engaged",
    "loss_torque",
    "phase_of",
    "simulate",
    "step",
]


@dataclass(frozen=True)
class GearTrain:
    """Speed-boosting train reduced to a single ratio.

    ratio = flywheel speed / shaft speed while the clutch is engaged.
    """

    ratio: float = 4.0

    def __post_init__(self):
        if not self.ratio > 0.0:
            raise ValueError("gear ratio must be positive")


@dataclass(frozen=True)
class LossModel:
    """Resistive torque opposing flywheel rotation.

    torque(omega) = coulomb_torque + viscous_coeff*omega + aero_coeff*omega^2
    for omega > 0, and zero at rest. Coulomb and viscous terms are booked
    as friction loss, the quadratic term as aerodynamic loss.
    """

    coulomb_torque: float = 0.0
    viscous_coeff: float = 0.0
    aero_coeff: float = 0.0

    def __post_init__(self):
        if min(self.coulomb_torque, self.viscous_coeff, self.aero_coeff) < 0.0:
            raise ValueError("loss coefficients must be non-negative")


def loss_torque(model: LossModel, omega: float) -> float:
    """Resistive torque (N*m) at speed omega >= 0; zero at rest."""
    if omega < 0.0:
        raise ValueError("angular velocity must be non-negative")
    if omega == 0.0:
        return 0.0
    return model.coulomb_torque + model.viscous_coeff * omega + model.aero_coeff * omega**2


@dataclass(frozen=True, eq=False)
class ShaftProfile:
    """Commanded shaft angular velocity as a piecewise-linear function of time.

    Beyond the last sample the command holds the final value (a profile
    that brakes to zero stays at zero while the flywheel free-spins).
    """

    trace: SpeedTrace

    @classmethod
    def from_trace(cls, trace: SpeedTrace) -> "ShaftProfile":
        return cls(trace)

    @classmethod
    def ramp(cls, omega_hold: float, rise_s: float, hold_s: float,
             brake_s: float) -> "ShaftProfile":
        """Spin up from rest, optionally hold, then brake linearly to zero.

        hold_s = 0 gives the degenerate triangular profile whose peak
        coincides with the start of braking.
        """
        if omega_hold <= 0.0:
            raise ValueError("hold speed must be positive")
        if rise_s <= 0.0 or brake_s <= 0.0 or hold_s < 0.0:
            raise ValueError("rise and brake durations must be positive, hold >= 0")
        knots = [(0.0, 0.0), (rise_s, omega_hold)]
        if hold_s > 0.0:
            knots.append((rise_s + hold_s, omega_hold))
        knots.append((rise_s + hold_s + brake_s, 0.0))
        return cls(SpeedTrace.from_pairs(knots))

    @classmethod
    def hold_then_brake(cls, omega_hold: float, hold_s: float,
                        brake_s: float) -> "ShaftProfile":
        """Start already spinning at omega_hold, brake to zero after hold_s."""
        if omega_hold <= 0.0 or hold_s <= 0.0 or brake_s <= 0.0:
            raise ValueError("speed and durations must be positive")
        return cls(SpeedTrace.from_pairs(
            [(0.0, omega_hold), (hold_s, omega_hold), (hold_s + brake_s, 0.0)]))

    @property
    def t_start(self) -> float:
        return float(self.trace.times[0])

    @property
    def t_end(self) -> float:
        return float(self.trace.times[-1])

    def omega(self, t: float) -> float:
        return self.trace.value_at(t)

    def omega_at(self, ts: np.ndarray) -> np.ndarray:
        return np.interp(ts, self.trace.times, self.trace.omegas)


def clutch_engaged(omega_shaft: float, omega_flywheel: float, gear: GearTrain,
                   eps: float = 1e-3) -> bool:
    """Overrunning-clutch engagement test.

    The clutch transmits torque only while the boosted shaft speed keeps
    up with the flywheel: engaged iff ratio*omega_shaft >=
    omega_flywheel - eps. The eps band is hysteresis against chattering
    at the overrun boundary; it lets the clutch stay closed while the
    two sides track each other exactly.
    """
    if omega_shaft < 0.0 or omega_flywheel < 0.0:
        raise ValueError("speeds must be non-negative")
    if eps < 0.0:
        raise ValueError("eps must be non-negative")
    return gear.ratio * omega_shaft >= omega_flywheel - eps


@dataclass(frozen=True)
class IntegratorSettings:
    """Fixed-step integration controls.

    t_max of None runs until the flywheel stops (subject to max_steps as
    a runaway guard — a lossless wheel never stops, give it a horizon).
    """

    dt: float = 1e-3
    output_stride: int = 10
    t_max: float | None = None
    max_steps: int = 20_000_000

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ConfigError("dt must be positive")
        if self.output_stride < 1:
            raise ConfigError("output stride must be >= 1")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")


@dataclass(frozen=True)
class RbsState:
    """Instantaneous drivetrain state plus the run ledger up to time t."""

    t: float
    omega_shaft: float
    omega_flywheel: float
    engaged: bool
    phase: Phase
    ledger: EnergyLedger


@dataclass(frozen=True)
class Scenario:
    """Complete description of one simulation run."""

    flywheel: FlywheelSpec
    gear: GearTrain
    losses: LossModel
    alternator: Alternator
    bank: UltracapBank
    shaft_profile: ShaftProfile
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings)
    eps_sync: float = 1e-3
    omega_stop_threshold: float = 0.01
    omega_flywheel_initial: float = 0.0

    def __post_init__(self):
        if self.eps_sync < 0.0:
            raise ConfigError("eps_sync must be non-negative")
        if not self.omega_stop_threshold > 0.0:
            raise ConfigError("stop threshold must be positive")
        if self.omega_flywheel_initial < 0.0:
            raise ConfigError("initial flywheel speed must be non-negative")

    def validate(self) -> None:
        """Re-check cross-field consistency; component types validate themselves."""
        if self.shaft_profile.trace.duration <= 0.0:
            raise ConfigError("shaft profile spans zero time")
        t_max = self.integrator.t_max
        if t_max is not None and t_max <= self.shaft_profile.t_start:
            raise ConfigError("t_max does not reach past the profile start")


class PhaseSpan(NamedTuple):
    phase: Phase
    t_start: float
    t_end: float


@dataclass(frozen=True)
class SimulationResult:
    """Output of simulate(): sampled trajectory, final ledger, phase spans,
    charge-controller events, and summary speeds."""

    trajectory: list[RbsState]
    ledger: EnergyLedger
    phase_timeline: list[PhaseSpan]
    charge_events: list[ChargeEvent]
    bank_final: UltracapBank
    omega_peak: float
    omega_final: float
    t_final: float

    @property
    def battery_energy(self) -> float:
        """Total energy dumped to the principal storage (J)."""
        return sum(e.energy_dumped for e in self.charge_events)


def _deriv(w: float, inv_i: float, cm: float, cv: float, ca: float, cal: float):
    """Free-spin derivatives: (domega/dt, P_friction, P_aero, P_alternator)."""
    if w <= 0.0:
        return 0.0, 0.0, 0.0, 0.0
    tf = cm + cv * w
    ta = ca * w * w
    tl = cal * w
    return -(tf + ta + tl) * inv_i, tf * w, ta * w, tl * w


def _advance(om: float, drv_next: float, dt: float, I: float, inv_i: float,
             cm: float, cv: float, ca: float, cal: float, eps: float):
    """Advance the flywheel one step against the boosted shaft speed at the
    step end.

    The coasting (clutch-open) speed is computed first; the clutch is
    engaged for the step iff the boosted shaft keeps up with that
    coasting speed, so a driver decelerating more gently than the wheel's
    natural decay carries the wheel down with it instead of chattering at
    the overrun boundary.

    Returns (om_new, engaged, w_fric, w_aero, w_alt, w_input): the work
    increments in joules, with w_input nonzero only on engaged steps
    (defined by the slaving energy balance, so the ledger closes exactly
    there).
    """
    k1w, k1f, k1a, k1l = _deriv(om, inv_i, cm, cv, ca, cal)
    k2w, k2f, k2a, k2l = _deriv(om + 0.5 * dt * k1w, inv_i, cm, cv, ca, cal)
    k3w, k3f, k3a, k3l = _deriv(om + 0.5 * dt * k2w, inv_i, cm, cv, ca, cal)
    k4w, k4f, k4a, k4l = _deriv(om + dt * k3w, inv_i, cm, cv, ca, cal)
    sixth = dt / 6.0
    om_free = om + sixth * (k1w + 2.0 * (k2w + k3w) + k4w)
    if om_free < 0.0:
        # a mild overshoot through zero is a normal end-of-decay step; a
        # violent one means the step does not resolve the dynamics
        if om_free < -(om + 1.0):
            raise NumericFault(
                "flywheel speed diverged (unstable step; reduce dt)")
        om_free = 0.0

    if drv_next >= om_free - eps:
        om1 = drv_next
        pf0 = (cm + cv * om) * om
        pa0 = ca * om * om * om
        pl0 = cal * om * om
        pf1 = (cm + cv * om1) * om1
        pa1 = ca * om1 * om1 * om1
        pl1 = cal * om1 * om1
        wf = 0.5 * (pf0 + pf1) * dt
        wa = 0.5 * (pa0 + pa1) * dt
        wl = 0.5 * (pl0 + pl1) * dt
        dke = 0.5 * I * (om1 * om1 - om * om)
        return om1, True, wf, wa, wl, dke + wf + wa + wl

    wf = sixth * (k1f + 2.0 * (k2f + k3f) + k4f)
    wa = sixth * (k1a + 2.0 * (k2a + k3a) + k4a)
    wl = sixth * (k1l + 2.0 * (k2l + k3l) + k4l)
    return om_free, False, wf, wa, wl, 0.0


def _classify(om_new: float, rising: bool, engaged: bool, prev_phase: Phase,
              threshold: float) -> Phase:
    energized = (prev_phase is not Phase.IDLE) or om_new >= threshold
    if not energized:
        return Phase.IDLE
    if om_new < threshold:
        return Phase.STOPPED
    if engaged:
        return Phase.ENGAGED if rising else Phase.SYNCHRONIZED
    return Phase.FREE_SPIN


def _initial_phase(om0: float, engaged0: bool, threshold: float) -> Phase:
    if om0 < threshold:
        return Phase.IDLE
    return Phase.SYNCHRONIZED if engaged0 else Phase.FREE_SPIN


def step(state: RbsState, scenario: Scenario, dt: float) -> RbsState:
    """Advance a single state by one step of length dt.

    Equivalent to one iteration of simulate()'s loop; useful for custom
    stepping schemes and tests.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if not (math.isfinite(state.t) and math.isfinite(state.omega_shaft)
            and math.isfinite(state.omega_flywheel)):
        raise NumericFault("non-finite state")
    I = inertia(scenario.flywheel)
    losses = scenario.losses
    t1 = state.t + dt
    drv_next = scenario.gear.ratio * scenario.shaft_profile.omega(t1)
    om = state.omega_flywheel
    om1, engaged, wf, wa, wl, win = _advance(
        om, drv_next, dt, I, 1.0 / I, losses.coulomb_torque,
        losses.viscous_coeff, losses.aero_coeff,
        scenario.alternator.load_coeff, scenario.eps_sync)
    if not math.isfinite(om1):
        raise NumericFault(f"angular velocity diverged at t={t1:.6g}")
    eff = scenario.alternator.efficiency
    led = state.ledger
    ledger = EnergyLedger(
        input_work=led.input_work + win,
        flywheel_ke_delta=led.flywheel_ke_delta + 0.5 * I * (om1 * om1 - om * om),
        loss_friction=led.loss_friction + wf,
        loss_aero=led.loss_aero + wa,
        loss_electrical=led.loss_electrical + (1.0 - eff) * wl,
        delivered_electrical=led.delivered_electrical + eff * wl,
    )
    phase = _classify(om1, om1 > om, engaged, state.phase,
                      scenario.omega_stop_threshold)
    return RbsState(t=t1, omega_shaft=scenario.shaft_profile.omega(t1),
                    omega_flywheel=om1, engaged=engaged, phase=phase,
                    ledger=ledger)


_CHUNK = 16384


def simulate(scenario: Scenario) -> SimulationResult:
    """Run a scenario to its stop condition or time horizon.

    The trajectory is sampled every output_stride steps (plus the final
    state); the phase timeline is built from every step. The run ends at
    the first STOPPED classification, at t_max if given, or raises
    NumericFault after max_steps.
    """
    scenario.validate()
    I = inertia(scenario.flywheel)
    inv_i = 1.0 / I
    ratio = scenario.gear.ratio
    eps = scenario.eps_sync
    threshold = scenario.omega_stop_threshold
    losses = scenario.losses
    cm, cv, ca = losses.coulomb_torque, losses.viscous_coeff, losses.aero_coeff
    cal = scenario.alternator.load_coeff
    eff = scenario.alternator.efficiency
    cfg = scenario.integrator
    dt = cfg.dt
    stride = cfg.output_stride
    prof = scenario.shaft_profile
    t0 = prof.t_start

    if cfg.t_max is None:
        n_total = None
    else:
        n_total = max(1, round((cfg.t_max - t0) / dt))

    bank = scenario.bank
    bank_energy = bank.energy
    dump_energy = bank.dump_energy
    events: list[ChargeEvent] = []

    # shaft command on the step grid, fetched in chunks; constant past the
    # profile end
    prof_times = prof.trace.times
    prof_omegas = prof.trace.omegas
    tail_value = float(prof_omegas[-1])
    n_profile = int(math.ceil((prof.t_end - t0) / dt)) + 1

    chunk_base = 0
    chunk: list[float] = []

    def shaft_at(j: int) -> float:
        nonlocal chunk_base, chunk
        if j > n_profile:
            return tail_value
        if not chunk or not (chunk_base <= j < chunk_base + len(chunk)):
            chunk_base = j
            ts = t0 + dt * np.arange(chunk_base, chunk_base + _CHUNK, dtype=float)
            chunk = np.interp(ts, prof_times, prof_omegas).tolist()
        return chunk[j - chunk_base]

    om = scenario.omega_flywheel_initial
    om_start = om
    e_fric = e_aero = e_alt = 0.0
    input_work = 0.0
    peak = om

    engaged0 = clutch_engaged(shaft_at(0), om, scenario.gear, eps)
    phase = _initial_phase(om, engaged0, threshold)

    def make_ledger(om_now: float) -> EnergyLedger:
        return EnergyLedger(
            input_work=input_work,
            flywheel_ke_delta=0.5 * I * (om_now * om_now - om_start * om_start),
            loss_friction=e_fric,
            loss_aero=e_aero,
            loss_electrical=(1.0 - eff) * e_alt,
            delivered_electrical=eff * e_alt,
        )

    trajectory = [RbsState(t=t0, omega_shaft=shaft_at(0), omega_flywheel=om,
                           engaged=engaged0, phase=phase, ledger=make_ledger(om))]
    timeline: list[PhaseSpan] = []
    span_phase = phase
    span_start = t0

    i = 0
    while n_total is None or i < n_total:
        if i >= cfg.max_steps:
            raise NumericFault(
                f"no stop reached within {cfg.max_steps} steps; set t_max "
                "for non-dissipative scenarios")
        t1 = t0 + (i + 1) * dt
        drv_next = ratio * shaft_at(i + 1)
        om1, engaged, wf, wa, wl, win = _advance(
            om, drv_next, dt, I, inv_i, cm, cv, ca, cal, eps)
        if not math.isfinite(om1) or om1 > 1e15:
            raise NumericFault(f"angular velocity diverged at t={t1:.6g}")
        e_fric += wf
        e_aero += wa
        e_alt += wl
        input_work += win
        if om1 > peak:
            peak = om1

        delivered_step = eff * wl
        if delivered_step > 0.0:
            bank_energy += delivered_step
            if bank_energy >= dump_energy:
                events.append(ChargeEvent(t=t1, energy_dumped=bank_energy))
                bank_energy = 0.0

        new_phase = _classify(om1, om1 > om, engaged, phase, threshold)
        if new_phase is not phase:
            boundary = t1
            if new_phase is Phase.STOPPED and om > om1:
                # refine the stop crossing inside the step
                boundary = t1 - dt + dt * (om - threshold) / (om - om1)
            timeline.append(PhaseSpan(span_phase, span_start, boundary))
            span_phase = new_phase
            span_start = boundary
            phase = new_phase

        om = om1
        i += 1
        stopped = phase is Phase.STOPPED
        if i % stride == 0 or stopped or (n_total is not None and i == n_total):
            trajectory.append(RbsState(
                t=t1, omega_shaft=shaft_at(i), omega_flywheel=om,
                engaged=engaged, phase=phase, ledger=make_ledger(om)))
        if stopped:
            break

    t_final = t0 + i * dt
    timeline.append(PhaseSpan(span_phase, span_start, t_final))
    bank_final = UltracapBank(
        capacitance=bank.capacitance,
        voltage=math.sqrt(2.0 * bank_energy / bank.capacitance),
        v_max=bank.v_max, v_dump=bank.v_dump)
    return SimulationResult(
        trajectory=trajectory,
        ledger=make_ledger(om),
        phase_timeline=timeline,
        charge_events=events,
        bank_final=bank_final,
        omega_peak=peak,
        omega_final=om,
        t_final=t_final,
    )


def phase_of(omega_flywheel: float, engaged: bool, *, rising: bool,
             energized: bool, stop_threshold: float = 0.01) -> Phase:
    """Classify one sample given its context.

    energized: whether the flywheel has ever reached the stop threshold
    during the run; rising: whether its speed increased over the last
    step.
    """
    if omega_flywheel < 0.0:
        raise ValueError("angular velocity must be non-negative")
    prev = Phase.ENGAGED if energized else Phase.IDLE
    return _classify(omega_flywheel, rising, engaged, prev, stop_threshold)
