"""Regenerative-energy source models: wind rotors and road vehicles.

Wind: extractable power is rho*A*V^3*c_b/2 with the Betz coefficient
c_b = (1 + Vr)(1 - Vr^2)/2, Vr = V_out/V_in, bounded by 16/27. The
recoverable energy over an interval integrates the cubed wind speed
(piecewise-linear between samples) scaled by a recovery efficiency eta,
with speeds below the cut-in velocity contributing nothing.

Vehicle: braking/coasting recovery accounts the released kinetic and
potential energy minus aerodynamic drag (quadratic in speed) and rolling
resistance (proportional to speed), scaled by eta. Drag and rolling laws
are conventional road-load models; elevation changes are signed so that
descending releases energy.
"""

from dataclasses import dataclass

import numpy as np

from .core import EnergyLedger, _readonly

__all__ = [
    "BETZ_LIMIT",
    "CycleRecovery",
    "DriveCycle",
    "VehicleSpec",
    "WindSite",
    "WindTrace",
    "betz_coefficient",
    "recoverable_wind_energy",
    "regen_energy_over_cycle",
    "vehicle_kinetic_energy",
    "vehicle_potential_delta",
    "wind_power",
]

BETZ_LIMIT = 16.0 / 27.0


@dataclass(frozen=True)
class WindSite:
    """Rotor site: air density (kg/m^3), swept area (m^2), cut-in wind
    velocity (m/s), and recovery efficiency eta in (0, 1]."""

    rho: float = 1.225
    area: float = 10.0
    cut_in_velocity: float = 0.0
    eta: float = 0.9

    def __post_init__(self):
        if not (self.rho > 0.0 and self.area > 0.0):
            raise ValueError("air density and swept area must be positive")
        if self.cut_in_velocity < 0.0:
            raise ValueError("cut-in velocity must be non-negative")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must be in (0, 1]")


@dataclass(frozen=True, eq=False)
class WindTrace:
    """Sampled wind velocity versus time, piecewise linear between samples."""

    times: np.ndarray
    velocities: np.ndarray

    def __post_init__(self):
        t = _readonly(self.times, "times")
        v = _readonly(self.velocities, "velocities")
        if t.size != v.size or t.size < 2:
            raise ValueError("a wind trace needs >= 2 (t, v) samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise ValueError("wind samples must be finite")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if np.any(v < 0.0):
            raise ValueError("wind velocity must be non-negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "velocities", v)

    @classmethod
    def from_pairs(cls, pairs) -> "WindTrace":
        pairs = list(pairs)
        return cls(np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]))

    @property
    def span(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])


def betz_coefficient(v_ratio: float) -> float:
    """Betz coefficient (1 + Vr)(1 - Vr^2)/2 for Vr = V_out/V_in in [0, 1].

    Maximal at Vr = 1/3 where it equals 16/27 (about 0.5926).
    """
    if not 0.0 <= v_ratio <= 1.0:
        raise ValueError("velocity ratio must lie in [0, 1]")
    return 0.5 * (1.0 + v_ratio) * (1.0 - v_ratio * v_ratio)


def wind_power(site: WindSite, v: float, c_b: float) -> float:
    """Extractable wind power rho*A*v^3*c_b/2 in watts."""
    if v < 0.0:
        raise ValueError("wind speed must be non-negative")
    if not 0.0 <= c_b <= BETZ_LIMIT + 1e-12:
        raise ValueError(f"Betz coefficient must lie in [0, {BETZ_LIMIT:.6f}]")
    return 0.5 * site.rho * site.area * v**3 * c_b


def _cubed_segment(h: float, v0: float, v1: float) -> float:
    # exact integral of (linear v)^3 over a segment of length h: Simpson with
    # the true midpoint integrates cubics exactly
    vm = 0.5 * (v0 + v1)
    return h / 6.0 * (v0**3 + 4.0 * vm**3 + v1**3)


def _gated_cubed_segment(t0: float, t1: float, v0: float, v1: float,
                         cut_in: float) -> float:
    """Integral of v^3 over [t0, t1] counting only the part with v >= cut_in."""
    if v0 < cut_in and v1 < cut_in:
        return 0.0
    if v0 >= cut_in and v1 >= cut_in:
        return _cubed_segment(t1 - t0, v0, v1)
    # exactly one crossing of v = cut_in on the linear segment
    tc = t0 + (cut_in - v0) / (v1 - v0) * (t1 - t0)
    if v0 >= cut_in:
        return _cubed_segment(tc - t0, v0, cut_in)
    return _cubed_segment(t1 - tc, cut_in, v1)


def recoverable_wind_energy(site: WindSite, trace: WindTrace,
                            interval: tuple[float, float] | None = None,
                            c_b: float = BETZ_LIMIT) -> float:
    """Recoverable regenerative energy (J) over an interval of a wind trace.

    Computes eta*c_b*rho*A/2 times the integral of v(t)^3 on the
    piecewise-linear trace, gated so times with v below the cut-in
    velocity contribute zero. The interval defaults to the whole trace
    and must lie inside its span.
    """
    if not 0.0 <= c_b <= BETZ_LIMIT + 1e-12:
        raise ValueError(f"Betz coefficient must lie in [0, {BETZ_LIMIT:.6f}]")
    lo, hi = trace.span
    if interval is None:
        a, b = lo, hi
    else:
        a, b = float(interval[0]), float(interval[1])
        if not (lo <= a < b <= hi):
            raise ValueError(
                f"interval [{a}, {b}] outside trace span [{lo}, {hi}]")
    times = trace.times
    vels = trace.velocities
    inner = (times > a) & (times < b)
    ts = np.concatenate(([a], times[inner], [b]))
    vs = np.concatenate(([np.interp(a, times, vels)], vels[inner],
                         [np.interp(b, times, vels)]))
    total = 0.0
    cut = site.cut_in_velocity
    for k in range(ts.size - 1):
        total += _gated_cubed_segment(float(ts[k]), float(ts[k + 1]),
                                      float(vs[k]), float(vs[k + 1]), cut)
    return 0.5 * site.eta * c_b * site.rho * site.area * total


@dataclass(frozen=True)
class VehicleSpec:
    """Road vehicle for drive-cycle energy accounting.

    mass includes payload; drag_area is Cd*A_frontal (m^2);
    rolling_coeff is the dimensionless rolling-resistance coefficient.
    """

    mass: float
    g: float = 9.81
    drag_area: float = 0.0
    air_density: float = 1.225
    rolling_coeff: float = 0.0

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ValueError("vehicle mass must be positive")
        if min(self.g, self.drag_area, self.air_density, self.rolling_coeff) < 0.0:
            raise ValueError("coefficients must be non-negative")


@dataclass(frozen=True, eq=False)
class DriveCycle:
    """Sampled vehicle speed and road elevation versus time."""

    times: np.ndarray
    velocities: np.ndarray
    elevations: np.ndarray

    def __post_init__(self):
        t = _readonly(self.times, "times")
        v = _readonly(self.velocities, "velocities")
        e = _readonly(self.elevations, "elevations")
        if not (t.size == v.size == e.size) or t.size < 2:
            raise ValueError("a drive cycle needs >= 2 (t, v, elevation) samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))
                and np.all(np.isfinite(e))):
            raise ValueError("cycle samples must be finite")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if np.any(v < 0.0):
            raise ValueError("vehicle speed must be non-negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "velocities", v)
        object.__setattr__(self, "elevations", e)

    @classmethod
    def flat(cls, times, velocities) -> "DriveCycle":
        times = np.asarray(times, dtype=float)
        return cls(times, np.asarray(velocities, dtype=float),
                   np.zeros_like(times))


def vehicle_kinetic_energy(spec: VehicleSpec, v: float) -> float:
    """Translational kinetic energy M*v^2/2 in joules."""
    if v < 0.0:
        raise ValueError("speed must be non-negative")
    return 0.5 * spec.mass * v * v


def vehicle_potential_delta(spec: VehicleSpec, delta_y: float) -> float:
    """Energy released by a signed elevation drop delta_y (m).

    Positive delta_y (descending) releases M*g*delta_y joules; negative
    (climbing) consumes it.
    """
    return spec.mass * spec.g * delta_y


@dataclass(frozen=True)
class CycleRecovery:
    """Recovery accounting for one drive cycle.

    The ledger books, over the deceleration segments where recovery is
    active: input_work = gross released mechanical energy,
    loss_aero/loss_friction = drag and rolling dissipation,
    delivered_electrical = eta * usable, loss_electrical = the
    conversion remainder. delta_ke_total / delta_pe_total cover the
    whole cycle ends (for closed-loop checks).
    """

    ledger: EnergyLedger
    delta_ke_total: float
    delta_pe_total: float

    @property
    def recoverable(self) -> float:
        return self.ledger.delivered_electrical

    @property
    def gross_released(self) -> float:
        return self.ledger.input_work


def regen_energy_over_cycle(spec: VehicleSpec, cycle: DriveCycle,
                            eta: float = 0.9) -> CycleRecovery:
    """Recoverable braking energy over a drive cycle.

    Per segment the released mechanical power is -(d/dt)(KE + PE); where
    it exceeds the drag and rolling losses, eta times the excess is
    recoverable. Segments where the vehicle accelerates, or where losses
    swallow the release, recover nothing and book nothing.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must be in (0, 1]")
    t = cycle.times
    v = cycle.velocities
    y = cycle.elevations
    m = spec.mass
    half_rho_cda = 0.5 * spec.air_density * spec.drag_area
    roll = spec.rolling_coeff * m * spec.g

    input_work = aero = tire = usable = 0.0
    for k in range(t.size - 1):
        h = float(t[k + 1] - t[k])
        v0, v1 = float(v[k]), float(v[k + 1])
        released = (0.5 * m * (v0 * v0 - v1 * v1)
                    + m * spec.g * float(y[k] - y[k + 1]))
        if released <= 0.0:
            continue
        a_seg = half_rho_cda * _cubed_segment(h, v0, v1)
        r_seg = roll * 0.5 * (v0 + v1) * h
        u_seg = released - a_seg - r_seg
        if u_seg <= 0.0:
            continue
        input_work += released
        aero += a_seg
        tire += r_seg
        usable += u_seg

    ledger = EnergyLedger(
        input_work=input_work,
        flywheel_ke_delta=0.0,
        loss_friction=tire,
        loss_aero=aero,
        loss_electrical=(1.0 - eta) * usable,
        delivered_electrical=eta * usable,
    )
    dke = 0.5 * m * float(v[-1] ** 2 - v[0] ** 2)
    dpe = m * spec.g * float(y[-1] - y[0])
    return CycleRecovery(ledger=ledger, delta_ke_total=dke, delta_pe_total=dpe)
