"""Core quantities shared by the whole package.

Unit conventions: everything is SI internally — seconds, rad/s, kg,
metres, joules. Field units (rpm, inches) are converted at I/O
boundaries only, via the explicit helpers below.

All types in this module are immutable values after construction and can
be shared freely between threads.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "AnnularRim",
    "CalibrationError",
    "ConfigError",
    "DirectInertia",
    "EnergyLedger",
    "FlywheelSpec",
    "NumericFault",
    "Phase",
    "SpeedTrace",
    "UniformDisk",
    "inertia",
    "kinetic_energy",
    "legal_transition",
    "rad_s_to_rpm",
    "required_torque",
    "rpm_to_rad_s",
    "validate_phase_sequence",
]

_RPM_TO_RAD_S = math.pi / 30.0


class ConfigError(ValueError):
    """Invalid configuration, file, or option. CLI maps this to exit code 2."""


class NumericFault(ArithmeticError):
    """Integration produced non-finite values or failed to terminate.

    CLI maps this to exit code 3.
    """


class CalibrationError(RuntimeError):
    """Loss calibration could not bracket or converge to its target."""


def rpm_to_rad_s(rpm: float) -> float:
    """Convert revolutions per minute to rad/s."""
    return rpm * _RPM_TO_RAD_S


def rad_s_to_rpm(omega: float) -> float:
    """Convert rad/s to revolutions per minute (inverse of rpm_to_rad_s)."""
    return omega / _RPM_TO_RAD_S


def _readonly(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SpeedTrace:
    """Sampled angular velocity versus time.

    Between samples the trace is read as piecewise linear. Times must be
    strictly increasing, speeds non-negative, and at least two samples
    are required. Sampling may be irregular; all quadrature downstream
    handles uneven steps.
    """

    times: np.ndarray
    omegas: np.ndarray

    def __post_init__(self):
        t = _readonly(self.times, "times")
        w = _readonly(self.omegas, "omegas")
        if t.size != w.size:
            raise ValueError("times and omegas must have equal length")
        if t.size < 2:
            raise ValueError("a speed trace needs at least 2 samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(w))):
            raise ValueError("trace samples must be finite")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("trace times must be strictly increasing")
        if np.any(w < 0.0):
            raise ValueError("angular velocity must be non-negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "omegas", w)

    @classmethod
    def from_pairs(cls, pairs) -> "SpeedTrace":
        """Build a trace from an iterable of (t_s, omega_rad_s) pairs."""
        pairs = list(pairs)
        return cls(np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]))

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    def value_at(self, t: float) -> float:
        """Piecewise-linear interpolation, clamped to the end samples."""
        return float(np.interp(t, self.times, self.omegas))


@dataclass(frozen=True)
class UniformDisk:
    """Solid disk of uniform thickness: mass (kg) and outer radius (m)."""

    mass: float
    radius: float

    def __post_init__(self):
        if not (self.mass > 0.0 and self.radius > 0.0):
            raise ValueError("disk mass and radius must be positive")


@dataclass(frozen=True)
class AnnularRim:
    """Thick-rim (hollow cylinder) flywheel described by material and geometry.

    density kg/m^3, radii and thickness in metres, r_inner < r_outer.
    """

    density: float
    r_outer: float
    r_inner: float
    thickness: float

    def __post_init__(self):
        if not (self.density > 0.0 and self.r_outer > 0.0 and self.r_inner > 0.0
                and self.thickness > 0.0):
            raise ValueError("rim density and dimensions must be positive")
        if not self.r_inner < self.r_outer:
            raise ValueError("r_inner must be smaller than r_outer")

    @property
    def mass(self) -> float:
        return self.density * math.pi * (self.r_outer**2 - self.r_inner**2) * self.thickness


@dataclass(frozen=True)
class DirectInertia:
    """Flywheel given directly by its mass moment of inertia (kg*m^2)."""

    inertia: float

    def __post_init__(self):
        if not self.inertia > 0.0:
            raise ValueError("inertia must be positive")


FlywheelSpec = UniformDisk | AnnularRim | DirectInertia


def inertia(spec: FlywheelSpec) -> float:
    """Mass moment of inertia (kg*m^2) of a flywheel specification.

    Uniform disk: I = M*R^2/2. Annular rim: I = M*(r_o^2 + r_i^2)/2 with
    M from density and geometry (thick-walled cylinder). DirectInertia
    passes through unchanged.
    """
    if isinstance(spec, UniformDisk):
        return 0.5 * spec.mass * spec.radius**2
    if isinstance(spec, AnnularRim):
        return 0.5 * spec.mass * (spec.r_outer**2 + spec.r_inner**2)
    if isinstance(spec, DirectInertia):
        return spec.inertia
    raise TypeError(f"not a flywheel specification: {spec!r}")


def kinetic_energy(moment_of_inertia: float, omega: float) -> float:
    """Rotational kinetic energy I*omega^2/2 in joules."""
    if not moment_of_inertia > 0.0:
        raise ValueError("moment of inertia must be positive")
    if omega < 0.0:
        raise ValueError("angular velocity must be non-negative")
    return 0.5 * moment_of_inertia * omega * omega


def required_torque(moment_of_inertia: float, alpha: float) -> float:
    """Torque I*alpha (N*m) to impose angular acceleration alpha (rad/s^2)."""
    if not moment_of_inertia > 0.0:
        raise ValueError("moment of inertia must be positive")
    return moment_of_inertia * alpha


class Phase(Enum):
    """Drivetrain phase over one energize/release run.

    IDLE          flywheel at rest, not yet energized
    ENGAGED       clutch closed, flywheel speed climbing
    SYNCHRONIZED  clutch closed after the flywheel first peaks
    FREE_SPIN     clutch open, flywheel releasing stored energy
    STOPPED       flywheel speed below the stop threshold
    """

    IDLE = "idle"
    ENGAGED = "engaged"
    SYNCHRONIZED = "synchronized"
    FREE_SPIN = "free_spin"
    STOPPED = "stopped"


_PHASE_RANK = {
    Phase.IDLE: 0,
    Phase.ENGAGED: 1,
    Phase.SYNCHRONIZED: 2,
    Phase.FREE_SPIN: 3,
    Phase.STOPPED: 4,
}


def legal_transition(a: Phase, b: Phase) -> bool:
    """True if phase b may directly follow phase a.

    Phases advance along IDLE -> ENGAGED -> SYNCHRONIZED -> FREE_SPIN ->
    STOPPED; SYNCHRONIZED is optional (ENGAGED -> FREE_SPIN is legal),
    and a phase may persist.
    """
    ra, rb = _PHASE_RANK[a], _PHASE_RANK[b]
    if rb == ra or rb == ra + 1:
        return True
    return a is Phase.ENGAGED and b is Phase.FREE_SPIN


def validate_phase_sequence(phases) -> None:
    """Raise ValueError if consecutive phases contain an illegal transition."""
    phases = list(phases)
    for a, b in zip(phases, phases[1:]):
        if not legal_transition(a, b):
            raise ValueError(f"illegal phase transition {a.value} -> {b.value}")


@dataclass(frozen=True)
class EnergyLedger:
    """Energy accounting for one simulation or analysis run, in joules.

    The ledger closes when input work equals the flywheel kinetic-energy
    change plus all losses plus delivered electrical energy. losses must
    be non-negative; the change in stored energy may have either sign.
    """

    input_work: float = 0.0
    flywheel_ke_delta: float = 0.0
    loss_friction: float = 0.0
    loss_aero: float = 0.0
    loss_electrical: float = 0.0
    delivered_electrical: float = 0.0

    def __post_init__(self):
        fields = (self.input_work, self.flywheel_ke_delta, self.loss_friction,
                  self.loss_aero, self.loss_electrical, self.delivered_electrical)
        if not all(math.isfinite(v) for v in fields):
            raise ValueError("ledger entries must be finite")
        if min(self.loss_friction, self.loss_aero, self.loss_electrical) < 0.0:
            raise ValueError("losses must be non-negative")

    @property
    def total_losses(self) -> float:
        return self.loss_friction + self.loss_aero + self.loss_electrical

    def residual(self) -> float:
        """Closure error: input - (stored delta + losses + delivered)."""
        return self.input_work - (self.flywheel_ke_delta + self.total_losses
                                  + self.delivered_electrical)

    def relative_residual(self) -> float:
        """|residual| normalised by max(1 J, |input work|)."""
        return abs(self.residual()) / max(1.0, abs(self.input_work))
