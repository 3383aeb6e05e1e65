"""Scenario construction, loss calibration, and design sweeps.

bench_case() builds the three canonical bench-top runs: a rise-hold-brake
shaft profile whose boosted hold speed equals the target peak flywheel
speed, the prototype-like rim flywheel, and loss defaults that free-spin
for roughly half a minute. calibrate_losses() inverts a measured
free-spin duration into a loss coefficient by bisection. run_sweep()
evaluates a scenario grid cell by cell and ranks the outcomes.
"""

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .core import AnnularRim, CalibrationError, ConfigError, Phase, inertia
from .drivetrain import (GearTrain, IntegratorSettings, LossModel, Scenario,
                         ShaftProfile, SimulationResult, simulate)
from .electrical import Alternator, UltracapBank

__all__ = [
    "SweepAxis",
    "SweepRow",
    "SweepSpec",
    "apply_override",
    "bench_case",
    "calibrate_losses",
    "free_spin_duration",
    "run_sweep",
]

# Prototype-like rim: aluminium, 11.5 in outside diameter, 0.75 in thick.
# The hub bore is not documented anywhere usable, so the inner radius is an
# assumption; absolute bench energies are therefore never asserted.
PROTOTYPE_FLYWHEEL = AnnularRim(density=2700.0, r_outer=0.14605,
                                r_inner=0.10, thickness=0.01905)
# Coulomb-dominant defaults keep the decay at peak speed well below the
# bench braking ramps, so the wheel releases at its peak and free-spins
# for roughly half a minute from 500 rpm.
DEFAULT_LOSSES = LossModel(coulomb_torque=0.032, viscous_coeff=0.0006,
                           aero_coeff=0.0)
DEFAULT_ALTERNATOR = Alternator(efficiency=0.85, load_coeff=0.0003)
DEFAULT_BANK = UltracapBank(capacitance=0.5, voltage=0.0, v_max=4.0, v_dump=3.0)

# (peak flywheel speed rpm, braking period s) per bench case
_BENCH_CASES = {
    1: (300.0, 10.0),
    2: (500.0, 5.0),
    3: (500.0, 10.0),
}

_RPM_TO_RAD_S = math.pi / 30.0


def bench_case(case_id: int, *, rise_s: float = 5.0, hold_s: float = 5.0,
               dt: float = 1e-3) -> Scenario:
    """Scenario for one of the three bench cases (1, 2, or 3).

    The shaft holds at omega_max/ratio so the boosted flywheel peaks at
    the case's rated speed, then brakes to rest over the case's braking
    period. Profile knots land on the dt grid so phase boundaries are
    crisp.
    """
    if case_id not in _BENCH_CASES:
        raise ValueError(f"unknown bench case {case_id!r}; expected 1, 2, or 3")
    omega_max_rpm, braking_s = _BENCH_CASES[case_id]
    gear = GearTrain(ratio=4.0)
    omega_hold = omega_max_rpm * _RPM_TO_RAD_S / gear.ratio
    return Scenario(
        flywheel=PROTOTYPE_FLYWHEEL,
        gear=gear,
        losses=DEFAULT_LOSSES,
        alternator=DEFAULT_ALTERNATOR,
        bank=DEFAULT_BANK,
        shaft_profile=ShaftProfile.ramp(omega_hold, rise_s, hold_s, braking_s),
        integrator=IntegratorSettings(dt=dt, output_stride=100),
    )


def free_spin_duration(result: SimulationResult) -> float:
    """Seconds from clutch release to stop, from a simulation's timeline.

    Returns +inf when the run ended before the wheel stopped; raises if
    the run never free-spun at all.
    """
    fs_start = None
    for span in result.phase_timeline:
        if span.phase is Phase.FREE_SPIN:
            fs_start = span.t_start
            break
    if fs_start is None:
        raise ValueError("run contains no free-spin phase")
    for span in result.phase_timeline:
        if span.phase is Phase.STOPPED:
            return span.t_start - fs_start
    return math.inf


def calibrate_losses(target_free_spin_s: float, scenario: Scenario,
                     bracket: tuple[float, float],
                     coefficient: str = "viscous_coeff",
                     duration_tol: float = 0.1,
                     max_iter: int = 80) -> LossModel:
    """Find a loss coefficient whose simulated free-spin duration matches a
    target, by bisection over the bracket.

    Only one coefficient is searched (default viscous); identifying
    several coefficients from a single duration would be
    underdetermined. Duration decreases monotonically in the searched
    coefficient, so the bracket's durations must straddle the target.
    """
    if target_free_spin_s <= 0.0:
        raise ValueError("target free-spin duration must be positive")
    if coefficient not in ("coulomb_torque", "viscous_coeff", "aero_coeff"):
        raise ValueError(f"unknown loss coefficient {coefficient!r}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 <= lo < hi:
        raise ValueError("bracket must satisfy 0 <= lo < hi")

    def duration_at(c: float) -> float:
        sc = replace(scenario, losses=replace(scenario.losses, **{coefficient: c}))
        return free_spin_duration(simulate(sc))

    d_lo = duration_at(lo)
    d_hi = duration_at(hi)
    if abs(d_lo - target_free_spin_s) <= duration_tol:
        return replace(scenario.losses, **{coefficient: lo})
    if abs(d_hi - target_free_spin_s) <= duration_tol:
        return replace(scenario.losses, **{coefficient: hi})
    if not d_hi < target_free_spin_s < d_lo:
        raise CalibrationError(
            f"target {target_free_spin_s} s not bracketed: duration is "
            f"{d_lo} s at {coefficient}={lo} and {d_hi} s at {coefficient}={hi}")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        d_mid = duration_at(mid)
        if abs(d_mid - target_free_spin_s) <= duration_tol:
            return replace(scenario.losses, **{coefficient: mid})
        if d_mid > target_free_spin_s:
            lo = mid
        else:
            hi = mid
    raise CalibrationError(
        f"no convergence within {max_iter} bisection steps "
        f"(bracket [{lo}, {hi}], tol {duration_tol} s)")


@dataclass(frozen=True)
class SweepAxis:
    """One sweep dimension: a dotted path into Scenario and its values."""

    path: str
    values: tuple

    def __post_init__(self):
        if not self.path:
            raise ValueError("axis path must be non-empty")
        if len(self.values) == 0:
            raise ValueError(f"axis {self.path!r} has no values")


@dataclass(frozen=True)
class SweepSpec:
    """Full-factorial sweep: axes plus the objective to rank by.

    Objectives: "net_recovered_energy" (kinetic energy released between
    the peak and the final speed) or "delivered_electrical" (ledger
    field). The cell cap guards against runaway grids.
    """

    axes: tuple[SweepAxis, ...]
    objective: str = "net_recovered_energy"
    cell_cap: int = 100_000

    def __post_init__(self):
        if not self.axes:
            raise ValueError("a sweep needs at least one axis")
        if self.objective not in ("net_recovered_energy", "delivered_electrical"):
            raise ValueError(f"unknown objective {self.objective!r}")

    @property
    def cell_count(self) -> int:
        count = 1
        for axis in self.axes:
            count *= len(axis.values)
        return count


@dataclass(frozen=True)
class SweepRow:
    """One evaluated sweep cell."""

    settings: tuple
    objective: float


def apply_override(scenario: Scenario, path: str, value):
    """Return a copy of the scenario with one dotted-path field replaced."""
    parts = path.split(".")
    objs = [scenario]
    for name in parts[:-1]:
        cur = objs[-1]
        if not hasattr(cur, name):
            raise ConfigError(f"bad override path {path!r}: no field {name!r}")
        objs.append(getattr(cur, name))
    leaf = parts[-1]
    if not hasattr(objs[-1], leaf):
        raise ConfigError(f"bad override path {path!r}: no field {leaf!r}")
    current = getattr(objs[-1], leaf)
    if isinstance(current, float) and isinstance(value, int):
        value = float(value)
    if current is not None and not isinstance(value, type(current)):
        raise ConfigError(
            f"override {path!r}: expected {type(current).__name__}, "
            f"got {type(value).__name__}")
    rebuilt = replace(objs[-1], **{leaf: value})
    for obj, name in zip(reversed(objs[:-1]), reversed(parts[:-1])):
        rebuilt = replace(obj, **{name: rebuilt})
    return rebuilt


def _objective_value(name: str, scenario: Scenario,
                     result: SimulationResult) -> float:
    if name == "delivered_electrical":
        return result.ledger.delivered_electrical
    moment = inertia(scenario.flywheel)
    return 0.5 * moment * (result.omega_peak**2 - result.omega_final**2)


def evaluate_cell(spec: SweepSpec, base: Scenario, settings: tuple) -> SweepRow:
    """Evaluate one sweep cell independently (used by run_sweep and by
    reproducibility checks)."""
    sc = base
    for axis, value in zip(spec.axes, settings):
        sc = apply_override(sc, axis.path, value)
    result = simulate(sc)
    return SweepRow(settings=settings, objective=_objective_value(
        spec.objective, sc, result))


def run_sweep(spec: SweepSpec, base: Scenario) -> list[SweepRow]:
    """Evaluate the full factorial grid and rank cells by the objective.

    Rows are sorted by objective descending with a lexicographic
    tie-break on the axis values, so the ordering is deterministic.
    Setting RBS_SIM_THREADS > 1 evaluates cells in a thread pool; the
    assembled output is identical either way.
    """
    if spec.cell_count > spec.cell_cap:
        raise ConfigError(
            f"sweep grid has {spec.cell_count} cells, above the cap "
            f"of {spec.cell_cap}")
    cells = list(itertools.product(*(axis.values for axis in spec.axes)))
    try:
        threads = int(os.environ.get("RBS_SIM_THREADS", "1") or "1")
    except ValueError:
        threads = 1
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(
                lambda c: evaluate_cell(spec, base, c), cells))
    else:
        rows = [evaluate_cell(spec, base, c) for c in cells]
    rows.sort(key=lambda r: (-r.objective, r.settings))
    return rows
