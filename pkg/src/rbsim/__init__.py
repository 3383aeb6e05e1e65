"""Flywheel regenerative braking toolkit.

Simulates the source -> overrunning clutch -> speed-boost gear ->
flywheel/alternator -> ultracapacitor chain, models wind and vehicle
regenerative-energy sources, and analyses recorded speed traces down to
per-case energy summaries.
"""

from .analysis import (BenchCaseRow, CaseSummary, PolyFit, aggregate_cases,
                       bench_table_path, fit_polynomial, integrate,
                       net_recovered_energy, phase_integral_estimate,
                       round_half_up, squared_speed_estimate)
from .core import (AnnularRim, CalibrationError, ConfigError, DirectInertia,
                   EnergyLedger, FlywheelSpec, NumericFault, Phase, SpeedTrace,
                   UniformDisk, inertia, kinetic_energy, legal_transition,
                   rad_s_to_rpm, required_torque, rpm_to_rad_s,
                   validate_phase_sequence)
from .drivetrain import (GearTrain, IntegratorSettings, LossModel, PhaseSpan,
                         RbsState, Scenario, ShaftProfile, SimulationResult,
                         clutch_engaged, loss_torque, phase_of, simulate, step)
from .electrical import (Alternator, ChargeEvent, UltracapBank,
                         alternator_step, charge_step)
from .experiments import (SweepAxis, SweepRow, SweepSpec, apply_override,
                          bench_case, calibrate_losses, free_spin_duration,
                          run_sweep)
from .sources import (BETZ_LIMIT, CycleRecovery, DriveCycle, VehicleSpec,
                      WindSite, WindTrace, betz_coefficient,
                      recoverable_wind_energy, regen_energy_over_cycle,
                      vehicle_kinetic_energy, vehicle_potential_delta,
                      wind_power)

__version__ = "0.1.0"
