"""Calibrating the loss model against a measured free-spin period.

The only scalar the bench log gives per run is how long the wheel coasted
after release. One loss coefficient can be identified from it (searching
several at once would be underdetermined): bisection adjusts the viscous
coefficient until the simulated free-spin duration matches the target.
"""

from rbsim import (bench_case, calibrate_losses, free_spin_duration,
                   simulate)
from dataclasses import replace

scenario = bench_case(2)
baseline = free_spin_duration(simulate(scenario))
print(f"baseline free-spin duration: {baseline:.2f} s "
      f"(viscous_coeff = {scenario.losses.viscous_coeff})")

target = 29.3  # average measured free-spin period for this case
print(f"\ncalibrating viscous_coeff so the free spin lasts {target} s ...")
model = calibrate_losses(target, scenario, bracket=(0.0, 0.01),
                         duration_tol=0.01)
print(f"  calibrated viscous_coeff = {model.viscous_coeff:.6f} N*m*s/rad")

calibrated = replace(scenario, losses=model)
achieved = free_spin_duration(simulate(calibrated))
print(f"  achieved duration: {achieved:.3f} s")

print("\nre-running the calibration against its own output "
      "(should be a fixed point):")
model2 = calibrate_losses(achieved, calibrated, bracket=(0.0, 0.01),
                          duration_tol=0.01)
drift = abs(model2.viscous_coeff - model.viscous_coeff)
print(f"  coefficient drift: {drift:.2e}")

print("\nnote: the calibrated model reproduces the measured duration, not"
      "\nthe measured joule values; those depend on the prototype's exact"
      "\ninertia, which is not derivable from the published dimensions.")
