"""One bench-top run end to end: phases, speeds, the energy ledger, and the
charge controller's dump events.

Simulates bench case 2 (flywheel peaks at 500 rpm, 5 s braking ramp),
prints the phase timeline and energy accounting, and saves the speed
curves as a PNG plus the trajectory as CSV under demos/out/.
"""

from pathlib import Path

from rbsim import bench_case, free_spin_duration, rad_s_to_rpm, simulate

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

scenario = bench_case(2)
result = simulate(scenario)

print("=== Phase timeline ===")
for span in result.phase_timeline:
    print(f"  {span.phase.value:13s} {span.t_start:8.3f} s -> "
          f"{span.t_end:8.3f} s")
print(f"  free-spin duration: {free_spin_duration(result):.2f} s")
print(f"  peak flywheel speed: {rad_s_to_rpm(result.omega_peak):.1f} rpm")

print("\n=== Energy ledger ===")
led = result.ledger
rows = [("input work", led.input_work),
        ("flywheel KE change", led.flywheel_ke_delta),
        ("friction loss", led.loss_friction),
        ("aero loss", led.loss_aero),
        ("electrical loss", led.loss_electrical),
        ("delivered electrical", led.delivered_electrical)]
for name, value in rows:
    print(f"  {name:22s} {value:10.4f} J")
print(f"  closure residual: {led.residual():.3e} J "
      f"(relative {led.relative_residual():.2e})")

print("\n=== Charge controller ===")
for ev in result.charge_events:
    print(f"  t = {ev.t:7.3f} s  dumped {ev.energy_dumped:7.4f} J "
          f"to {ev.destination}")
print(f"  residual bank energy: {result.bank_final.energy:.4f} J "
      f"({result.bank_final.voltage:.3f} V)")

# trajectory CSV
traj_csv = out_dir / "bench_case2_trajectory.csv"
with open(traj_csv, "w") as fh:
    fh.write("t_s,omega_shaft_rad_s,omega_flywheel_rad_s,phase\n")
    for s in result.trajectory:
        fh.write(f"{s.t},{s.omega_shaft},{s.omega_flywheel},{s.phase.value}\n")
print(f"\nwrote {traj_csv}")

# speed plot
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

ts = [s.t for s in result.trajectory]
plt.figure(figsize=(8, 4.5))
plt.plot(ts, [s.omega_shaft * scenario.gear.ratio for s in result.trajectory],
         label="boosted shaft command (ratio x shaft)", lw=1.2)
plt.plot(ts, [s.omega_flywheel for s in result.trajectory],
         label="flywheel", lw=1.8)
for span in result.phase_timeline[1:]:
    plt.axvline(span.t_start, color="grey", lw=0.6, ls=":")
plt.xlabel("time (s)")
plt.ylabel("angular velocity (rad/s)")
plt.title("Bench case 2: engage, synchronize, release, free spin")
plt.legend()
plt.tight_layout()
png = out_dir / "bench_case2_speeds.png"
plt.savefig(png, dpi=120)
print(f"wrote {png}")
