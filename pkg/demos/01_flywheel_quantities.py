"""Flywheel fundamentals: geometry, inertia, stored energy, spin-up torque.

Walks the three flywheel descriptions through the same questions: how much
rotational inertia, how much energy at a given speed, and what torque a
target spin-up needs.
"""

from rbsim import (AnnularRim, DirectInertia, UniformDisk, inertia,
                   kinetic_energy, rad_s_to_rpm, required_torque,
                   rpm_to_rad_s)

print("=== Flywheel descriptions ===")
disk = UniformDisk(mass=2.0, radius=0.3)
rim = AnnularRim(density=2700.0, r_outer=0.14605, r_inner=0.10,
                 thickness=0.01905)
direct = DirectInertia(inertia=0.75)

for name, spec in [("uniform disk 2 kg x 0.3 m", disk),
                   ("aluminium rim 11.5 in OD x 0.75 in", rim),
                   ("direct 0.75 kg*m^2", direct)]:
    print(f"  {name:36s} I = {inertia(spec):8.5f} kg*m^2")
print(f"  (rim mass from geometry: {rim.mass:.3f} kg)")

print("\n=== Stored energy versus speed ===")
I_rim = inertia(rim)
for rpm in (100, 300, 500, 1000, 2000):
    w = rpm_to_rad_s(rpm)
    print(f"  {rpm:5d} rpm = {w:8.3f} rad/s -> {kinetic_energy(I_rim, w):9.2f} J")
print("  doubling the speed quadruples the stored energy")

print("\n=== Torque to spin up ===")
w_target = rpm_to_rad_s(500.0)
for seconds in (2.0, 5.0, 10.0):
    alpha = w_target / seconds
    tq = required_torque(I_rim, alpha)
    print(f"  0 -> 500 rpm in {seconds:4.1f} s needs {tq:7.4f} N*m "
          f"(alpha = {alpha:6.2f} rad/s^2)")

print("\n=== Unit round trip ===")
w = rpm_to_rad_s(437.5)
print(f"  437.5 rpm -> {w:.6f} rad/s -> {rad_s_to_rpm(w):.6f} rpm")
