"""Shared scenario builders for the test suite."""

import numpy as np

from rbsim import (Alternator, DirectInertia, GearTrain, IntegratorSettings,
                   LossModel, Scenario, ShaftProfile, SpeedTrace, UltracapBank)


def dense_squared_integral(times, omegas, per_seg: int = 257) -> float:
    """Brute-force reference for the integral of the squared
    piecewise-linear reconstruction.

    Each segment is resampled densely, squared pointwise, and
    trapezoid-summed at two resolutions; Richardson extrapolation removes
    the trapezoid's h^2 error, which for a segment-wise quadratic
    integrand leaves only roundoff.
    """
    total = 0.0
    for k in range(len(times) - 1):
        seg_t = times[k:k + 2]
        seg_w = omegas[k:k + 2]

        def trap(n):
            tt = np.linspace(times[k], times[k + 1], n)
            vv = np.interp(tt, seg_t, seg_w)
            return np.trapezoid(vv * vv, tt)

        coarse = trap(per_seg)
        fine = trap(2 * per_seg - 1)
        total += (4.0 * fine - coarse) / 3.0
    return total


def quiet_bank() -> UltracapBank:
    """A bank large enough that tests never trigger dumps by accident."""
    return UltracapBank(capacitance=100.0, voltage=0.0, v_max=100.0,
                        v_dump=90.0)


def zero_profile(span: float = 1.0) -> ShaftProfile:
    return ShaftProfile(SpeedTrace(np.array([0.0, span]), np.array([0.0, 0.0])))


def free_decay_scenario(dt: float, t_max: float, *, viscous: float = 0.1,
                        inertia: float = 1.0, omega0: float = 100.0,
                        coulomb: float = 0.0, aero: float = 0.0,
                        load: float = 0.0, efficiency: float = 1.0,
                        stride: int = 10**9) -> Scenario:
    """Disengaged flywheel decaying from omega0 under the given torques."""
    return Scenario(
        flywheel=DirectInertia(inertia),
        gear=GearTrain(4.0),
        losses=LossModel(coulomb_torque=coulomb, viscous_coeff=viscous,
                         aero_coeff=aero),
        alternator=Alternator(efficiency=efficiency, load_coeff=load),
        bank=quiet_bank(),
        shaft_profile=zero_profile(),
        integrator=IntegratorSettings(dt=dt, output_stride=stride, t_max=t_max),
        omega_flywheel_initial=omega0,
    )


def ramp_scenario(*, omega_hold: float = 10.0, rise: float = 2.0,
                  hold: float = 2.0, brake: float = 2.0,
                  inertia: float = 0.2, coulomb: float = 0.4,
                  viscous: float = 0.0, load: float = 0.0,
                  efficiency: float = 0.9, dt: float = 1e-3,
                  stride: int = 100, t_max: float | None = None,
                  ratio: float = 4.0) -> Scenario:
    """Rise-hold-brake scenario with coulomb-dominant losses: with the
    defaults the decay at peak speed is far below the braking ramp, so the
    wheel releases at its peak."""
    return Scenario(
        flywheel=DirectInertia(inertia),
        gear=GearTrain(ratio),
        losses=LossModel(coulomb_torque=coulomb, viscous_coeff=viscous),
        alternator=Alternator(efficiency=efficiency, load_coeff=load),
        bank=quiet_bank(),
        shaft_profile=ShaftProfile.ramp(omega_hold, rise, hold, brake),
        integrator=IntegratorSettings(dt=dt, output_stride=stride, t_max=t_max),
    )
