import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbsim import (AnnularRim, DirectInertia, EnergyLedger, Phase, SpeedTrace,
                   UniformDisk, inertia, kinetic_energy, legal_transition,
                   rad_s_to_rpm, required_torque, rpm_to_rad_s,
                   validate_phase_sequence)


class TestInertia:
    def test_uniform_disk_hand_value(self):
        assert inertia(UniformDisk(mass=2.0, radius=1.0)) == pytest.approx(1.0)

    def test_direct_passthrough(self):
        assert inertia(DirectInertia(0.75)) == 0.75

    def test_annulus_reduces_to_disk_as_bore_vanishes(self):
        disk = UniformDisk(mass=2.0, radius=0.3)
        # same mass and outer radius, vanishing bore
        r_in = 1e-9
        density = disk.mass / (math.pi * (disk.radius**2 - r_in**2) * 0.01)
        rim = AnnularRim(density=density, r_outer=disk.radius, r_inner=r_in,
                         thickness=0.01)
        assert inertia(rim) == pytest.approx(inertia(disk), abs=1e-12)

    def test_rejects_bad_dimensions(self):
        with pytest.raises(ValueError):
            UniformDisk(mass=-1.0, radius=1.0)
        with pytest.raises(ValueError):
            AnnularRim(density=2700.0, r_outer=0.1, r_inner=0.2, thickness=0.01)
        with pytest.raises(ValueError):
            DirectInertia(0.0)

    @given(m=st.floats(0.1, 1e3), r=st.floats(0.01, 10.0),
           dm=st.floats(0.01, 10.0), dr=st.floats(0.001, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_monotone_in_mass_and_radius(self, m, r, dm, dr):
        base = inertia(UniformDisk(m, r))
        assert inertia(UniformDisk(m + dm, r)) > base
        assert inertia(UniformDisk(m, r + dr)) > base


class TestKineticEnergy:
    def test_hand_value(self):
        assert kinetic_energy(0.5, 100.0) == pytest.approx(2500.0)

    def test_zero_speed(self):
        assert kinetic_energy(0.5, 0.0) == 0.0

    def test_500_rpm_value(self):
        assert kinetic_energy(0.5, rpm_to_rad_s(500.0)) == pytest.approx(
            685.39, abs=0.01)

    def test_rejects_negative_speed(self):
        with pytest.raises(ValueError):
            kinetic_energy(1.0, -1.0)

    @given(i=st.floats(1e-3, 1e3), w=st.floats(0.0, 1e4))
    @settings(max_examples=100, deadline=None)
    def test_quadratic_scaling(self, i, w):
        assert kinetic_energy(i, 2.0 * w) == pytest.approx(
            4.0 * kinetic_energy(i, w), rel=1e-12)


class TestRequiredTorque:
    def test_hand_value(self):
        assert required_torque(2.0, 5.0) == pytest.approx(10.0)

    def test_zero(self):
        assert required_torque(1.0, 0.0) == 0.0

    def test_sign_follows_alpha(self):
        assert required_torque(1.0, -3.0) == pytest.approx(-3.0)


class TestRpmConversion:
    def test_300_rpm(self):
        assert rpm_to_rad_s(300.0) == pytest.approx(31.41593, abs=1e-5)

    def test_500_rpm(self):
        assert rpm_to_rad_s(500.0) == pytest.approx(52.35988, abs=1e-5)

    def test_zero(self):
        assert rpm_to_rad_s(0.0) == 0.0

    @given(st.floats(0.0, 1e6))
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, rpm):
        assert rad_s_to_rpm(rpm_to_rad_s(rpm)) == pytest.approx(rpm, abs=1e-12,
                                                                rel=1e-12)


class TestSpeedTrace:
    def test_requires_two_samples(self):
        with pytest.raises(ValueError):
            SpeedTrace(np.array([0.0]), np.array([1.0]))

    def test_requires_increasing_times(self):
        with pytest.raises(ValueError):
            SpeedTrace(np.array([0.0, 0.0]), np.array([1.0, 1.0]))

    def test_rejects_negative_speed(self):
        with pytest.raises(ValueError):
            SpeedTrace(np.array([0.0, 1.0]), np.array([1.0, -0.5]))

    def test_immutable_arrays(self):
        tr = SpeedTrace.from_pairs([(0.0, 1.0), (1.0, 2.0)])
        with pytest.raises(ValueError):
            tr.omegas[0] = 5.0

    def test_interpolation(self):
        tr = SpeedTrace.from_pairs([(0.0, 0.0), (2.0, 4.0)])
        assert tr.value_at(1.0) == pytest.approx(2.0)
        assert tr.value_at(5.0) == pytest.approx(4.0)  # clamped


class TestPhaseMachine:
    def test_forward_chain_is_legal(self):
        validate_phase_sequence([Phase.IDLE, Phase.ENGAGED, Phase.SYNCHRONIZED,
                                 Phase.FREE_SPIN, Phase.STOPPED])

    def test_skip_synchronized_is_legal(self):
        validate_phase_sequence([Phase.IDLE, Phase.ENGAGED, Phase.FREE_SPIN,
                                 Phase.STOPPED])

    def test_self_transition_is_legal(self):
        assert legal_transition(Phase.FREE_SPIN, Phase.FREE_SPIN)

    def test_backward_transition_is_illegal(self):
        assert not legal_transition(Phase.FREE_SPIN, Phase.ENGAGED)
        with pytest.raises(ValueError):
            validate_phase_sequence([Phase.STOPPED, Phase.IDLE])

    def test_other_skips_are_illegal(self):
        assert not legal_transition(Phase.IDLE, Phase.SYNCHRONIZED)
        assert not legal_transition(Phase.SYNCHRONIZED, Phase.STOPPED)


class TestEnergyLedger:
    def test_balanced_ledger_has_tiny_residual(self):
        led = EnergyLedger(input_work=100.0, flywheel_ke_delta=40.0,
                           loss_friction=30.0, loss_aero=10.0,
                           loss_electrical=5.0, delivered_electrical=15.0)
        assert led.residual() == pytest.approx(0.0, abs=1e-12)
        assert led.relative_residual() < 1e-12

    def test_losses_must_be_non_negative(self):
        with pytest.raises(ValueError):
            EnergyLedger(loss_friction=-1.0)

    def test_fields_must_be_finite(self):
        with pytest.raises(ValueError):
            EnergyLedger(input_work=math.inf)

    def test_relative_residual_normalises_by_at_least_one_joule(self):
        led = EnergyLedger(input_work=1e-9)
        assert led.relative_residual() == pytest.approx(1e-9)
