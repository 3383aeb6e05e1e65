"""Electrical conversion and storage chain.

The alternator loads the flywheel with a speed-proportional reaction
torque and converts the extracted mechanical power to electricity at a
fixed efficiency. Output feeds a trickle charge controller that
accumulates energy in an ultracapacitor bank and dumps the bank to the
principal storage (battery) whenever the dump-threshold voltage is
reached. The controller accepts arbitrarily small input power; that is
the point of trickle charging.
"""

import math
from dataclasses import dataclass, replace

from .core import ConfigError

__all__ = [
    "Alternator",
    "ChargeEvent",
    "UltracapBank",
    "alternator_step",
    "charge_step",
]


@dataclass(frozen=True)
class Alternator:
    """Generator attached to the flywheel shaft.

    Reaction torque is load_coeff * omega (N*m), i.e. a linear brake;
    efficiency is the mechanical-to-electrical conversion fraction.
    """

    efficiency: float = 0.85
    load_coeff: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("alternator efficiency must be in (0, 1]")
        if self.load_coeff < 0.0:
            raise ValueError("alternator load coefficient must be >= 0")


@dataclass(frozen=True)
class UltracapBank:
    """Ultracapacitor buffer; stored energy is C*V^2/2.

    v_dump is the voltage at which the bank discharges to the principal
    storage; it must not exceed the rated v_max.
    """

    capacitance: float
    voltage: float = 0.0
    v_max: float = 16.0
    v_dump: float = 15.0

    def __post_init__(self):
        if not self.capacitance > 0.0:
            raise ValueError("capacitance must be positive")
        if not 0.0 < self.v_dump <= self.v_max:
            raise ConfigError(
                f"dump voltage {self.v_dump} must lie in (0, v_max={self.v_max}]")
        if not 0.0 <= self.voltage <= self.v_max:
            raise ValueError("bank voltage out of range")

    @property
    def energy(self) -> float:
        """Stored energy C*V^2/2 in joules."""
        return 0.5 * self.capacitance * self.voltage**2

    @property
    def dump_energy(self) -> float:
        """Stored energy level at which a dump is triggered."""
        return 0.5 * self.capacitance * self.v_dump**2


@dataclass(frozen=True)
class ChargeEvent:
    """One dump of accumulated bank energy to the principal storage."""

    t: float
    energy_dumped: float
    destination: str = "battery"

    def __post_init__(self):
        if not self.energy_dumped > 0.0:
            raise ValueError("a charge event must carry positive energy")


def alternator_step(alt: Alternator, omega: float, dt: float):
    """Generate over one interval at constant speed omega.

    Returns (electrical_energy_j, reaction_torque_nm). The
    (1 - efficiency) remainder of the extracted mechanical energy is the
    caller's electrical loss.
    """
    if omega < 0.0:
        raise ValueError("angular velocity must be non-negative")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    torque = alt.load_coeff * omega
    return alt.efficiency * torque * omega * dt, torque


def charge_step(bank: UltracapBank, p_in: float, dt: float, *,
                t: float = 0.0, trickle_min: float = 0.0):
    """Feed input power into the bank for one interval.

    Returns (new_bank, events). Any power at or above trickle_min is
    accepted (default 0: accept every level). When the accumulated
    energy reaches the dump threshold, the bank empties into a single
    ChargeEvent and the voltage resets to zero.
    """
    if p_in < 0.0:
        raise ValueError("input power must be non-negative")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    accepted = p_in * dt if p_in >= trickle_min else 0.0
    energy = bank.energy + accepted
    events = []
    if energy >= bank.dump_energy and energy > 0.0:
        events.append(ChargeEvent(t=t, energy_dumped=energy))
        energy = 0.0
    voltage = math.sqrt(2.0 * energy / bank.capacitance)
    return replace(bank, voltage=voltage), events
