"""Numerical analysis of measured or simulated speed traces.

Quadrature over irregularly sampled data, polynomial least-squares
fitting, the bench-top recovery estimators, and the aggregation of
per-run bench measurements into per-case averages.

Three recovery numbers ship side by side. phase_integral_estimate and
squared_speed_estimate reproduce the traditional bench formulas built
from time-integrals of the recorded speeds; note that neither is
dimensionally an energy (see their docstrings). net_recovered_energy is
the physically consistent companion: the kinetic energy released between
the peak speed and the end of free spin.
"""

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib.resources import files
from pathlib import Path

import numpy as np

from .core import SpeedTrace

__all__ = [
    "BenchCaseRow",
    "CaseSummary",
    "PolyFit",
    "aggregate_cases",
    "bench_table_path",
    "fit_polynomial",
    "integrate",
    "net_recovered_energy",
    "phase_integral_estimate",
    "round_half_up",
    "squared_speed_estimate",
]

MAX_FIT_DEGREE = 10


def integrate(times, values, method: str = "trapezoid") -> float:
    """Composite quadrature of sampled values over (possibly) uneven steps.

    "trapezoid" sums trapezoids segment by segment; "simpson" fits a
    parabola through each pair of adjacent segments and falls back to a
    trapezoid on a trailing odd segment.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.ndim != 1 or y.ndim != 1 or t.size != y.size:
        raise ValueError("times and values must be 1-d arrays of equal length")
    if t.size < 2:
        raise ValueError("quadrature needs at least 2 samples")
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("times must be strictly increasing")

    if method == "trapezoid":
        return float(0.5 * np.sum((y[1:] + y[:-1]) * np.diff(t)))
    if method != "simpson":
        raise ValueError(f"unknown method {method!r}")

    total = 0.0
    n = t.size
    k = 0
    while k < n - 2:
        h0 = float(t[k + 1] - t[k])
        h1 = float(t[k + 2] - t[k + 1])
        f0, f1, f2 = float(y[k]), float(y[k + 1]), float(y[k + 2])
        total += (h0 + h1) / 6.0 * (
            (2.0 - h1 / h0) * f0
            + (h0 + h1) ** 2 / (h0 * h1) * f1
            + (2.0 - h0 / h1) * f2)
        k += 2
    if k == n - 2:
        total += 0.5 * (float(y[k]) + float(y[k + 1])) * float(t[k + 1] - t[k])
    return total


@dataclass(frozen=True)
class PolyFit:
    """Least-squares polynomial: coefficients in ascending powers of t."""

    degree: int
    coefficients: tuple[float, ...]
    residual_rms: float

    def __post_init__(self):
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("coefficient count must be degree + 1")
        if self.residual_rms < 0.0:
            raise ValueError("residual must be non-negative")

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, np.array(self.coefficients))


def fit_polynomial(trace: SpeedTrace, degree: int) -> PolyFit:
    """Least-squares polynomial fit of omega(t).

    Solved via the normal equations on a time axis shifted to its
    midpoint and scaled to [-1, 1] for conditioning, then mapped back so
    the reported coefficients apply to the original axis. Degrees above
    10 are rejected; the sample count must exceed the degree.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if degree > MAX_FIT_DEGREE:
        raise ValueError(f"degree {degree} above cap {MAX_FIT_DEGREE}")
    t = trace.times
    w = trace.omegas
    if t.size <= degree:
        raise ValueError(
            f"underdetermined fit: {t.size} samples for degree {degree}")

    mid = 0.5 * float(t[0] + t[-1])
    half = 0.5 * float(t[-1] - t[0])
    u = (t - mid) / half
    vand = np.vander(u, degree + 1, increasing=True)
    gram = vand.T @ vand
    rhs = vand.T @ w
    coeff_u = np.linalg.solve(gram, rhs)

    scaled = np.polynomial.Polynomial(coeff_u, domain=[float(t[0]), float(t[-1])],
                                      window=[-1.0, 1.0])
    coeff_t = scaled.convert().coef
    if coeff_t.size < degree + 1:
        coeff_t = np.pad(coeff_t, (0, degree + 1 - coeff_t.size))
    resid = w - vand @ coeff_u
    rms = float(np.sqrt(np.mean(resid * resid)))
    return PolyFit(degree=degree, coefficients=tuple(float(c) for c in coeff_t),
                   residual_rms=rms)


def _squared_trace_integral(trace: SpeedTrace) -> float:
    # exact integral of the squared piecewise-linear reconstruction:
    # each segment integrates to h*(a^2 + a*b + b^2)/3
    t = trace.times
    w = trace.omegas
    h = np.diff(t)
    a = w[:-1]
    b = w[1:]
    return float(np.sum(h * (a * a + a * b + b * b) / 3.0))


def phase_integral_estimate(spin_up: SpeedTrace, plateau: SpeedTrace | None,
                            free_spin: SpeedTrace,
                            moment_of_inertia: float) -> float:
    """Bench recovery estimate from squared phase integrals of speed.

    Combines the time-integrals A_k of the angular velocity over the
    spin-up, plateau, and free-spin segments as I*(-A1^2 + A2^2 +
    A3^2)/2. A missing plateau (the degenerate fast-brake run) passes
    None and contributes zero. The result carries units of
    kg*m^2*(rad*s)^2, not joules; see net_recovered_energy for the
    dimensionally consistent figure.
    """
    if not moment_of_inertia > 0.0:
        raise ValueError("moment of inertia must be positive")
    a1 = integrate(spin_up.times, spin_up.omegas)
    a2 = 0.0 if plateau is None else integrate(plateau.times, plateau.omegas)
    a3 = integrate(free_spin.times, free_spin.omegas)
    return 0.5 * moment_of_inertia * (-a1 * a1 + a2 * a2 + a3 * a3)


def squared_speed_estimate(free_spin: SpeedTrace, braking: SpeedTrace,
                           moment_of_inertia: float) -> float:
    """Bench recovery estimate I*(int w_fs^2 dt - int w_b^2 dt)/2.

    Each trace's squared speed is integrated over its own span, exactly
    for the piecewise-linear reconstruction. The result carries units of
    J*s, not joules; see net_recovered_energy for the dimensionally
    consistent figure.
    """
    if not moment_of_inertia > 0.0:
        raise ValueError("moment of inertia must be positive")
    return 0.5 * moment_of_inertia * (_squared_trace_integral(free_spin)
                                      - _squared_trace_integral(braking))


def net_recovered_energy(free_spin: SpeedTrace, braking: SpeedTrace,
                         moment_of_inertia: float) -> float:
    """Kinetic energy (J) released between the peak speed and free-spin end.

    I*(w_peak^2 - w_end^2)/2, with w_peak the maximum over both traces
    and w_end the final free-spin sample. Non-negative by construction,
    zero only when the trace never decays below its peak.
    """
    if not moment_of_inertia > 0.0:
        raise ValueError("moment of inertia must be positive")
    w_peak = max(float(np.max(free_spin.omegas)), float(np.max(braking.omegas)))
    w_end = float(free_spin.omegas[-1])
    return 0.5 * moment_of_inertia * (w_peak * w_peak - w_end * w_end)


def round_half_up(x: float, ndigits: int = 0) -> float:
    """Round with ties away from zero (the usual hand-table convention)."""
    q = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class BenchCaseRow:
    """One bench run: peak flywheel speed, braking and free-spin periods,
    and the net recovered energy reported for the run."""

    case_id: str
    omega_max_rpm: float
    braking_s: float
    free_spin_s: float
    energy_j: float

    def __post_init__(self):
        if min(self.omega_max_rpm, self.braking_s, self.free_spin_s,
               self.energy_j) <= 0.0:
            raise ValueError("bench measurements must be positive")


@dataclass(frozen=True)
class CaseSummary:
    """Per-case averages: free-spin period to one decimal, energy to whole
    joules (half-up), speeds and braking period carried through."""

    case_id: str
    omega_max_rpm: float
    braking_s: float
    avg_free_spin_s: float
    avg_energy_j: float


def bench_table_path() -> Path:
    """Path to the bundled per-run bench measurements CSV."""
    return Path(str(files("rbsim").joinpath("data/bench_runs.csv")))


def aggregate_cases(rows) -> list[CaseSummary]:
    """Average bench rows per case, in first-appearance order.

    Free-spin averages are rounded to one decimal, energies to whole
    joules, ties half-up.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no bench rows to aggregate")
    groups: dict[str, list[BenchCaseRow]] = {}
    for row in rows:
        groups.setdefault(row.case_id, []).append(row)
    summaries = []
    for case_id, members in groups.items():
        n = len(members)
        summaries.append(CaseSummary(
            case_id=case_id,
            omega_max_rpm=sum(r.omega_max_rpm for r in members) / n,
            braking_s=sum(r.braking_s for r in members) / n,
            avg_free_spin_s=round_half_up(
                sum(r.free_spin_s for r in members) / n, 1),
            avg_energy_j=round_half_up(sum(r.energy_j for r in members) / n, 0),
        ))
    return summaries
