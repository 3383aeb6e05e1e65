"""Command-line interface and file I/O.

Subcommands: simulate, wind, analyze, tables, sweep. Structured
configuration is JSON (strict: unknown keys are rejected); time series
and tables are CSV with fixed headers, '.' decimal separators, and
newline-terminated rows. Exit codes: 0 success, 2 usage/configuration
problem, 3 numeric fault. Outputs contain no timestamps, so identical
inputs produce byte-identical files.
"""

import argparse
import csv
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .analysis import (BenchCaseRow, aggregate_cases, fit_polynomial,
                       net_recovered_energy, phase_integral_estimate,
                       squared_speed_estimate)
from .core import (AnnularRim, ConfigError, DirectInertia, NumericFault,
                   SpeedTrace, UniformDisk, inertia, rpm_to_rad_s)
from .drivetrain import (GearTrain, IntegratorSettings, LossModel, Scenario,
                         ShaftProfile, simulate)
from .electrical import Alternator, UltracapBank
from .experiments import SweepAxis, SweepSpec, apply_override, run_sweep
from .sources import (BETZ_LIMIT, DriveCycle, WindSite, WindTrace,
                      betz_coefficient, recoverable_wind_energy)

__all__ = ["main", "scenario_from_dict", "scenario_to_dict"]

UNITS_NOTE = ("phase_integral_estimate carries units kg*m^2*(rad*s)^2 and "
              "squared_speed_estimate carries J*s; neither is an energy. "
              "net_recovered_energy_j is the dimensionally consistent figure.")


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: inputs, output target, and overrides."""

    command: str
    inputs: tuple[Path, ...]
    out: Path | None
    overrides: tuple[tuple[str, object], ...] = ()

    def check_inputs(self) -> None:
        for p in self.inputs:
            if not p.is_file():
                raise ConfigError(f"input file not found: {p}")


# ---------------------------------------------------------------------------
# scenario JSON codec (strict: unknown keys rejected)

def _check_keys(obj: dict, allowed: set[str], context: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(
            f"{context}: unknown key(s) {sorted(unknown)}; allowed: "
            f"{sorted(allowed)}")


def _num(obj: dict, key: str, context: str, default=None) -> float:
    if key not in obj:
        if default is None:
            raise ConfigError(f"{context}: missing required key {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{context}.{key}: expected a number, got {v!r}")
    return float(v)


def _flywheel_from_dict(obj: dict):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("flywheel: expected an object with a 'kind' key")
    kind = obj["kind"]
    if kind == "uniform_disk":
        _check_keys(obj, {"kind", "mass_kg", "radius_m"}, "flywheel")
        return UniformDisk(mass=_num(obj, "mass_kg", "flywheel"),
                           radius=_num(obj, "radius_m", "flywheel"))
    if kind == "annular_rim":
        _check_keys(obj, {"kind", "density_kg_m3", "r_outer_m", "r_inner_m",
                          "thickness_m"}, "flywheel")
        return AnnularRim(density=_num(obj, "density_kg_m3", "flywheel"),
                          r_outer=_num(obj, "r_outer_m", "flywheel"),
                          r_inner=_num(obj, "r_inner_m", "flywheel"),
                          thickness=_num(obj, "thickness_m", "flywheel"))
    if kind == "direct":
        _check_keys(obj, {"kind", "inertia_kg_m2"}, "flywheel")
        return DirectInertia(inertia=_num(obj, "inertia_kg_m2", "flywheel"))
    raise ConfigError(f"flywheel.kind: unknown kind {kind!r}")


def _flywheel_to_dict(spec) -> dict:
    if isinstance(spec, UniformDisk):
        return {"kind": "uniform_disk", "mass_kg": spec.mass,
                "radius_m": spec.radius}
    if isinstance(spec, AnnularRim):
        return {"kind": "annular_rim", "density_kg_m3": spec.density,
                "r_outer_m": spec.r_outer, "r_inner_m": spec.r_inner,
                "thickness_m": spec.thickness}
    return {"kind": "direct", "inertia_kg_m2": spec.inertia}


def _profile_from_dict(obj: dict) -> ShaftProfile:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("shaft_profile: expected an object with a 'kind' key")
    kind = obj["kind"]
    if kind == "ramp":
        _check_keys(obj, {"kind", "omega_hold_rad_s", "rise_s", "hold_s",
                          "brake_s"}, "shaft_profile")
        return ShaftProfile.ramp(
            _num(obj, "omega_hold_rad_s", "shaft_profile"),
            _num(obj, "rise_s", "shaft_profile"),
            _num(obj, "hold_s", "shaft_profile", 0.0),
            _num(obj, "brake_s", "shaft_profile"))
    if kind == "trace":
        _check_keys(obj, {"kind", "samples"}, "shaft_profile")
        samples = obj.get("samples")
        if not isinstance(samples, list) or not all(
                isinstance(s, list) and len(s) == 2 for s in samples):
            raise ConfigError(
                "shaft_profile.samples: expected a list of [t_s, omega_rad_s]")
        return ShaftProfile(SpeedTrace.from_pairs(samples))
    raise ConfigError(f"shaft_profile.kind: unknown kind {kind!r}")


def scenario_from_dict(obj: dict) -> Scenario:
    """Decode a Scenario from its JSON object form (strict)."""
    if not isinstance(obj, dict):
        raise ConfigError("scenario: expected a JSON object")
    _check_keys(obj, {"flywheel", "gear", "losses", "alternator", "bank",
                      "shaft_profile", "integrator", "eps_sync",
                      "omega_stop_threshold", "omega_flywheel_initial"},
                "scenario")
    for key in ("flywheel", "gear", "losses", "alternator", "bank",
                "shaft_profile"):
        if key not in obj:
            raise ConfigError(f"scenario: missing required key {key!r}")
        if not isinstance(obj[key], dict):
            raise ConfigError(f"scenario.{key}: expected an object")

    gear_obj = obj["gear"]
    _check_keys(gear_obj, {"ratio"}, "gear")
    losses_obj = obj["losses"]
    _check_keys(losses_obj, {"coulomb_torque_nm", "viscous_coeff",
                             "aero_coeff"}, "losses")
    alt_obj = obj["alternator"]
    _check_keys(alt_obj, {"efficiency", "load_coeff"}, "alternator")
    bank_obj = obj["bank"]
    _check_keys(bank_obj, {"capacitance_f", "voltage_v", "v_max", "v_dump"},
                "bank")
    integ_obj = obj.get("integrator", {})
    if not isinstance(integ_obj, dict):
        raise ConfigError("scenario.integrator: expected an object")
    _check_keys(integ_obj, {"dt_s", "output_stride", "t_max_s"}, "integrator")

    t_max = integ_obj.get("t_max_s")
    if t_max is not None:
        t_max = _num(integ_obj, "t_max_s", "integrator")
    stride = integ_obj.get("output_stride", 10)
    if isinstance(stride, bool) or not isinstance(stride, int):
        raise ConfigError("integrator.output_stride: expected an integer")

    try:
        return Scenario(
            flywheel=_flywheel_from_dict(obj["flywheel"]),
            gear=GearTrain(ratio=_num(gear_obj, "ratio", "gear")),
            losses=LossModel(
                coulomb_torque=_num(losses_obj, "coulomb_torque_nm",
                                    "losses", 0.0),
                viscous_coeff=_num(losses_obj, "viscous_coeff", "losses", 0.0),
                aero_coeff=_num(losses_obj, "aero_coeff", "losses", 0.0)),
            alternator=Alternator(
                efficiency=_num(alt_obj, "efficiency", "alternator", 0.85),
                load_coeff=_num(alt_obj, "load_coeff", "alternator", 0.0)),
            bank=UltracapBank(
                capacitance=_num(bank_obj, "capacitance_f", "bank"),
                voltage=_num(bank_obj, "voltage_v", "bank", 0.0),
                v_max=_num(bank_obj, "v_max", "bank", 16.0),
                v_dump=_num(bank_obj, "v_dump", "bank", 15.0)),
            shaft_profile=_profile_from_dict(obj["shaft_profile"]),
            integrator=IntegratorSettings(
                dt=_num(integ_obj, "dt_s", "integrator", 1e-3),
                output_stride=stride, t_max=t_max),
            eps_sync=_num(obj, "eps_sync", "scenario", 1e-3),
            omega_stop_threshold=_num(obj, "omega_stop_threshold",
                                      "scenario", 0.01),
            omega_flywheel_initial=_num(obj, "omega_flywheel_initial",
                                        "scenario", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"scenario: {exc}") from exc


def scenario_to_dict(scenario: Scenario) -> dict:
    """Encode a Scenario into its JSON object form.

    Shaft profiles are stored as their knot samples, so a written-then-
    reread scenario is semantically identical.
    """
    trace = scenario.shaft_profile.trace
    return {
        "flywheel": _flywheel_to_dict(scenario.flywheel),
        "gear": {"ratio": scenario.gear.ratio},
        "losses": {"coulomb_torque_nm": scenario.losses.coulomb_torque,
                   "viscous_coeff": scenario.losses.viscous_coeff,
                   "aero_coeff": scenario.losses.aero_coeff},
        "alternator": {"efficiency": scenario.alternator.efficiency,
                       "load_coeff": scenario.alternator.load_coeff},
        "bank": {"capacitance_f": scenario.bank.capacitance,
                 "voltage_v": scenario.bank.voltage,
                 "v_max": scenario.bank.v_max,
                 "v_dump": scenario.bank.v_dump},
        "shaft_profile": {
            "kind": "trace",
            "samples": [[float(t), float(w)]
                        for t, w in zip(trace.times, trace.omegas)]},
        "integrator": {"dt_s": scenario.integrator.dt,
                       "output_stride": scenario.integrator.output_stride,
                       "t_max_s": scenario.integrator.t_max},
        "eps_sync": scenario.eps_sync,
        "omega_stop_threshold": scenario.omega_stop_threshold,
        "omega_flywheel_initial": scenario.omega_flywheel_initial,
    }


def load_scenario(path: Path) -> Scenario:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: malformed JSON at line {exc.lineno}, column "
            f"{exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(obj)


# ---------------------------------------------------------------------------
# CSV helpers

def _read_csv_columns(path: Path, header: tuple[str, ...]) -> list[list[float]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{path}: empty file")
    if tuple(h.strip() for h in rows[0]) != header:
        raise ConfigError(
            f"{path}: expected header {','.join(header)!r}, got "
            f"{','.join(rows[0])!r}")
    if len(rows) < 2:
        raise ConfigError(f"{path}: no data rows")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ConfigError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            out.append([float(x) for x in row])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return out


def _write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x: float) -> str:
    """Shortest exact decimal form; integers without trailing zeros."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def read_speed_trace(path: Path, rpm: bool = False) -> SpeedTrace:
    header = ("t_s", "omega_rpm") if rpm else ("t_s", "omega_rad_s")
    data = _read_csv_columns(path, header)
    t = np.array([r[0] for r in data])
    w = np.array([r[1] for r in data])
    if rpm:
        w = np.array([rpm_to_rad_s(x) for x in w])
    try:
        return SpeedTrace(t, w)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def read_wind_trace(path: Path) -> WindTrace:
    data = _read_csv_columns(path, ("t_s", "v_mps"))
    try:
        return WindTrace(np.array([r[0] for r in data]),
                         np.array([r[1] for r in data]))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def read_drive_cycle(path: Path) -> DriveCycle:
    data = _read_csv_columns(path, ("t_s", "v_mps", "elev_m"))
    try:
        return DriveCycle(np.array([r[0] for r in data]),
                          np.array([r[1] for r in data]),
                          np.array([r[2] for r in data]))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def read_bench_rows(path: Path) -> list[BenchCaseRow]:
    header = ("case_id", "omega_max_rpm", "braking_s", "free_spin_s",
              "energy_j")
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{path}: empty file")
    if tuple(h.strip() for h in rows[0]) != header:
        raise ConfigError(
            f"{path}: expected header {','.join(header)!r}, got "
            f"{','.join(rows[0])!r}")
    if len(rows) < 2:
        raise ConfigError(f"{path}: no data rows")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 5:
            raise ConfigError(f"{path}:{lineno}: expected 5 fields")
        try:
            out.append(BenchCaseRow(case_id=row[0].strip(),
                                    omega_max_rpm=float(row[1]),
                                    braking_s=float(row[2]),
                                    free_spin_s=float(row[3]),
                                    energy_j=float(row[4])))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# subcommands

def _parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form path=value")
    path, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path.strip(), value


def cmd_simulate(args) -> int:
    cfg = RunConfig(command="simulate", inputs=(Path(args.scenario),),
                    out=Path(args.out),
                    overrides=tuple(_parse_override(s) for s in args.set))
    cfg.check_inputs()
    scenario = load_scenario(cfg.inputs[0])
    if args.dt is not None:
        if args.dt <= 0.0:
            raise ConfigError("dt must be positive")
        scenario = replace(scenario,
                           integrator=replace(scenario.integrator, dt=args.dt))
    if args.until is not None:
        scenario = replace(
            scenario, integrator=replace(scenario.integrator, t_max=args.until))
    for path, value in cfg.overrides:
        scenario = apply_override(scenario, path, value)

    result = simulate(scenario)

    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "trajectory.csv",
               ("t_s", "omega_shaft_rad_s", "omega_flywheel_rad_s", "engaged",
                "phase"),
               ((_fmt(s.t), _fmt(s.omega_shaft), _fmt(s.omega_flywheel),
                 "true" if s.engaged else "false", s.phase.value)
                for s in result.trajectory))
    _write_csv(out / "phases.csv", ("phase", "t_start_s", "t_end_s"),
               ((span.phase.value, _fmt(span.t_start), _fmt(span.t_end))
                for span in result.phase_timeline))
    _write_csv(out / "charge_events.csv", ("t_s", "energy_j", "destination"),
               ((_fmt(e.t), _fmt(e.energy_dumped), e.destination)
                for e in result.charge_events))
    ledger = result.ledger
    report = {
        "input_work_j": ledger.input_work,
        "flywheel_ke_delta_j": ledger.flywheel_ke_delta,
        "loss_friction_j": ledger.loss_friction,
        "loss_aero_j": ledger.loss_aero,
        "loss_electrical_j": ledger.loss_electrical,
        "delivered_electrical_j": ledger.delivered_electrical,
        "residual_j": ledger.residual(),
        "relative_residual": ledger.relative_residual(),
        "omega_peak_rad_s": result.omega_peak,
        "omega_final_rad_s": result.omega_final,
        "t_final_s": result.t_final,
        "bank_voltage_final_v": result.bank_final.voltage,
    }
    (out / "ledger.json").write_text(json.dumps(report, indent=2,
                                                sort_keys=True) + "\n")
    return 0


def cmd_wind(args) -> int:
    cfg = RunConfig(command="wind", inputs=(Path(args.trace),),
                    out=Path(args.out) if args.out else None)
    cfg.check_inputs()
    trace = read_wind_trace(cfg.inputs[0])
    site = WindSite(rho=args.rho, area=args.area,
                    cut_in_velocity=args.cut_in, eta=args.eta)
    c_b = betz_coefficient(args.v_ratio) if args.v_ratio is not None else args.cb
    intervals = [tuple(iv) for iv in (args.interval or [])]
    try:
        per_interval = [
            {"t_start_s": a, "t_end_s": b,
             "energy_j": recoverable_wind_energy(site, trace, (a, b), c_b)}
            for a, b in intervals]
        total = recoverable_wind_energy(site, trace, None, c_b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = {
        "eta": site.eta,
        "c_b": c_b,
        "rho_kg_m3": site.rho,
        "area_m2": site.area,
        "cut_in_mps": site.cut_in_velocity,
        "total_energy_j": total,
        "intervals": per_interval,
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _split_at_peak(trace: SpeedTrace):
    """Segment a single recorded trace at its peak plateau.

    Returns (spin_up, plateau_or_None, free_spin) index-sliced traces;
    degenerate slices (fewer than 2 samples) come back as None.
    """
    w = trace.omegas
    peak = float(np.max(w))
    at_peak = np.nonzero(w >= peak * (1.0 - 1e-12))[0]
    first, last = int(at_peak[0]), int(at_peak[-1])

    def sub(i0, i1):
        if i1 - i0 < 1:
            return None
        return SpeedTrace(trace.times[i0:i1 + 1], w[i0:i1 + 1])

    return sub(0, first), sub(first, last), sub(last, len(trace) - 1)


def cmd_analyze(args) -> int:
    cfg = RunConfig(command="analyze", inputs=(Path(args.trace),),
                    out=Path(args.out) if args.out else None)
    cfg.check_inputs()
    trace = read_speed_trace(cfg.inputs[0], rpm=args.rpm)
    if args.inertia is not None:
        moment = args.inertia
        if moment <= 0.0:
            raise ConfigError("inertia must be positive")
    else:
        fw_path = Path(args.flywheel)
        if not fw_path.is_file():
            raise ConfigError(f"flywheel file not found: {fw_path}")
        try:
            moment = inertia(_flywheel_from_dict(json.loads(fw_path.read_text())))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{fw_path}: malformed JSON: {exc.msg}") from exc

    try:
        fit = fit_polynomial(trace, args.fit_degree)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    spin_up, plateau, free_spin = _split_at_peak(trace)
    report = {
        "fit": {"degree": fit.degree,
                "coefficients": list(fit.coefficients),
                "residual_rms": fit.residual_rms},
        "inertia_kg_m2": moment,
        "units_note": UNITS_NOTE,
    }
    if spin_up is not None and free_spin is not None:
        braking = spin_up if plateau is None else SpeedTrace(
            np.concatenate((spin_up.times, plateau.times[1:])),
            np.concatenate((spin_up.omegas, plateau.omegas[1:])))
        report["phase_integral_estimate"] = phase_integral_estimate(
            spin_up, plateau, free_spin, moment)
        report["squared_speed_estimate"] = squared_speed_estimate(
            free_spin, braking, moment)
        report["net_recovered_energy_j"] = net_recovered_energy(
            free_spin, braking, moment)
    else:
        # monotone trace: no spin-up/free-spin split, report the net release
        report["net_recovered_energy_j"] = net_recovered_energy(
            trace, trace, moment)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_tables(args) -> int:
    cfg = RunConfig(command="tables", inputs=(Path(args.table1),),
                    out=Path(args.out) if args.out else None)
    cfg.check_inputs()
    rows = read_bench_rows(cfg.inputs[0])
    summaries = aggregate_cases(rows)
    header = ("case_id", "omega_max_rpm", "braking_s", "avg_free_spin_s",
              "avg_energy_j")
    out_rows = [(s.case_id, _fmt(s.omega_max_rpm), _fmt(s.braking_s),
                 f"{s.avg_free_spin_s:.1f}", _fmt(s.avg_energy_j))
                for s in summaries]
    if cfg.out is not None:
        _write_csv(cfg.out, header, out_rows)
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(out_rows)
    return 0


def cmd_sweep(args) -> int:
    cfg = RunConfig(command="sweep",
                    inputs=(Path(args.scenario), Path(args.sweep)),
                    out=Path(args.out))
    cfg.check_inputs()
    base = load_scenario(cfg.inputs[0])
    try:
        obj = json.loads(cfg.inputs[1].read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{cfg.inputs[1]}: malformed JSON at line {exc.lineno}: "
            f"{exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("sweep: expected a JSON object")
    _check_keys(obj, {"axes", "objective", "cell_cap"}, "sweep")
    axes_obj = obj.get("axes")
    if not isinstance(axes_obj, list) or not axes_obj:
        raise ConfigError("sweep.axes: expected a non-empty list")
    axes = []
    for k, ax in enumerate(axes_obj):
        if not isinstance(ax, dict):
            raise ConfigError(f"sweep.axes[{k}]: expected an object")
        _check_keys(ax, {"path", "values"}, f"sweep.axes[{k}]")
        if not isinstance(ax.get("values"), list):
            raise ConfigError(f"sweep.axes[{k}].values: expected a list")
        try:
            axes.append(SweepAxis(path=ax.get("path", ""),
                                  values=tuple(ax["values"])))
        except ValueError as exc:
            raise ConfigError(f"sweep.axes[{k}]: {exc}") from exc
    try:
        spec = SweepSpec(axes=tuple(axes),
                         objective=obj.get("objective", "net_recovered_energy"),
                         cell_cap=obj.get("cell_cap", 100_000))
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}") from exc

    rows = run_sweep(spec, base)
    header = tuple(axis.path for axis in spec.axes) + (spec.objective,)
    _write_csv(cfg.out, header,
               (tuple(_fmt(v) for v in row.settings) + (_fmt(row.objective),)
                for row in rows))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbsim",
        description="Flywheel regenerative braking simulator and analysis "
                    "toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario and write trajectory, "
                                        "phases, events, and ledger")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dt", type=float, default=None, help="override step (s)")
    p.add_argument("--until", type=float, default=None,
                   help="override time horizon (s)")
    p.add_argument("--set", action="append", default=[], metavar="PATH=VALUE",
                   help="override a scenario field by dotted path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("wind", help="recoverable energy from a wind trace")
    p.add_argument("trace", help="CSV with header t_s,v_mps")
    p.add_argument("--rho", type=float, default=1.225)
    p.add_argument("--area", type=float, required=True,
                   help="rotor swept area (m^2)")
    p.add_argument("--eta", type=float, default=0.9)
    p.add_argument("--cut-in", dest="cut_in", type=float, default=0.0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--cb", type=float, default=BETZ_LIMIT,
                       help="Betz coefficient (default: the 16/27 maximum)")
    group.add_argument("--v-ratio", dest="v_ratio", type=float, default=None,
                       help="compute the Betz coefficient from V_out/V_in")
    p.add_argument("--interval", nargs=2, type=float, action="append",
                   metavar=("T0", "T1"), help="report this interval "
                   "(repeatable)")
    p.add_argument("--out", default=None, help="write the JSON report here "
                   "instead of stdout")
    p.set_defaults(func=cmd_wind)

    p = sub.add_parser("analyze", help="fit and energy estimates for a "
                                       "recorded speed trace")
    p.add_argument("trace", help="CSV with header t_s,omega_rad_s "
                                 "(or t_s,omega_rpm with --rpm)")
    p.add_argument("--rpm", action="store_true",
                   help="trace speeds are rpm; convert on input")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--inertia", type=float, default=None,
                       help="flywheel inertia (kg*m^2)")
    group.add_argument("--flywheel", default=None,
                       help="flywheel spec JSON file")
    p.add_argument("--fit-degree", dest="fit_degree", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("tables", help="aggregate bench rows into per-case "
                                      "averages")
    p.add_argument("table1", help="CSV with header case_id,omega_max_rpm,"
                                  "braking_s,free_spin_s,energy_j")
    p.add_argument("--out", default=None, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("sweep", help="full-factorial scenario sweep")
    p.add_argument("scenario", help="base scenario JSON file")
    p.add_argument("sweep", help="sweep spec JSON file")
    p.add_argument("--out", required=True, help="results CSV")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericFault as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
