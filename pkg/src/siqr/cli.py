"""Scenario-driven command line front end.

Subcommands: simulate (truth.csv), observe (measurements.csv), estimate
(estimates.csv plus a summary), identify (closed-form recovery report at
one instant), check (assumptions, pole placement, initial-sign report).
Exit status: 0 success, 2 configuration error, 3 numerical divergence.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, DivergenceError
from .identify import check_initial_inequalities, recover_full, recover_simplified
from .integrator import IntegratorConfig, integrate
from .models import EpidemicState, ModelKind, check_assumptions, vector_field
from .observation import add_noise, moving_average, observe, output_jets
from .observer import guard_measurements, run_observer, verify_pole_placement
from .scenario import Scenario, parse_scenario

__all__ = [
    "main",
    "load_scenario",
    "simulate_truth",
    "make_measurements",
    "cmd_simulate",
    "cmd_observe",
    "cmd_estimate",
    "cmd_identify",
    "cmd_check",
]


def load_scenario(path) -> Scenario:
    if path is None:
        return parse_scenario("")
    return parse_scenario(Path(path).read_text())


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return "" if math.isnan(value) else repr(value)
    return str(value)


def _write_csv(path: Path, header, columns) -> None:
    rows = [",".join(header)]
    for values in zip(*columns):
        rows.append(",".join(_fmt(v) for v in values))
    path.write_text("\n".join(rows) + "\n")


def _out_dir(scenario: Scenario) -> Path:
    out = Path(scenario.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def simulate_truth(scenario: Scenario):
    cfg = scenario.integrator_config()
    field = vector_field(scenario.kind, scenario.params())
    return integrate(field, scenario.initial_state().as_array(), cfg)


def make_measurements(scenario: Scenario, noisy: bool):
    """Clean and (optionally) noise-corrupted output series."""
    traj = simulate_truth(scenario)
    clean = observe(traj, scenario.alpha)
    if noisy and scenario.relative_sigma > 0:
        return traj, clean, add_noise(clean, scenario.noise_spec())
    return traj, clean, clean


def cmd_simulate(scenario: Scenario) -> Path:
    traj = simulate_truth(scenario)
    path = _out_dir(scenario) / "truth.csv"
    _write_csv(
        path,
        ["t", "S", "I", "Q", "R"],
        [traj.times] + [traj.states[:, j] for j in range(4)],
    )
    return path


def cmd_observe(scenario: Scenario, noisy: bool = True) -> Path:
    _, clean, noised = make_measurements(scenario, noisy)
    path = _out_dir(scenario) / "measurements.csv"
    _write_csv(
        path,
        ["t", "y1", "y2", "y1_noisy", "y2_noisy"],
        [clean.times, clean.y1, clean.y2, noised.y1, noised.y2],
    )
    return path


def cmd_estimate(scenario: Scenario, noisy: bool = True):
    """Run the observer over the scenario's measurements.

    Writes estimates.csv and summary.txt, prints the summary, and
    returns (run, truth trajectory, smoothed infected estimate).
    """
    traj, _, measurements = make_measurements(scenario, noisy)
    gain_set = scenario.gain_set()
    # Initialize the measured components from the guarded first samples
    # (the raw ones may have been noise-clamped to zero).
    guarded, _, _ = guard_measurements(measurements)
    init = scenario.observer_init(guarded.y1[0], guarded.y2[0])
    run = run_observer(
        measurements, gain_set, scenario.N, init, scenario.integrator_config()
    )
    est = run.estimates
    i_hat_smoothed = moving_average(est.I_hat, scenario.smooth_window)

    out = _out_dir(scenario)
    _write_csv(
        out / "estimates.csv",
        ["t", "rho_hat", "beta_hat", "alpha_hat", "I_hat", "I_hat_smoothed", "clamp_active"],
        [
            est.times,
            est.rho_hat,
            est.beta_hat,
            est.alpha_hat,
            est.I_hat,
            i_hat_smoothed,
            est.clamp_active.astype(int),
        ],
    )

    truth = {"rho_hat": scenario.rho, "beta_hat": scenario.beta, "alpha_hat": scenario.alpha}
    lines = []
    for name, true_value in truth.items():
        final = float(getattr(est, name)[-1])
        rel = abs(final - true_value) / true_value
        lines.append(f"final.{name} = {final!r}")
        lines.append(f"final_rel_error.{name} = {rel!r}")
    lines.append(f"guard_substitutions.y1 = {run.substitutions_y1}")
    lines.append(f"guard_substitutions.y2 = {run.substitutions_y2}")
    lines.append(f"decay_bound = {gain_set.decay_bound!r}")
    summary = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(summary)
    print(summary, end="")
    return run, traj, i_hat_smoothed


def cmd_identify(scenario: Scenario, t: float):
    """Closed-form parameter recovery from the noise-free jet at time t."""
    if not 0 < t <= scenario.horizon:
        raise ConfigError(f"--t must lie in (0, horizon], got {t!r}")
    cfg = IntegratorConfig(dt=scenario.dt, horizon=t)
    field = vector_field(scenario.kind, scenario.params())
    traj = integrate(field, scenario.initial_state().as_array(), cfg)
    jet = output_jets(
        EpidemicState.from_array(traj.states[-1]), scenario.params(), scenario.kind, t=t
    )
    y1_at_0 = scenario.alpha * scenario.I0
    if scenario.kind is ModelKind.FULL:
        rec = recover_full(jet, y1_at_0, scenario.N)
    else:
        rec = recover_simplified(jet, y1_at_0, scenario.N)
    truth = {
        "rho": scenario.rho,
        "alpha": scenario.alpha,
        "beta": scenario.beta,
        "epsilon": scenario.I0,
    }
    for name, true_value in truth.items():
        value = getattr(rec, name)
        rel = abs(value - true_value) / abs(true_value)
        print(f"recovered.{name} = {value!r}")
        print(f"recovered_rel_error.{name} = {rel!r}")
    return rec


def cmd_check(scenario: Scenario):
    """Assumption, pole-placement, and initial-sign report."""
    report = {}
    assumptions = check_assumptions(scenario.params())
    report["assumption.a1"] = assumptions["a1"]
    report["assumption.a2"] = assumptions["a2"]
    poles = verify_pole_placement(scenario.lam, scenario.mu, scenario.N)
    report["poles.m1_ok"] = poles["m1_ok"]
    report["poles.m2_ok"] = poles["m2_ok"]
    report["poles.max_coeff_error"] = poles["max_coeff_error"]
    inequalities = check_initial_inequalities(scenario.params(), scenario.I0)
    report["inequality.dh1_at_0"] = inequalities["dh1_at_0"]
    report["inequality.cterm_at_0"] = inequalities["cterm_at_0"]
    report["inequality.ok"] = inequalities["ok"]
    report["decay_bound"] = scenario.gain_set().decay_bound
    for key, value in report.items():
        text = repr(value) if isinstance(value, float) else _fmt(value)
        print(f"{key} = {text}")
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="siqr",
        description="Simulate the SIQR quarantine model and estimate its parameters.",
    )
    parser.add_argument("command", choices=["simulate", "observe", "estimate", "identify", "check"])
    parser.add_argument("--config", default=None, help="scenario file (flat key = value lines)")
    parser.add_argument("--t", type=float, default=None, help="recovery instant (identify only)")
    parser.add_argument(
        "--no-noise", action="store_true", help="disable measurement noise for this run"
    )
    args = parser.parse_args(argv)

    try:
        scenario = load_scenario(args.config)
        if args.command == "simulate":
            cmd_simulate(scenario)
        elif args.command == "observe":
            cmd_observe(scenario, noisy=not args.no_noise)
        elif args.command == "estimate":
            cmd_estimate(scenario, noisy=not args.no_noise)
        elif args.command == "identify":
            if args.t is None:
                raise ConfigError("identify needs --t INSTANT")
            cmd_identify(scenario, args.t)
        elif args.command == "check":
            cmd_check(scenario)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"numerical divergence: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
