"""Run the reference scenario with 5% multiplicative measurement noise.

Writes truth.csv, measurements.csv, estimates.csv (including the
smoothed infected estimate) and summary.txt under out/noisy and prints
the estimation summary. Deterministic for a fixed noise.seed.
"""
from dataclasses import replace

from siqr.cli import cmd_estimate, cmd_observe, cmd_simulate
from siqr.scenario import Scenario


def main():
    scenario = replace(Scenario(), out_dir="out/noisy")
    cmd_simulate(scenario)
    cmd_observe(scenario, noisy=True)
    cmd_estimate(scenario, noisy=True)


if __name__ == "__main__":
    main()
