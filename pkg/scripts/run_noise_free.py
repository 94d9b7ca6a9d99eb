"""Run the reference scenario without measurement noise.

Writes truth.csv, measurements.csv, estimates.csv and summary.txt under
out/noise_free and prints the estimation summary.
"""
from dataclasses import replace

from siqr.cli import cmd_estimate, cmd_observe, cmd_simulate
from siqr.scenario import Scenario


def main():
    scenario = replace(Scenario(), out_dir="out/noise_free")
    cmd_simulate(scenario)
    cmd_observe(scenario, noisy=False)
    cmd_estimate(scenario, noisy=False)


if __name__ == "__main__":
    main()
