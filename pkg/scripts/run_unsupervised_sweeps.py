"""Run the four unsupervised benchmark sweeps and write CSVs per scenario."""

import argparse
import os

from adcsbm import preset_scenario, run_scenario, write_aggregates_csv, write_results_csv

SCENARIOS = ("graph-signal", "feature-signal", "density", "power-law")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/unsupervised")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    for name in SCENARIOS:
        scenario = preset_scenario(name, seed=args.seed, trials=args.trials)
        result = run_scenario(scenario, workers=args.workers)
        out_dir = os.path.join(args.out, name)
        os.makedirs(out_dir, exist_ok=True)
        write_results_csv(result, os.path.join(out_dir, "results.csv"))
        write_aggregates_csv(result, os.path.join(out_dir, "aggregates.csv"))
        print(f"{name}: {len(result.rows)} rows, {len(result.failures)} failures")


if __name__ == "__main__":
    main()
