#!/usr/bin/env python3
"""Run the full randomized verification campaign (10k trials, seed 42)
and write the JSON report."""

import argparse
import json

from srlab.fuzz import FuzzConfig, run_fuzz


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--dims-max", type=int, default=20)
    parser.add_argument("--parallelism", type=int, default=0)
    parser.add_argument("--out", default="fuzz_report.json")
    args = parser.parse_args()

    cfg = FuzzConfig(
        trials=args.trials,
        seed=args.seed,
        dims_max=args.dims_max,
        parallelism=args.parallelism,
    )
    report = run_fuzz(cfg)
    with open(args.out, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
    for name, agg in report.checks.items():
        print(
            f"{name:26s} {agg['pass_count']:>6}/{agg['applicable_count']:<6} "
            f"min_slack={agg['min_slack']}"
        )
    print(f"\nfailures: {report.failure_count}   wall time: {report.wall_time:.1f}s")
    print(f"report written to {args.out}")
    raise SystemExit(1 if report.failure_count else 0)


if __name__ == "__main__":
    main()
