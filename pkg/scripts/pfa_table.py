#!/usr/bin/env python3
"""False-alarm table across the three published parameter rows, desk scale.

Prints one row per (M, P, L, Ns) configuration with the empirical Pfa of
every detector at target 0.1. Runtime is a few minutes at the default
trial count.

    python scripts/pfa_table.py [--trials N] [--seed N] [--out results.csv]
"""

import argparse

from specsense.harness import DetectorSpec, Scenario, emit_csv, run_scenario

ROWS = [
    ("M=4 L=8 Ns=1e4", dict(m=4, l=8, ns=10_000)),
    ("M=1 L=10 Ns=1e4", dict(m=1, l=10, ns=10_000)),
    ("M=2 L=8 Ns=1e4", dict(m=2, l=8, ns=10_000)),
]

DETECTORS = (
    DetectorSpec("ED", 2.0), DetectorSpec("ED", 1.5), DetectorSpec("ED", 1.0),
    DetectorSpec("ED", 0.5), DetectorSpec("ED"), DetectorSpec("EME"), DetectorSpec("MME"),
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=20260809)
    parser.add_argument("--out", default=None, help="also write the last row's CSV here")
    args = parser.parse_args()

    labels = [spec.label for spec in DETECTORS]
    print("configuration".ljust(18) + "".join(label.rjust(10) for label in labels))
    result = None
    for title, dims in ROWS:
        scenario = Scenario(
            name=title.replace(" ", "-"), trials=args.trials, master_seed=args.seed,
            detectors=DETECTORS, **dims,
        )
        result = run_scenario(scenario)
        rates = {c.detector: c.rate for c in result.cells}
        print(title.ljust(18) + "".join(f"{rates[label]:10.3f}" for label in labels))
    if args.out and result is not None:
        emit_csv(result, args.out)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
