#!/usr/bin/env python3
"""Detection probability vs sample count at a fixed low SNR.

Shows the sample-growth contrast: the blind detectors improve with more
samples while energy detection under noise uncertainty stays pinned near
its floor.

    python scripts/pd_vs_ns.py [--snr -20] [--trials N] [--seed N]
"""

import argparse

from specsense.harness import ChannelModel, DetectorSpec, Scenario, sweep_pd_vs_snr
from specsense.signals import SourceSpec

NS_GRID = (4000, 8000, 12_000, 16_000, 20_000)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--snr", type=float, default=-20.0)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    detectors = (
        DetectorSpec("MME"), DetectorSpec("EME"), DetectorSpec("ED"),
        DetectorSpec("ED", 2.0),
    )
    labels = [spec.label for spec in detectors]
    print("ns".rjust(8) + "".join(label.rjust(10) for label in labels))
    for ns in NS_GRID:
        scenario = Scenario(
            name=f"pd-vs-ns-{ns}", m=4, p=2, l=8, ns=ns, trials=args.trials,
            detectors=detectors, signal=SourceSpec("iid-bpsk"),
            channel=ChannelModel("random-gaussian", orders=(9, 9)),
            snr_grid_db=(args.snr,), master_seed=args.seed,
        )
        cells = sweep_pd_vs_snr(scenario).cells
        rates = {c.detector: c.rate for c in cells if c.snr_db == args.snr}
        print(f"{ns:8d}" + "".join(f"{rates[label]:10.3f}" for label in labels))


if __name__ == "__main__":
    main()
