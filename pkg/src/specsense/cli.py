"""Command-line interface.

Subcommands:
    run <scenario.yaml>    Monte Carlo rates (Pfa for H0 scenarios, Pd
                           across the SNR grid otherwise), CSV output.
    roc <scenario.yaml>    threshold-swept ROC at a single SNR, CSV output.
    table1                 check the shipped Tracy-Widom table against its
                           reference quantiles.
    thresholds             print the MME/EME/ED thresholds for given
                           (ns, m, l, pfa).
    ingest <file>          read a raw float32 sample file and summarize it.

Exit status is 0 on success and 1 on validation or runtime errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from . import detectors as det
from .errors import ConfigError
from .harness import RunResult, emit_csv, load_scenario, run_scenario, sweep_pd_vs_snr, sweep_roc
from .iqfile import IqFormat, ingest_iq
from .rmt import default_table, tw_cdf

# Reference quantiles of the order-1 Tracy-Widom CDF used as a build check.
TW_REFERENCE_POINTS = (
    (-3.90, 0.01), (-3.18, 0.05), (-2.78, 0.10), (-1.91, 0.30), (-1.27, 0.50),
    (-0.59, 0.70), (0.45, 0.90), (0.98, 0.95), (2.02, 0.99),
)
TW_REFERENCE_TOL = 0.005


def _apply_overrides(scenario, args):
    if args.seed is not None:
        scenario = replace(scenario, master_seed=args.seed)
    if args.trials is not None:
        scenario = replace(scenario, trials=args.trials)
    return scenario


def _print_result(result: RunResult) -> None:
    print(f"scenario {result.scenario}#{result.config_hash} seed={result.master_seed} ns={result.ns}")
    for cell in result.cells:
        where = "H0" if cell.snr_db is None else f"{cell.snr_db:g} dB"
        print(
            f"  {cell.detector:<10} {where:>9}  rate={cell.rate:.4f} "
            f"[{cell.ci_low:.4f}, {cell.ci_high:.4f}]  threshold={cell.threshold:.6g}"
        )


def _cmd_run(args) -> int:
    scenario = _apply_overrides(load_scenario(args.scenario), args)
    if scenario.is_h1:
        result = sweep_pd_vs_snr(scenario, workers=args.workers)
    else:
        result = run_scenario(scenario, workers=args.workers)
    _print_result(result)
    if args.out:
        emit_csv(result, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_roc(args) -> int:
    scenario = _apply_overrides(load_scenario(args.scenario), args)
    result = sweep_roc(scenario, workers=args.workers)
    _print_result(result)
    if args.out:
        emit_csv(result, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_table1(args) -> int:
    table = default_table()
    worst = 0.0
    for t, ref in TW_REFERENCE_POINTS:
        got = float(tw_cdf(table, t))
        diff = abs(got - ref)
        worst = max(worst, diff)
        status = "ok" if diff <= TW_REFERENCE_TOL else "FAIL"
        print(f"F1({t:6.2f}) = {got:.5f}  reference {ref:.2f}  |diff| = {diff:.5f}  {status}")
    print(f"worst deviation {worst:.5f} (tolerance {TW_REFERENCE_TOL})")
    return 0 if worst <= TW_REFERENCE_TOL else 1


def _cmd_thresholds(args) -> int:
    gamma1 = det.mme_threshold(args.ns, args.m, args.l, args.pfa)
    gamma2 = det.eme_threshold(args.ns, args.m, args.l, args.pfa)
    gamma_ed = det.ed_threshold(args.ns, args.m, args.pfa)
    print(f"ns={args.ns} m={args.m} l={args.l} pfa={args.pfa:g}")
    print(f"gamma1 (MME) = {gamma1:.10g}")
    print(f"gamma2 (EME) = {gamma2:.10g}")
    print(f"gamma  (ED)  = {gamma_ed:.10g}")
    return 0


def _cmd_ingest(args) -> int:
    fmt: Optional[IqFormat] = None
    if args.format:
        fmt = IqFormat(layout=args.format, channels=args.channels, sample_rate=args.rate)
    block = ingest_iq(args.path, fmt)
    kind = "complex" if block.is_complex else "real"
    power = float(np.mean(np.abs(block.samples) ** 2))
    rate = f"{block.sample_rate:g} Hz" if block.sample_rate else "unspecified"
    print(f"{args.path}: {block.channels} channel(s) x {block.num_samples} {kind} samples")
    print(f"sample rate {rate}, average power {power:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specsense", description="Blind spectrum sensing experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_args(p):
        p.add_argument("scenario", help="scenario YAML file")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--trials", type=int, default=None, help="override trial count")
        p.add_argument("--workers", type=int, default=1, help="worker processes")
        p.add_argument("--out", default=None, help="CSV output path")

    p_run = sub.add_parser("run", help="run a scenario (Pfa or Pd-vs-SNR)")
    add_run_args(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_roc = sub.add_parser("roc", help="threshold-swept ROC for a scenario")
    add_run_args(p_roc)
    p_roc.set_defaults(func=_cmd_roc)

    p_tab = sub.add_parser("table1", help="check the Tracy-Widom table")
    p_tab.set_defaults(func=_cmd_table1)

    p_thr = sub.add_parser("thresholds", help="print detector thresholds")
    p_thr.add_argument("--ns", type=int, required=True)
    p_thr.add_argument("--m", type=int, required=True)
    p_thr.add_argument("--l", type=int, required=True)
    p_thr.add_argument("--pfa", type=float, required=True)
    p_thr.set_defaults(func=_cmd_thresholds)

    p_ing = sub.add_parser("ingest", help="read a raw float32 sample file")
    p_ing.add_argument("path")
    p_ing.add_argument("--format", choices=("real", "iq"), default=None, help="layout (default: sidecar)")
    p_ing.add_argument("--channels", type=int, default=1)
    p_ing.add_argument("--rate", type=float, default=None, help="sample rate in Hz")
    p_ing.set_defaults(func=_cmd_ingest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, FileNotFoundError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
