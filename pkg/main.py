#!/usr/bin/env python3

# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.
"""
DualTap - Main Entry Point

Monte-Carlo comparison of the dual-domain sparse adaptive filter (DD-SAF)
against LMS and RZA-LMS on sparse system identification, with closed-form
stability and steady-state predictions.

Usage:
    python main.py run --experiment 1 [--seed 42] [--out outputs]
    python main.py sweep --experiment 2
    python main.py theory --config my_experiment.ini
    python main.py validate
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.config import (
    CURVES_FILENAME,
    EXIT_DIVERGENCE,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    OUTPUTS_DIR,
    SUMMARY_FILENAME,
    SWEEP_FILENAME,
)
from src.errors import DivergenceError, InvalidConfigurationError, InvalidInputError
from src.experiments import (
    ExperimentConfig,
    build_overlays,
    estimate_steady_state,
    export_curves_csv,
    export_summary,
    export_sweep_csv,
    format_summary,
    load_config,
    prepare_experiment,
    preset,
    recursion_curve,
    run_monte_carlo,
    step_size_sweep,
    theory_inputs,
    theory_line,
)
from src.experiments.config_file import parse_float_list
from src.filters import AlgorithmKind, sgn
from src.logger import configure_logging, logger
from src.theory import TheoryInputs, is_ms_stable, ms_stability_bound, predict, to_db
from src.validation import run_checks

CONFIG_ERRORS = (InvalidConfigurationError, InvalidInputError, FileNotFoundError)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def assignment(text: str) -> Tuple[str, float]:
    """'DD-SAF=0.01' -> ('DD-SAF', 0.01)."""
    name, sep, value = text.rpartition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected <algorithm>=<value>, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}")


def float_list(text: str) -> Tuple[float, ...]:
    try:
        return parse_float_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def corrupted_sgn(v):
    """Sign with sgn(0) = +1; used only to prove the reduction oracles bite."""
    return np.where(np.asarray(v) >= 0, 1.0, -1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        description="DualTap - dual-domain sparse adaptive filter experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Commands:
    run        Monte-Carlo learning curves (curves.csv, summary.txt)
    sweep      Steady-state MSD over a step-size grid (sweep.csv)
    theory     Print stability bounds and steady-state predictions
    validate   Run the invariant suite

Examples:
    python main.py run --experiment 1
    python main.py run --experiment 3 --trials 10 --mu DD-SAF=0.003 -v
    python main.py sweep --experiment 2 --workers 4
    python main.py theory --experiment 1 --sbar analytic

Exit codes: 0 ok, 1 usage/config error, 2 divergence, 3 validation failure.
        """
    )

    verbosity = CliParser(add_help=False)
    verbosity.add_argument(
        "-v", "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for debug output and trial-0 filter traces"
    )

    common = CliParser(add_help=False, parents=[verbosity])
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--experiment", type=int, help="Preset experiment id (1-5)")
    source.add_argument("--config", type=str, help="Path to an INI experiment file")
    common.add_argument("--seed", type=int, help="Master seed (unsigned 64-bit)")
    common.add_argument("--trials", type=int, help="Monte-Carlo trial count")
    common.add_argument("--iters", type=int, help="Iterations per trial")
    common.add_argument(
        "--mu", type=assignment, action="append", default=[], metavar="ALG=VAL",
        help="Step size for one algorithm (keeps rho0/mu); repeatable"
    )
    common.add_argument(
        "--rho0", type=assignment, action="append", default=[], metavar="ALG=VAL",
        help="Zero-attraction strength for one algorithm; repeatable"
    )
    common.add_argument(
        "--sbar", choices=["plugin", "analytic"],
        help="Steady-state penalty weights for the theory: pilot run or analytic bound"
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # =========================================================================
    # RUN command
    # =========================================================================
    run_parser = subparsers.add_parser("run", parents=[common], help="Run Monte-Carlo learning curves")
    run_parser.add_argument("--out", type=str, default=str(OUTPUTS_DIR), help="Output directory")
    run_parser.add_argument("--workers", type=int, default=1, help="Worker processes for trials")
    run_parser.add_argument("--no-theory", action="store_true", help="Skip the theory overlay")
    run_parser.add_argument(
        "--theory-curve", action="store_true",
        help="Also write the DD-SAF transient predicted by the MSD recursion"
    )

    # =========================================================================
    # SWEEP command
    # =========================================================================
    sweep_parser = subparsers.add_parser("sweep", parents=[common], help="Step-size sweep")
    sweep_parser.add_argument("--out", type=str, default=str(OUTPUTS_DIR), help="Output directory")
    sweep_parser.add_argument("--workers", type=int, default=1, help="Worker processes for trials")
    sweep_parser.add_argument(
        "--mu-grid", type=float_list, help="Comma-separated step sizes (overrides the preset grid)"
    )

    # =========================================================================
    # THEORY command
    # =========================================================================
    subparsers.add_parser("theory", parents=[common], help="Print theory predictions")

    # =========================================================================
    # VALIDATE command
    # =========================================================================
    validate_parser = subparsers.add_parser("validate", parents=[verbosity], help="Run invariant checks")
    validate_parser.add_argument("--seed", type=int, help="Seed for the synthetic signals")
    validate_parser.add_argument("--corrupt-sgn-zero", action="store_true", help=argparse.SUPPRESS)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(getattr(args, "verbose", 0))

    if args.command == "run":
        return run_run(args)
    elif args.command == "sweep":
        return run_sweep(args)
    elif args.command == "theory":
        return run_theory(args)
    elif args.command == "validate":
        return run_validate(args)

    parser.print_help()
    return EXIT_USAGE


def load_experiment(args) -> ExperimentConfig:
    """Preset or config file, with command-line overrides applied."""
    if args.config:
        config = load_config(args.config)
    else:
        config = preset(args.experiment)
    return config.with_overrides(
        master_seed=args.seed,
        n_trials=args.trials,
        n_iters=args.iters,
        mu=dict(args.mu),
        rho0=dict(args.rho0),
        theory_overlay=False if getattr(args, "no_theory", False) else None,
        mu_grid=getattr(args, "mu_grid", None),
        sbar_mode=args.sbar,
    )


def run_run(args) -> int:
    """Simulate every algorithm and write curves.csv plus summary.txt."""
    try:
        config = load_experiment(args)
        context = prepare_experiment(config)
    except CONFIG_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    out_dir = Path(args.out)
    trace_dir = str(out_dir / "traces") if args.verbose >= 2 else None
    fingerprint = config.fingerprint()

    print(f"Running {config.name}: {config.n_trials} trials x {config.n_iters} iterations")
    curves = {}
    diverged = []
    # one algorithm at a time so a divergence leaves the others intact
    for name in config.algorithm_names:
        try:
            curves.update(run_monte_carlo(
                config.only(name), workers=args.workers, context=context, trace_dir=trace_dir,
            ))
        except DivergenceError as e:
            print(f"  {name}: diverged ({e})")
            diverged.append(name)
        except InvalidInputError as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_USAGE

    estimates = {
        name: estimate_steady_state(curve, config.steady_state_window)
        for name, curve in curves.items()
    }

    overlays = None
    theory_curves = []
    if config.theory_overlay and config.white_input:
        try:
            overlays = build_overlays(config, context)
        except DivergenceError as e:
            logger.warning("theory overlay skipped: %s", e)
        if overlays:
            for name, algorithm in config.algorithms:
                if algorithm.kind is not AlgorithmKind.DDSAF:
                    continue
                theory_curves.append(theory_line(overlays[name], config.n_iters, fingerprint))
                if args.theory_curve:
                    theory_curves.append(recursion_curve(
                        overlays[name], config, context.system.energy, fingerprint,
                    ))
    elif config.theory_overlay:
        logger.warning("theory overlay skipped: closed forms assume white input")

    curves_path = export_curves_csv(list(curves.values()) + theory_curves, out_dir / CURVES_FILENAME, fingerprint)
    summary_path = export_summary(config, estimates, out_dir / SUMMARY_FILENAME, overlays, diverged)

    print(format_summary(config, estimates, overlays, diverged))
    print(f"Curves saved:  {curves_path}")
    print(f"Summary saved: {summary_path}")
    return EXIT_DIVERGENCE if diverged else EXIT_OK


def run_sweep(args) -> int:
    """Steady-state MSD per (mu, algorithm) into sweep.csv."""
    try:
        config = load_experiment(args)
        points = step_size_sweep(config, workers=args.workers)
    except CONFIG_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    sweep_path = export_sweep_csv(points, Path(args.out) / SWEEP_FILENAME, config.fingerprint())

    print(f"Step-size sweep: {config.name}")
    print("-" * 50)
    print(f"  {'mu':>9}  {'algorithm':<10}{'MSD (dB)':>10}{'std (dB)':>10}")
    for p in points:
        msd = "diverged" if p.diverged else f"{p.msd_ss_db:.2f}"
        std = "" if p.diverged else f"{p.std_db:.2f}"
        print(f"  {p.mu:>9.5f}  {p.algorithm:<10}{msd:>10}{std:>10}")
    print(f"Sweep saved: {sweep_path}")

    return EXIT_DIVERGENCE if any(p.diverged for p in points) else EXIT_OK


def run_theory(args) -> int:
    """Print stability bounds and closed-form predictions per algorithm."""
    try:
        config = load_experiment(args)
        context = prepare_experiment(config)
        if not config.white_input:
            raise InvalidConfigurationError("closed-form theory requires white input")
    except CONFIG_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    M, sigma_x2 = config.system.M, config.input_variance
    bound = ms_stability_bound(M, sigma_x2)
    print(f"Theory report: {config.name} (s_bar={config.sbar_mode})")
    print("=" * 60)
    print(f"  M = {M}, K = {context.system.K}, sigma_x^2 = {sigma_x2:.4g}, sigma_v^2 = {context.noise.total_variance:.4e}")
    print(f"  mean stability:        mu < {2.0 / sigma_x2:.4f}")
    print(f"  mean-square stability: mu < {bound.exact:.4f} (large-M {bound.large_m:.4f})")

    unstable = False
    inputs: Dict[str, TheoryInputs] = {}
    for name, algorithm in config.algorithms:
        print("")
        print(f"  {name}  mu={algorithm.mu:.5f}  rho0={algorithm.rho0:.3e}")
        if not is_ms_stable(algorithm.mu, M, sigma_x2):
            print(f"    unstable: exceeds mean-square bound {bound.exact:.4f}")
            unstable = True
            continue
        try:
            inputs[name] = theory_inputs(config, name, context)
        except DivergenceError as e:
            print(f"    unstable: pilot run diverged ({e})")
            unstable = True
            continue

        reference = None
        if algorithm.kind is AlgorithmKind.DDSAF:
            rza = [n for n, a in config.algorithms if a.kind is AlgorithmKind.RZA and n in inputs]
            reference = inputs[rza[0]].sbar_active if rza else None
        p = predict(inputs[name], context.system.coefficients, reference_sbar=reference)

        print(f"    noise floor:           {to_db(p.noise_floor):.2f} dB")
        print(f"    steady-state MSD:      {p.msd_ss_db:.2f} dB")
        if algorithm.is_sparse:
            print(f"    bias bound:            {p.bias_bound:.4e} (penalty norm <= {p.penalty_norm_bound:g})")
        if algorithm.kind is AlgorithmKind.DDSAF:
            print(f"    recommended n_warm:    {p.recommended_n_warm}")
            if reference is not None:
                print(f"    delta MSD vs RZA-LMS:  {p.delta_msd:.4e}")

    return EXIT_DIVERGENCE if unstable else EXIT_OK


def run_validate(args) -> int:
    """Run the invariant suite; nonzero exit if any check fails."""
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print(f"Error: seed must be an unsigned 64-bit integer, got {args.seed}", file=sys.stderr)
        return EXIT_USAGE
    sign = corrupted_sgn if args.corrupt_sgn_zero else sgn
    kwargs = {} if args.seed is None else {"seed": args.seed}
    results = run_checks(sign=sign, **kwargs)

    print("DualTap validation")
    print("-" * 40)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"  [{status}] {result.name}: {result.detail}")

    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
