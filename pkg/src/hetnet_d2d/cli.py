"""Command-line entry points for runs, sweeps and oracle checks."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .baselines import SchemeId
from .harness import (ExperimentConfig, build_drop, load_config,
                      run_experiment, sweep_d2d, sweep_eta)
from .instance_io import export_instance
from .solver import brute_force_oracle, solve_max_utility
from .topology import ScenarioConfig


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment config file")
    parser.add_argument("--seed", type=int,
                        help="override the scenario and channel seeds")
    parser.add_argument("--drops", type=int, help="Monte Carlo drop count")
    parser.add_argument("--out-dir", help="output directory")
    parser.add_argument("--scheme", action="append",
                        choices=[s.value for s in SchemeId],
                        help="association scheme (repeatable)")


def _apply_flags(config: ExperimentConfig, args) -> ExperimentConfig:
    if args.seed is not None:
        config = dataclasses.replace(
            config,
            scenario=dataclasses.replace(config.scenario, rng_seed=args.seed),
            channel=dataclasses.replace(config.channel, rng_seed=args.seed + 1))
    if args.drops is not None:
        config = dataclasses.replace(config, drops=args.drops)
    if args.out_dir is not None:
        config = dataclasses.replace(config, out_dir=args.out_dir)
    if args.scheme:
        config = dataclasses.replace(
            config, schemes=tuple(SchemeId(s) for s in args.scheme))
    return config


def _load(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    return _apply_flags(config, args)


def _cmd_run(args) -> int:
    config = _load(args)
    report = run_experiment(config)
    for scheme, agg in report.aggregates.items():
        print(f"{scheme}: jain {agg['jain']['mean']:.4f} "
              f"macro {agg['macrotier_users']['mean']:.1f} "
              f"pico {agg['picotier_users']['mean']:.1f} "
              f"d2d {agg['d2d_mode_users']['mean']:.1f}")
    print(f"outputs in {config.out_dir}")
    return 0


def _cmd_sweep_eta(args) -> int:
    config = _load(args)
    etas = args.eta if args.eta else (config.eta_sweep or
                                      tuple(round(0.1 * i, 1) for i in range(10)))
    sweep_eta(config, etas)
    print(f"swept eta over {list(etas)}; outputs in {config.out_dir}")
    return 0


def _cmd_sweep_d2d(args) -> int:
    config = _load(args)
    counts = args.pairs if args.pairs else (config.d2d_sweep or
                                            (5, 10, 15, 20, 25))
    sweep_d2d(config, counts)
    print(f"swept d2d pairs over {list(counts)}; outputs in {config.out_dir}")
    return 0


def _oracle_scenario(seed: int) -> ScenarioConfig:
    return ScenarioConfig(macro_rows=2, macro_cols=1, pbs_per_macrocell=1,
                          cellular_users_per_macrocell=2,
                          d2d_pairs_per_macrocell=1, rng_seed=seed)


def _cmd_oracle_check(args) -> int:
    config = _load(args)
    n = args.instances
    within, upper_ok = 0, True
    for i in range(n):
        small = dataclasses.replace(
            config,
            scenario=_oracle_scenario(config.scenario.rng_seed),
            drops=1)
        _, rates, _, _ = build_drop(small, i)
        x_star, g_star = brute_force_oracle(rates, cap=args.cap)
        result = solve_max_utility(rates, config.solver)
        g_best = float(result.utility_trace.max())
        gap = (g_star - g_best) / abs(g_star) if g_star else 0.0
        if g_best >= g_star - 0.05 * abs(g_star):
            within += 1
        if g_best > g_star + 1e-9:
            upper_ok = False
        print(f"instance {i}: G*={g_star:.6f} G={g_best:.6f} gap={gap:.2%}")
    print(f"{within}/{n} instances within 5% of the exhaustive optimum")
    if not upper_ok:
        print("ERROR: solver exceeded the exhaustive optimum", file=sys.stderr)
        return 1
    if within < 0.9 * n:
        print("ERROR: more than 10% of instances above the 5% gap",
              file=sys.stderr)
        return 1
    return 0


def _cmd_export_instance(args) -> int:
    config = _load(args)
    layout, rates, power, _ = build_drop(config, args.drop)
    export_instance(rates, layout, args.path, power=power)
    print(f"wrote instance for drop {args.drop} to {args.path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hetnet-d2d",
        description="Simulate association schemes in a D2D-enabled "
                    "two-tier cellular network")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Monte Carlo run at one configuration")
    _common_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_eta = sub.add_parser("sweep-eta",
                           help="paired-seed sweep of the subband-2 fraction")
    _common_flags(p_eta)
    p_eta.add_argument("--eta", action="append", type=float,
                       help="eta value (repeatable)")
    p_eta.set_defaults(func=_cmd_sweep_eta)

    p_d2d = sub.add_parser("sweep-d2d",
                           help="paired-seed sweep of the D2D pair count")
    _common_flags(p_d2d)
    p_d2d.add_argument("--pairs", action="append", type=int,
                       help="D2D pairs per macrocell (repeatable)")
    p_d2d.set_defaults(func=_cmd_sweep_d2d)

    p_oracle = sub.add_parser(
        "oracle-check",
        help="compare the distributed solver against exhaustive enumeration")
    _common_flags(p_oracle)
    p_oracle.add_argument("--instances", type=int, default=20)
    p_oracle.add_argument("--cap", type=int, default=10_000_000,
                          help="enumeration cap on assignments per instance")
    p_oracle.set_defaults(func=_cmd_oracle_check)

    p_export = sub.add_parser("export-instance",
                              help="write one drop's instance file")
    _common_flags(p_export)
    p_export.add_argument("--path", required=True, help="output file")
    p_export.add_argument("--drop", type=int, default=0)
    p_export.set_defaults(func=_cmd_export_instance)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
