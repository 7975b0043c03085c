"""Experiment orchestration: config files, Monte Carlo drops, sweeps, CSVs.

Outputs are bit-identical for identical configs: drop seeds derive purely
from (section seed, drop index), floats are written with full round-trip
precision and no timestamps are recorded.

CSV schemas
-----------
``metrics.csv``      drop, scheme, eta, d2d_pairs, macrotier_users,
                     picotier_users, d2d_mode_users, jain, sum_utility,
                     then one ``coverage_<rho-in-bps>`` column per target.
``convergence.csv``  drop, iteration, G, I, max_price_residual.
``rates.csv``        drop, scheme, receiver_role, rate_bps, serving_tier.
``coverage_vs_eta.csv``  eta, scheme, rho_bps, coverage_mean, coverage_se.
``d2d_counts.csv``   d2d_pairs, scheme, rx_on_bs_mean, rx_on_bs_se,
                     rx_on_tx_mean, rx_on_tx_se.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .baselines import (SchemeId, assoc_max_rate, assoc_max_sinr,
                        assoc_rate_bias, assoc_sinr_bias)
from .channel import ChannelConfig, compute_gains
from .metrics import MetricsReport, compute_report
from .phy import PartitionConfig, RadioConfig, allocate_power, build_rate_table
from .solver import SolverConfig, solve_max_utility
from .topology import ScenarioConfig, generate_layout

DEFAULT_TARGET_RATES = (0.25e6, 0.5e6, 1e6, 2e6)  # bps


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    partition: PartitionConfig = field(default_factory=PartitionConfig)
    radio: RadioConfig = field(default_factory=RadioConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    schemes: tuple = tuple(SchemeId)
    drops: int = 1
    eta_sweep: tuple = ()
    d2d_sweep: tuple = ()
    target_rates: tuple = DEFAULT_TARGET_RATES
    out_dir: str = "out"

    def __post_init__(self):
        if self.drops < 1:
            raise ValueError("drops must be >= 1")
        for eta in self.eta_sweep:
            if not 0.0 <= eta <= 1.0:
                raise ValueError("eta values must lie in [0, 1]")
        for rho in self.target_rates:
            if rho < 0:
                raise ValueError("target rates must be >= 0")
        if (SchemeId.RATE_BIAS in self.schemes
                and SchemeId.MAX_UTILITY not in self.schemes):
            raise ValueError("rate_bias needs max_utility in the scheme list "
                             "to supply converged prices")


@dataclass(eq=False)
class RunReport:
    config: ExperimentConfig
    seed_ledger: list                  # one (layout_seed, channel_seed) per drop
    per_drop: list                     # per drop: dict scheme -> MetricsReport
    aggregates: dict                   # scheme -> metric -> {mean, se}


_SECTION_TYPES = {
    "scenario": ScenarioConfig,
    "channel": ChannelConfig,
    "partition": PartitionConfig,
    "radio": RadioConfig,
    "solver": SolverConfig,
}
_TOP_LEVEL_KEYS = set(_SECTION_TYPES) | {
    "schemes", "drops", "eta_sweep", "d2d_sweep", "target_rates", "out_dir"}


def _build_section(cls, data: dict, section: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown key(s) in config section '{section}': "
                         f"{sorted(unknown)}")
    return cls(**data)


def load_config(path) -> ExperimentConfig:
    """Parse the JSON experiment config; unknown keys are errors."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise ValueError(
                f"config parse error at byte {err.pos} of {path}: {err.msg}") from err
    if not isinstance(doc, dict):
        raise ValueError("config root must be a JSON object")
    unknown = set(doc) - _TOP_LEVEL_KEYS
    if unknown:
        raise ValueError(f"unknown top-level config key(s): {sorted(unknown)}")
    kwargs = {}
    for section, cls in _SECTION_TYPES.items():
        if section in doc:
            kwargs[section] = _build_section(cls, doc[section], section)
    if "schemes" in doc:
        kwargs["schemes"] = tuple(SchemeId(s) for s in doc["schemes"])
    for key in ("drops", "out_dir"):
        if key in doc:
            kwargs[key] = doc[key]
    for key in ("eta_sweep", "d2d_sweep", "target_rates"):
        if key in doc:
            kwargs[key] = tuple(doc[key])
    return ExperimentConfig(**kwargs)


def drop_seeds(base_seed: int, drop: int) -> int:
    """Seed of one Monte Carlo drop, a pure function of (base seed, drop)."""
    ss = np.random.SeedSequence([int(base_seed), int(drop)])
    return int(ss.generate_state(1, np.uint64)[0])


def build_drop(config: ExperimentConfig, drop: int):
    """Generate layout, power and rate table of Monte Carlo drop ``drop``."""
    layout_seed = drop_seeds(config.scenario.rng_seed, drop)
    channel_seed = drop_seeds(config.channel.rng_seed, drop)
    scen = dataclasses.replace(config.scenario, rng_seed=layout_seed)
    chan = dataclasses.replace(config.channel, rng_seed=channel_seed)
    layout = generate_layout(scen)
    gains = compute_gains(layout, chan)
    power = allocate_power(layout, config.radio)
    rates = build_rate_table(gains, power, config.partition, config.radio)
    return layout, rates, power, (layout_seed, channel_seed)


def _run_schemes(config: ExperimentConfig, rates, power):
    """Assignments of every requested scheme; the solver runs first."""
    solve = None
    need_solver = (SchemeId.MAX_UTILITY in config.schemes
                   or SchemeId.RATE_BIAS in config.schemes)
    if need_solver:
        solve = solve_max_utility(rates, config.solver)
    out = {}
    for scheme in config.schemes:
        if scheme is SchemeId.MAX_UTILITY:
            out[scheme] = solve.final_x
        elif scheme is SchemeId.RATE_BIAS:
            out[scheme] = assoc_rate_bias(rates, solve.mu_star)
        elif scheme is SchemeId.MAX_RATE:
            out[scheme] = assoc_max_rate(rates)
        elif scheme is SchemeId.MAX_SINR:
            out[scheme] = assoc_max_sinr(rates)
        elif scheme is SchemeId.SINR_BIAS:
            out[scheme] = assoc_sinr_bias(rates, power)
    return out, solve


def _metric_row(drop: int, scheme: SchemeId, config: ExperimentConfig,
                report: MetricsReport) -> dict:
    row = {
        "drop": drop,
        "scheme": scheme.value,
        "eta": repr(config.partition.eta),
        "d2d_pairs": config.scenario.d2d_pairs_per_macrocell,
        "macrotier_users": report.counts.macrotier_users,
        "picotier_users": report.counts.picotier_users,
        "d2d_mode_users": report.counts.d2d_mode_users,
        "jain": repr(report.jain),
        "sum_utility": repr(report.sum_utility),
    }
    for rho in config.target_rates:
        row[coverage_column(rho)] = repr(report.coverage[float(rho)])
    return row


def coverage_column(rho) -> str:
    return f"coverage_{int(round(float(rho)))}"


def _write_csv(path, fieldnames, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def _aggregate(per_drop, schemes, target_rates):
    """Per-scheme mean and standard error of every scalar metric."""
    agg = {}
    for scheme in schemes:
        reports = [d[scheme] for d in per_drop]
        scalars = {
            "macrotier_users": [r.counts.macrotier_users for r in reports],
            "picotier_users": [r.counts.picotier_users for r in reports],
            "d2d_mode_users": [r.counts.d2d_mode_users for r in reports],
            "d2d_rx_on_bs": [r.counts.d2d_rx_on_bs for r in reports],
            "d2d_rx_on_tx": [r.counts.d2d_rx_on_tx for r in reports],
            "jain": [r.jain for r in reports],
            "sum_utility": [r.sum_utility for r in reports],
        }
        for rho in target_rates:
            scalars[coverage_column(rho)] = [r.coverage[float(rho)]
                                             for r in reports]
        agg[scheme.value] = {
            name: {"mean": float(np.mean(vals)),
                   "se": _standard_error(vals)}
            for name, vals in scalars.items()
        }
    return agg


def _standard_error(vals) -> float:
    a = np.asarray(vals, dtype=float)
    if a.size < 2:
        return 0.0
    return float(a.std(ddof=1) / np.sqrt(a.size))


def run_experiment(config: ExperimentConfig) -> RunReport:
    """Monte Carlo run of every requested scheme; writes CSVs and a report.

    Per drop: derive seeds, build the instance, associate under every
    scheme, compute metrics.  The solver's convergence trace lands in
    ``convergence.csv`` whenever it ran.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    metric_rows, conv_rows, sample_rows = [], [], []
    per_drop, ledger = [], []

    for drop in range(config.drops):
        layout, rates, power, seeds = build_drop(config, drop)
        ledger.append({"drop": drop, "layout_seed": seeds[0],
                       "channel_seed": seeds[1]})
        assignments, solve = _run_schemes(config, rates, power)

        if solve is not None:
            for t in range(solve.iterations_used):
                conv_rows.append({
                    "drop": drop,
                    "iteration": t,
                    "G": repr(float(solve.utility_trace[t])),
                    "I": repr(float(solve.dual_trace[t])),
                    "max_price_residual": repr(float(solve.residual_trace[t])),
                })

        reports = {}
        idx = layout.index
        roles = np.array([idx.rx_role(k) for k in range(idx.n_rx)], dtype=object)
        for scheme, x in assignments.items():
            report = compute_report(x, rates, layout, config.target_rates)
            reports[scheme] = report
            metric_rows.append(_metric_row(drop, scheme, config, report))
            for k in range(idx.n_rx):
                sample_rows.append({
                    "drop": drop,
                    "scheme": scheme.value,
                    "receiver_role": roles[k],
                    "rate_bps": repr(float(report.effective_rate_samples[k])),
                    "serving_tier": report.serving_tier[k],
                })
        per_drop.append(reports)

    metric_fields = ["drop", "scheme", "eta", "d2d_pairs", "macrotier_users",
                     "picotier_users", "d2d_mode_users", "jain", "sum_utility"]
    metric_fields += [coverage_column(rho) for rho in config.target_rates]
    _write_csv(os.path.join(config.out_dir, "metrics.csv"),
               metric_fields, metric_rows)
    _write_csv(os.path.join(config.out_dir, "convergence.csv"),
               ["drop", "iteration", "G", "I", "max_price_residual"], conv_rows)
    _write_csv(os.path.join(config.out_dir, "rates.csv"),
               ["drop", "scheme", "receiver_role", "rate_bps", "serving_tier"],
               sample_rows)

    aggregates = _aggregate(per_drop, config.schemes, config.target_rates)
    report = RunReport(config=config, seed_ledger=ledger,
                       per_drop=per_drop, aggregates=aggregates)
    _write_json_report(config, report)
    return report


def _config_echo(config: ExperimentConfig) -> dict:
    echo = dataclasses.asdict(config)
    echo["schemes"] = [s.value for s in config.schemes]
    return echo


def _write_json_report(config: ExperimentConfig, report: RunReport) -> None:
    doc = {
        "config": _config_echo(config),
        "seed_ledger": report.seed_ledger,
        "aggregates": report.aggregates,
    }
    path = os.path.join(config.out_dir, "report.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sweep_eta(config: ExperimentConfig, eta_values=None) -> dict:
    """Paired-seed sweep over the subband-2 fraction.

    Drop i reuses the identical layout and shadowing at every eta, so
    coverage differences are attributable to the partitioning alone.
    Returns {eta: RunReport} and writes ``coverage_vs_eta.csv``.
    """
    etas = tuple(config.eta_sweep if eta_values is None else eta_values)
    if not etas:
        raise ValueError("no eta values to sweep")
    reports = {}
    rows = []
    for eta in etas:
        sub = dataclasses.replace(
            config,
            partition=dataclasses.replace(config.partition, eta=float(eta)),
            out_dir=os.path.join(config.out_dir, f"eta_{eta!r}"),
            eta_sweep=(), d2d_sweep=())
        rep = run_experiment(sub)
        reports[eta] = rep
        for scheme in config.schemes:
            agg = rep.aggregates[scheme.value]
            for rho in config.target_rates:
                col = agg[coverage_column(rho)]
                rows.append({
                    "eta": repr(float(eta)),
                    "scheme": scheme.value,
                    "rho_bps": int(round(float(rho))),
                    "coverage_mean": repr(col["mean"]),
                    "coverage_se": repr(col["se"]),
                })
    os.makedirs(config.out_dir, exist_ok=True)
    _write_csv(os.path.join(config.out_dir, "coverage_vs_eta.csv"),
               ["eta", "scheme", "rho_bps", "coverage_mean", "coverage_se"],
               rows)
    return reports


def sweep_d2d(config: ExperimentConfig, pair_counts=None) -> dict:
    """Paired-seed sweep over the number of D2D pairs per macrocell.

    Returns {pairs: RunReport} and writes ``d2d_counts.csv`` with the mean
    split of D2D RXs between base stations and their own TXs.
    """
    counts = tuple(config.d2d_sweep if pair_counts is None else pair_counts)
    if not counts:
        raise ValueError("no pair counts to sweep")
    reports = {}
    rows = []
    for pairs in counts:
        sub = dataclasses.replace(
            config,
            scenario=dataclasses.replace(config.scenario,
                                         d2d_pairs_per_macrocell=int(pairs)),
            out_dir=os.path.join(config.out_dir, f"d2d_{int(pairs)}"),
            eta_sweep=(), d2d_sweep=())
        rep = run_experiment(sub)
        reports[pairs] = rep
        for scheme in config.schemes:
            agg = rep.aggregates[scheme.value]
            rows.append({
                "d2d_pairs": int(pairs),
                "scheme": scheme.value,
                "rx_on_bs_mean": repr(agg["d2d_rx_on_bs"]["mean"]),
                "rx_on_bs_se": repr(agg["d2d_rx_on_bs"]["se"]),
                "rx_on_tx_mean": repr(agg["d2d_rx_on_tx"]["mean"]),
                "rx_on_tx_se": repr(agg["d2d_rx_on_tx"]["se"]),
            })
    os.makedirs(config.out_dir, exist_ok=True)
    _write_csv(os.path.join(config.out_dir, "d2d_counts.csv"),
               ["d2d_pairs", "scheme", "rx_on_bs_mean", "rx_on_bs_se",
                "rx_on_tx_mean", "rx_on_tx_se"], rows)
    return reports
