"""Evaluation quantities: tier loads, Jain index, effective rates, coverage."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .phy import RateTable
from .solver import Assignment, primal_utility
from .topology import NetworkLayout, NodeIndexer


@dataclass(frozen=True)
class AssociationCounts:
    macrotier_users: int
    picotier_users: int
    d2d_mode_users: int
    d2d_rx_on_bs: int
    d2d_rx_on_tx: int


@dataclass(eq=False)
class MetricsReport:
    """Everything the experiment harness records for one (drop, scheme)."""

    counts: AssociationCounts
    jain: float
    jain_degenerate: bool
    sum_utility: float
    effective_rate_samples: np.ndarray  # (n_rx,) bps, receiver-index order
    serving_tier: np.ndarray            # (n_rx,) 'macro' | 'pico' | 'd2d'
    coverage: dict                      # target rate (bps) -> probability


def effective_rates(x: Assignment, rates: RateTable) -> np.ndarray:
    """Achievable rate of each receiver divided by its subband's head count.

    A D2D TX serves exactly its own RX, so D2D-mode receivers keep their
    full rate.
    """
    idx = rates.index
    k = np.arange(idx.n_rx)
    key = x.tx * 3 + (x.subband - 1)
    load = np.bincount(key, minlength=3 * idx.n_tx)[key]
    return rates.rate[x.tx, x.subband - 1, k] / load


def per_bs_loads(x: Assignment, index: NodeIndexer) -> np.ndarray:
    """Total receivers served per base station, over all subbands."""
    on_bs = x.tx < index.n_bs
    return np.bincount(x.tx[on_bs], minlength=index.n_bs).astype(float)


def jain_index(loads) -> float:
    """Jain's fairness index over per-BS loads; 1 is perfect balance.

    D2D TXs never enter (they serve at most their own RX).  The all-zero
    vector is defined as balanced so Monte Carlo averages stay total.
    """
    y = np.asarray(loads, dtype=float)
    if y.size == 0:
        raise ValueError("Jain index needs at least one base station")
    if np.any(y < 0):
        raise ValueError("loads must be non-negative")
    total = y.sum()
    if total == 0:
        return 1.0
    return float(total ** 2 / (y.size * (y ** 2).sum()))


def coverage_probability(samples, rho: float) -> float:
    """Fraction of receivers whose effective rate strictly exceeds ``rho``."""
    r = np.asarray(samples, dtype=float)
    if r.size == 0:
        raise ValueError("coverage undefined on an empty sample set")
    return float((r > rho).mean())


def rate_cdf(samples, grid) -> np.ndarray:
    """Empirical CDF P[R <= g] of the samples at the given grid points."""
    r = np.sort(np.asarray(samples, dtype=float))
    g = np.asarray(grid, dtype=float)
    if r.size == 0 or g.size == 0:
        raise ValueError("rate_cdf needs samples and a non-empty grid")
    if np.any(np.diff(g) < 0):
        raise ValueError("grid must be sorted ascending")
    return np.searchsorted(r, g, side="right") / r.size


def tier_and_d2d_counts(x: Assignment, layout: NetworkLayout) -> AssociationCounts:
    """Receivers per serving tier, with the D2D RXs split by serving node."""
    idx = layout.index
    macro = int((x.tx < idx.n_mbs).sum())
    pico = int(((x.tx >= idx.n_mbs) & (x.tx < idx.n_bs)).sum())
    d2d = int((x.subband == 3).sum())
    if idx.n_pairs > 0:
        rx_sb = x.subband[idx.d2d_rx_cols]
        on_tx = int((rx_sb == 3).sum())
    else:
        on_tx = 0
    return AssociationCounts(
        macrotier_users=macro,
        picotier_users=pico,
        d2d_mode_users=d2d,
        d2d_rx_on_bs=idx.n_pairs - on_tx,
        d2d_rx_on_tx=on_tx,
    )


def serving_tier_labels(x: Assignment, index: NodeIndexer) -> np.ndarray:
    labels = np.where(x.tx < index.n_mbs, "macro",
                      np.where(x.tx < index.n_bs, "pico", "d2d"))
    return labels.astype(object)


def compute_report(x: Assignment, rates: RateTable, layout: NetworkLayout,
                   target_rates) -> MetricsReport:
    """Bundle every §-metric of one assignment into a single record."""
    idx = layout.index
    counts = tier_and_d2d_counts(x, layout)
    loads = per_bs_loads(x, idx)
    samples = effective_rates(x, rates)
    coverage = {float(rho): coverage_probability(samples, rho)
                for rho in target_rates}
    return MetricsReport(
        counts=counts,
        jain=jain_index(loads),
        jain_degenerate=bool(loads.sum() == 0),
        sum_utility=primal_utility(x, rates),
        effective_rate_samples=samples,
        serving_tier=serving_tier_labels(x, idx),
        coverage=coverage,
    )
