import dataclasses

import numpy as np
import pytest

from hetnet_d2d import (ChannelConfig, NodeIndexer, PartitionConfig,
                        RadioConfig, RateTable, ScenarioConfig,
                        allocate_power, build_rate_table, compute_gains,
                        generate_layout)


def make_index(n_mbs=0, n_pbs=0, n_cellular=0, n_pairs=0, pair_map=None):
    if pair_map is None:
        pair_map = np.arange(n_pairs)
    return NodeIndexer(n_mbs, n_pbs, n_cellular, n_pairs, np.asarray(pair_map))


def make_table(idx, c_bs=None, c_d2d=None):
    """Hand-built rate table from log-rate values.

    ``c_bs[(n, s, k)]`` sets the log-rate of a base-station triple,
    ``c_d2d[j]`` the log-rate of D2D pair j's direct link.  Availability
    follows the standard partitioning structure.
    """
    available = np.zeros((idx.n_tx, 3, idx.n_rx), dtype=bool)
    available[:idx.n_bs, 0, :] = True
    available[idx.n_mbs:idx.n_bs, 1, :] = True
    if idx.n_pairs:
        available[idx.pair_tx_global, 2, idx.d2d_rx_cols] = True
    log_rate = np.full((idx.n_tx, 3, idx.n_rx), np.log(1e-20))
    for (n, s, k), c in (c_bs or {}).items():
        log_rate[n, s - 1, k] = c
    for j, c in (c_d2d or {}).items():
        log_rate[idx.pair_tx_global[j], 2, idx.d2d_rx_cols[j]] = c
    rate = np.exp(log_rate)
    sinr = np.where(available, 1.0, 0.0)
    return RateTable(available=available, sinr=sinr, index=idx,
                     rate=rate, log_rate=log_rate)


def physical_instance(layout_seed, channel_seed, eta=0.5, **scenario_kw):
    scen = ScenarioConfig(rng_seed=layout_seed, **scenario_kw)
    layout = generate_layout(scen)
    gains = compute_gains(layout, ChannelConfig(rng_seed=channel_seed))
    radio = RadioConfig()
    power = allocate_power(layout, radio)
    rates = build_rate_table(gains, power, PartitionConfig(eta=eta), radio)
    return layout, rates, power


def tiny_instance(i, eta=0.5):
    """Acceptance-sized instance: 2 MBSs, 2 PBSs, 4 users, 2 D2D pairs."""
    return physical_instance(
        5000 + i, 6000 + i, eta=eta,
        macro_rows=2, macro_cols=1, pbs_per_macrocell=1,
        cellular_users_per_macrocell=2, d2d_pairs_per_macrocell=1)


@pytest.fixture
def default_instance():
    return physical_instance(1000, 2000)
