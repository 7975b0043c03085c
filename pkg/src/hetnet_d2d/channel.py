"""Large-scale link gains: log-distance pathloss plus log-normal shadowing.

Gains are frequency-flat: one linear gain per (transmitter, receiver) link,
reused by every subband.  Shadowing is drawn independently per link with a
standard deviation set by the transmitter's role.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .topology import NetworkLayout, NodeIndexer

# placeholder distance for a D2D TX paired with itself as receiver; the
# resulting gain entry is overwritten and masked out downstream
_SELF_LINK_M = 1000.0


@dataclass(frozen=True)
class ChannelConfig:
    """Shadowing standard deviations in dB, keyed by transmitter role."""

    macro_shadowing_std: float = 10.0
    pico_shadowing_std: float = 10.0
    d2d_shadowing_std: float = 12.0
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("macro_shadowing_std", "pico_shadowing_std",
                     "d2d_shadowing_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0 <= int(self.rng_seed) < 2 ** 64:
            raise ValueError("rng_seed must fit in an unsigned 64-bit integer")


@dataclass(eq=False)
class ChannelGains:
    """Dense linear power gains, rows = transmitters, columns = receivers."""

    gain: np.ndarray  # (n_tx, n_rx), dimensionless, > 0
    index: NodeIndexer


def pathloss_macro_db(d_km):
    """Macro-tier pathloss 128.1 + 37.6 log10(d), d in kilometers."""
    d = np.asarray(d_km, dtype=float)
    if np.any(d <= 0):
        raise ValueError("pathloss undefined for non-positive distance")
    return 128.1 + 37.6 * np.log10(d)


def pathloss_pico_d2d_db(d_km):
    """Pico/D2D pathloss 140.7 + 36.7 log10(d), d in kilometers."""
    d = np.asarray(d_km, dtype=float)
    if np.any(d <= 0):
        raise ValueError("pathloss undefined for non-positive distance")
    return 140.7 + 36.7 * np.log10(d)


def compute_gains(layout: NetworkLayout, config: ChannelConfig) -> ChannelGains:
    """Gain table for every (transmitter, receiver) link of a drop.

    Each link gets ``10**(-(PL(d) + X)/10)`` with one independent shadowing
    draw ``X ~ N(0, sigma^2)`` in dB; sigma is 10 dB behind MBS/PBS rows and
    12 dB behind D2D TX rows by default.  Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(config.rng_seed)
    idx = layout.index
    txp = layout.tx_positions()
    rxp = layout.rx_positions()
    if idx.n_tx == 0 or idx.n_rx == 0:
        return ChannelGains(np.empty((idx.n_tx, idx.n_rx)), idx)

    dist = np.hypot(txp[:, None, 0] - rxp[None, :, 0],
                    txp[:, None, 1] - rxp[None, :, 1])

    # a D2D TX is its own receiver at distance zero; every other coincidence
    # is a degenerate drop
    self_rows = idx.n_bs + np.arange(idx.n_pairs)
    self_cols = idx.n_cellular + np.arange(idx.n_pairs)
    dist[self_rows, self_cols] = _SELF_LINK_M
    if np.any(dist <= 0):
        raise ValueError("zero distance between distinct nodes")

    d_km = dist / 1000.0
    pl = np.empty_like(dist)
    pl[:idx.n_mbs] = pathloss_macro_db(d_km[:idx.n_mbs])
    pl[idx.n_mbs:] = pathloss_pico_d2d_db(d_km[idx.n_mbs:])

    std = np.concatenate([
        np.full(idx.n_mbs, config.macro_shadowing_std),
        np.full(idx.n_pbs, config.pico_shadowing_std),
        np.full(idx.n_pairs, config.d2d_shadowing_std),
    ])
    shadow = rng.standard_normal((idx.n_tx, idx.n_rx)) * std[:, None]

    gain = 10.0 ** (-(pl + shadow) / 10.0)
    gain[self_rows, self_cols] = 1.0
    return ChannelGains(gain, idx)
