"""Resource partitioning, equal power allocation and the SINR/rate tables.

The band splits into three subbands: subband 1 (MBS + PBS), subband 2 (PBS
only) and subband 3 (D2D only, one PRB wide).  Every dBm/dB quantity is
converted to linear units here, once; all downstream tables are linear.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelGains
from .topology import NetworkLayout, NodeIndexer


def dbm_to_mw(value_dbm):
    return 10.0 ** (np.asarray(value_dbm, dtype=float) / 10.0)


@dataclass(frozen=True)
class PartitionConfig:
    """Bandwidth split.  ``eta`` is the fraction of W1 given to subband 2."""

    system_bandwidth: float = 10e6   # Hz
    prb_bandwidth: float = 180e3     # Hz, subband 3
    eta: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if self.prb_bandwidth <= 0:
            raise ValueError("prb_bandwidth must be positive")
        if self.w1 <= 0:
            raise ValueError("system bandwidth must exceed the PRB bandwidth")

    @property
    def w1(self) -> float:
        return self.system_bandwidth - self.prb_bandwidth

    @property
    def b2(self) -> float:
        return self.eta * self.w1

    @property
    def b1(self) -> float:
        # complement of b2 so that b1 + b2 + b3 == system_bandwidth exactly
        return self.w1 - self.b2

    @property
    def b3(self) -> float:
        return self.prb_bandwidth

    def subband_bandwidths(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3])


@dataclass(frozen=True)
class RadioConfig:
    """Transmit powers, noise density and the rate floor."""

    mbs_power_dbm: float = 46.0
    pbs_power_dbm: float = 30.0
    d2d_power_dbm: float = 20.0
    noise_psd_dbm_hz: float = -174.0
    rate_floor: float = 1e-20  # bps, added to every achievable rate

    def __post_init__(self):
        if self.rate_floor <= 0:
            raise ValueError("rate_floor must be positive")

    def noise_mw(self, bandwidth_hz: float) -> float:
        return float(dbm_to_mw(self.noise_psd_dbm_hz) * bandwidth_hz)


@dataclass(eq=False)
class PowerAllocation:
    """Per-(transmitter, subband) transmit power in mW; zero = unused."""

    p: np.ndarray  # (n_tx, 3)
    index: NodeIndexer


@dataclass(eq=False)
class RateTable:
    """SINR, rate and log-rate over (transmitter, subband, receiver).

    ``available`` marks the associations the partitioning permits; entries
    outside the mask hold a zero SINR and the floor rate, and are never read
    by the solvers.  ``rate`` and ``log_rate`` stay ``None`` until
    :func:`compute_rates` fills them.
    """

    available: np.ndarray        # (n_tx, 3, n_rx) bool
    sinr: np.ndarray             # linear, 0 outside the mask
    index: NodeIndexer
    rate: np.ndarray | None = None      # bps
    log_rate: np.ndarray | None = None  # natural log of rate


def allocate_power(layout: NetworkLayout, radio: RadioConfig) -> PowerAllocation:
    """Equal split of each transmitter's power over its employed subbands.

    MBSs employ subband 1 only, PBSs split between subbands 1 and 2, D2D TXs
    employ subband 3 only.
    """
    idx = layout.index
    p = np.zeros((idx.n_tx, 3))
    p[:idx.n_mbs, 0] = dbm_to_mw(radio.mbs_power_dbm)
    p[idx.n_mbs:idx.n_bs, 0] = dbm_to_mw(radio.pbs_power_dbm) / 2.0
    p[idx.n_mbs:idx.n_bs, 1] = dbm_to_mw(radio.pbs_power_dbm) / 2.0
    p[idx.n_bs:, 2] = dbm_to_mw(radio.d2d_power_dbm)
    return PowerAllocation(p, idx)


def compute_sinr(gains: ChannelGains, power: PowerAllocation,
                 part: PartitionConfig, radio: RadioConfig) -> RateTable:
    """SINR and availability tables under the three-subband partitioning.

    Subband 1 sums interference over all other MBSs/PBSs, subband 2 over all
    other PBSs, subband 3 over all other D2D TXs (always-on pilots).  A zero
    denominator (eta at an endpoint with no interferer on the affected
    subband) is rejected as degenerate.
    """
    idx = gains.index
    if power.p.shape != (idx.n_tx, 3):
        raise ValueError("power table does not match the gain table")
    g = gains.gain
    available = np.zeros((idx.n_tx, 3, idx.n_rx), dtype=bool)
    sinr = np.zeros((idx.n_tx, 3, idx.n_rx))

    # subband 1: every MBS and PBS towards every receiver
    if idx.n_bs > 0 and idx.n_rx > 0:
        rx_pow = power.p[:idx.n_bs, 0:1] * g[:idx.n_bs, :]
        total = rx_pow.sum(axis=0)
        den = (total[None, :] - rx_pow) + radio.noise_mw(part.b1)
        if np.any(den <= 0):
            raise ValueError(
                "subband 1 SINR degenerate: zero noise (eta = 1) and no interferer")
        sinr[:idx.n_bs, 0, :] = rx_pow / den
        available[:idx.n_bs, 0, :] = True

    # subband 2: every PBS towards every receiver
    if idx.n_pbs > 0 and idx.n_rx > 0:
        rx_pow = power.p[idx.n_mbs:idx.n_bs, 1:2] * g[idx.n_mbs:idx.n_bs, :]
        total = rx_pow.sum(axis=0)
        den = (total[None, :] - rx_pow) + radio.noise_mw(part.b2)
        if np.any(den <= 0):
            raise ValueError(
                "subband 2 SINR degenerate: zero noise (eta = 0) and no interferer")
        sinr[idx.n_mbs:idx.n_bs, 1, :] = rx_pow / den
        available[idx.n_mbs:idx.n_bs, 1, :] = True

    # subband 3: each D2D TX towards its own RX only
    if idx.n_pairs > 0:
        rx_cols = idx.d2d_rx_cols
        rx_pow = power.p[idx.n_bs:, 2:3] * g[idx.n_bs:, rx_cols]
        total = rx_pow.sum(axis=0)
        sig = rx_pow[idx.pair_map, np.arange(idx.n_pairs)]
        den = (total - sig) + radio.noise_mw(part.b3)
        sinr[idx.pair_tx_global, 2, rx_cols] = sig / den
        available[idx.pair_tx_global, 2, rx_cols] = True

    return RateTable(available=available, sinr=sinr, index=idx)


def compute_rates(table: RateTable, part: PartitionConfig,
                  radio: RadioConfig) -> RateTable:
    """Shannon rates with the subband's bandwidth, floored at ``rate_floor``.

    Unavailable triples get rate 0 before the floor is added, so their rate
    is exactly the floor and their log-rate is finite.
    """
    b = part.subband_bandwidths()
    rate = np.where(table.available,
                    b[None, :, None] * np.log2(1.0 + table.sinr),
                    0.0)
    rate = rate + radio.rate_floor
    return replace(table, rate=rate, log_rate=np.log(rate))


def build_rate_table(gains: ChannelGains, power: PowerAllocation,
                     part: PartitionConfig, radio: RadioConfig) -> RateTable:
    """SINR pass followed by the rate pass; the usual entry point."""
    return compute_rates(compute_sinr(gains, power, part, radio), part, radio)
