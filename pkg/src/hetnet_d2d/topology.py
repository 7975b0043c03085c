"""Reproducible random drops of a two-tier cellular network with D2D pairs.

Macro base stations (MBSs) sit on a rectangular grid, one square macrocell
(side = inter-site distance) centered on each of them.  Pico base stations
(PBSs), cellular users and D2D pairs are scattered uniformly and
independently into each macrocell; a D2D receiver is placed at a uniform
angle and uniform distance from its transmitter, inside the same cell.

Index conventions used by every dense table downstream:

* transmitters are stacked ``MBS | PBS | D2D TX``,
* receivers are stacked ``cellular | D2D TX (as receiver) | D2D RX``,
* ``pair_map[j]`` is the D2D TX ordinal serving D2D RX ordinal ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# rejection-sampling budget per placed entity
_MAX_TRIES = 10_000


@dataclass(frozen=True)
class ScenarioConfig:
    """Deployment knobs for one network drop.  Distances are in meters."""

    macro_rows: int = 2
    macro_cols: int = 2
    inter_site_distance: float = 1000.0
    pbs_per_macrocell: int = 6
    cellular_users_per_macrocell: int = 60
    d2d_pairs_per_macrocell: int = 15
    d2d_min_distance: float = 10.0
    d2d_max_distance: float = 50.0
    min_user_bs_distance: float = 10.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.macro_rows < 1 or self.macro_cols < 1:
            raise ValueError("macro grid needs at least one cell")
        if self.inter_site_distance <= 0:
            raise ValueError("inter_site_distance must be positive")
        for name in ("pbs_per_macrocell", "cellular_users_per_macrocell",
                     "d2d_pairs_per_macrocell"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 < self.d2d_min_distance < self.d2d_max_distance:
            raise ValueError("need 0 < d2d_min_distance < d2d_max_distance")
        if self.min_user_bs_distance < 0:
            raise ValueError("min_user_bs_distance must be >= 0")
        if not 0 <= int(self.rng_seed) < 2 ** 64:
            raise ValueError("rng_seed must fit in an unsigned 64-bit integer")


@dataclass(eq=False)
class NodeIndexer:
    """Index bookkeeping shared by the gain, power and rate tables.

    Every D2D TX owns two indices: a transmitter index (``n_bs + ordinal``)
    and a receiver index (``n_cellular + ordinal``); both refer to the same
    physical node.
    """

    n_mbs: int
    n_pbs: int
    n_cellular: int
    n_pairs: int
    pair_map: np.ndarray  # (n_pairs,) D2D RX ordinal -> D2D TX ordinal

    @property
    def n_bs(self) -> int:
        return self.n_mbs + self.n_pbs

    @property
    def n_tx(self) -> int:
        return self.n_bs + self.n_pairs

    @property
    def n_rx(self) -> int:
        return self.n_cellular + 2 * self.n_pairs

    @property
    def d2d_rx_cols(self) -> np.ndarray:
        """Receiver indices of the D2D RXs, ordered by RX ordinal."""
        start = self.n_cellular + self.n_pairs
        return np.arange(start, start + self.n_pairs)

    @property
    def pair_tx_global(self) -> np.ndarray:
        """Transmitter index of each D2D RX's own TX, ordered by RX ordinal."""
        return self.n_bs + np.asarray(self.pair_map)

    def tx_role(self, n: int) -> str:
        if n < 0 or n >= self.n_tx:
            raise IndexError(f"transmitter index {n} out of range")
        if n < self.n_mbs:
            return "MBS"
        if n < self.n_bs:
            return "PBS"
        return "D2D_TX"

    def rx_role(self, k: int) -> str:
        if k < 0 or k >= self.n_rx:
            raise IndexError(f"receiver index {k} out of range")
        if k < self.n_cellular:
            return "CELLULAR"
        if k < self.n_cellular + self.n_pairs:
            return "D2D_TX"
        return "D2D_RX"


@dataclass(eq=False)
class NetworkLayout:
    """Node positions for one drop, all in meters."""

    mbs_xy: np.ndarray        # (n_mbs, 2)
    pbs_xy: np.ndarray        # (n_pbs, 2)
    cellular_xy: np.ndarray   # (n_cellular, 2)
    d2d_tx_xy: np.ndarray     # (n_pairs, 2)
    d2d_rx_xy: np.ndarray     # (n_pairs, 2)
    pair_map: np.ndarray      # (n_pairs,) RX ordinal -> TX ordinal

    @property
    def n_mbs(self) -> int:
        return len(self.mbs_xy)

    @property
    def n_pbs(self) -> int:
        return len(self.pbs_xy)

    @property
    def n_cellular(self) -> int:
        return len(self.cellular_xy)

    @property
    def n_pairs(self) -> int:
        return len(self.d2d_tx_xy)

    @property
    def index(self) -> NodeIndexer:
        return NodeIndexer(self.n_mbs, self.n_pbs, self.n_cellular,
                           self.n_pairs, np.asarray(self.pair_map))

    def bs_positions(self) -> np.ndarray:
        return np.vstack([self.mbs_xy, self.pbs_xy])

    def tx_positions(self) -> np.ndarray:
        """Positions stacked in transmitter-index order."""
        return np.vstack([self.mbs_xy, self.pbs_xy, self.d2d_tx_xy])

    def rx_positions(self) -> np.ndarray:
        """Positions stacked in receiver-index order."""
        return np.vstack([self.cellular_xy, self.d2d_tx_xy, self.d2d_rx_xy])


def _cell_centers(config: ScenarioConfig) -> np.ndarray:
    isd = config.inter_site_distance
    jj, ii = np.meshgrid(np.arange(config.macro_cols),
                         np.arange(config.macro_rows))
    return np.column_stack([jj.ravel() * isd, ii.ravel() * isd]).astype(float)


def _draw_in_cell(rng, center, half):
    return center + rng.uniform(-half, half, size=2)


def _clear_of_bs(point, bs_xy, min_dist):
    if len(bs_xy) == 0 or min_dist <= 0:
        return True
    d = np.hypot(bs_xy[:, 0] - point[0], bs_xy[:, 1] - point[1])
    return bool(d.min() >= min_dist)


def _draw_user(rng, center, half, bs_xy, min_dist):
    for _ in range(_MAX_TRIES):
        p = _draw_in_cell(rng, center, half)
        if _clear_of_bs(p, bs_xy, min_dist):
            return p
    raise RuntimeError(
        "could not place a user outside the base-station exclusion radius "
        f"after {_MAX_TRIES} draws; the scenario is infeasible")


def _inside_cell(point, center, half):
    return (abs(point[0] - center[0]) <= half
            and abs(point[1] - center[1]) <= half)


def generate_layout(config: ScenarioConfig) -> NetworkLayout:
    """Generate one random drop.  Deterministic for a fixed ``rng_seed``.

    Users (cellular, D2D TX and D2D RX alike) drawn closer than
    ``min_user_bs_distance`` to any base station are redrawn.  The D2D RX is
    redrawn until it falls inside its TX's macrocell as well; if a TX admits
    no valid RX placement, the whole pair is redrawn.
    """
    rng = np.random.default_rng(config.rng_seed)
    half = config.inter_site_distance / 2.0
    centers = _cell_centers(config)
    mbs_xy = centers.copy()

    # PBSs first so that user exclusion can consider every base station
    pbs_xy = np.empty((len(centers) * config.pbs_per_macrocell, 2))
    pos = 0
    for c in centers:
        for _ in range(config.pbs_per_macrocell):
            pbs_xy[pos] = _draw_in_cell(rng, c, half)
            pos += 1

    bs_xy = np.vstack([mbs_xy, pbs_xy])
    min_dist = config.min_user_bs_distance

    cellular_xy = np.empty((len(centers) * config.cellular_users_per_macrocell, 2))
    pos = 0
    for c in centers:
        for _ in range(config.cellular_users_per_macrocell):
            cellular_xy[pos] = _draw_user(rng, c, half, bs_xy, min_dist)
            pos += 1

    n_pairs = len(centers) * config.d2d_pairs_per_macrocell
    d2d_tx_xy = np.empty((n_pairs, 2))
    d2d_rx_xy = np.empty((n_pairs, 2))
    pos = 0
    for c in centers:
        for _ in range(config.d2d_pairs_per_macrocell):
            tx, rx = _draw_pair(rng, c, half, bs_xy, config)
            d2d_tx_xy[pos] = tx
            d2d_rx_xy[pos] = rx
            pos += 1

    return NetworkLayout(
        mbs_xy=mbs_xy,
        pbs_xy=pbs_xy,
        cellular_xy=cellular_xy,
        d2d_tx_xy=d2d_tx_xy,
        d2d_rx_xy=d2d_rx_xy,
        pair_map=np.arange(n_pairs),
    )


def _draw_pair(rng, center, half, bs_xy, config: ScenarioConfig):
    min_dist = config.min_user_bs_distance
    for _ in range(_MAX_TRIES):
        tx = _draw_user(rng, center, half, bs_xy, min_dist)
        rx = _draw_rx(rng, tx, center, half, bs_xy, config)
        if rx is not None:
            return tx, rx
    raise RuntimeError(
        f"could not place a D2D pair after {_MAX_TRIES} draws; "
        "the scenario is infeasible")


def _draw_rx(rng, tx, center, half, bs_xy, config: ScenarioConfig):
    for _ in range(_MAX_TRIES):
        d = rng.uniform(config.d2d_min_distance, config.d2d_max_distance)
        ang = rng.uniform(0.0, 2.0 * np.pi)
        rx = tx + d * np.array([np.cos(ang), np.sin(ang)])
        if (_inside_cell(rx, center, half)
                and _clear_of_bs(rx, bs_xy, config.min_user_bs_distance)):
            return rx
    return None
