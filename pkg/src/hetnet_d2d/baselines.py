"""Comparison association schemes.

All four baselines reuse the selection skeleton of the utility solver and
differ only in how an option is scored, so performance differences reflect
the scoring rule alone.
"""

from __future__ import annotations

import enum

import numpy as np

from .phy import PowerAllocation, RateTable
from .solver import (Assignment, _bs_option_values, _d2d_option_values,
                     priced_options, select_assignment)


class SchemeId(enum.Enum):
    MAX_UTILITY = "max_utility"
    MAX_RATE = "max_rate"
    MAX_SINR = "max_sinr"
    RATE_BIAS = "rate_bias"
    SINR_BIAS = "sinr_bias"


def assoc_max_rate(rates: RateTable) -> Assignment:
    """Every receiver chases the highest achievable rate."""
    return select_assignment(_bs_option_values(rates.rate, rates.index),
                             _d2d_option_values(rates.rate, rates.index),
                             rates.index)


def assoc_max_sinr(rates: RateTable) -> Assignment:
    """Every receiver chases the highest SINR, blind to bandwidth."""
    return select_assignment(_bs_option_values(rates.sinr, rates.index),
                             _d2d_option_values(rates.sinr, rates.index),
                             rates.index)


def assoc_rate_bias(rates: RateTable, mu_star: np.ndarray) -> Assignment:
    """Rates biased by ``exp(-mu*)`` with converged utility-solver prices.

    Equivalent to the utility solver's choices under the same prices: the
    log transform is monotone, so the argmax is unchanged.
    """
    idx = rates.index
    opt_tx, _ = priced_options(idx)
    mu_star = np.asarray(mu_star, dtype=float)
    if mu_star.shape != (len(opt_tx),):
        raise ValueError("mu_star must hold one converged price per priced pair")
    bs = _bs_option_values(rates.rate, idx) * np.exp(-mu_star)[:, None]
    return select_assignment(bs, _d2d_option_values(rates.rate, idx), idx)


def assoc_sinr_bias(rates: RateTable, power: PowerAllocation) -> Assignment:
    """SINR divided by transmit power; unpowered subbands are skipped."""
    idx = rates.index
    opt_tx, opt_sb = priced_options(idx)
    p_opt = power.p[opt_tx, opt_sb - 1]
    bs = np.where(p_opt[:, None] > 0,
                  _bs_option_values(rates.sinr, idx)
                  / np.where(p_opt[:, None] > 0, p_opt[:, None], 1.0),
                  -np.inf)
    p3 = power.p[idx.pair_tx_global, 2]
    d2d = np.where(p3 > 0,
                   _d2d_option_values(rates.sinr, idx) / np.where(p3 > 0, p3, 1.0),
                   -np.inf)
    return select_assignment(bs, d2d, idx)
