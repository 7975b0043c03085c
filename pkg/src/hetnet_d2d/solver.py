"""Utility-maximizing association via dual decomposition.

Users and base stations exchange congestion prices: each round every
receiver picks the option maximizing ``c - mu`` (a D2D RX falls back to its
own TX when that beats the best base-station score), then every priced
(transmitter, subband) pair refreshes its KKT load ``exp(mu - 1)`` and moves
its price along the supply/demand residual.  A brute-force enumerator over
small instances serves as the optimality oracle.

Priced pairs are subband 1 of every MBS and PBS plus subband 2 of every
PBS, ordered lexicographically by (transmitter index, subband); price and
load vectors use that order throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .phy import RateTable
from .topology import NodeIndexer

# iterations inspected by the stopping rule
CONVERGENCE_WINDOW = 10

_ORACLE_BLOCK = 1 << 17


@dataclass(frozen=True)
class SolverConfig:
    stepsize_xi: float = 0.01
    max_iterations: int = 500
    convergence_tol: float = 1e-3
    mu_init: float = 0.0

    def __post_init__(self):
        if self.stepsize_xi <= 0:
            raise ValueError("stepsize_xi must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_tol < 0:
            raise ValueError("convergence_tol must be >= 0")


@dataclass(eq=False)
class Assignment:
    """One association per receiver: transmitter index and subband (1..3)."""

    tx: np.ndarray
    subband: np.ndarray

    def __len__(self) -> int:
        return len(self.tx)


@dataclass(eq=False)
class SolveResult:
    """Iterates and traces of one dual-decomposition run.

    ``final_x`` is the feasible iterate with the highest utility seen (the
    subgradient method is not monotone); ``last_x`` is the final round's
    assignment, i.e. the user choices under ``mu_star``.
    """

    final_x: Assignment
    last_x: Assignment
    mu_star: np.ndarray
    utility_trace: np.ndarray    # G(x^t)
    dual_trace: np.ndarray       # I(mu^t)
    mu_trace: np.ndarray         # (T, n_priced)
    demand_trace: np.ndarray     # (T, n_priced)
    residual_trace: np.ndarray   # max |y - demand| per round
    converged: bool
    iterations_used: int


def priced_options(index: NodeIndexer):
    """(transmitter, subband) pairs carrying a price, in (n, s) order."""
    tx = list(range(index.n_mbs))
    sb = [1] * index.n_mbs
    for i in range(index.n_pbs):
        n = index.n_mbs + i
        tx += [n, n]
        sb += [1, 2]
    return np.asarray(tx, dtype=int), np.asarray(sb, dtype=int)


def _option_lookup(index: NodeIndexer):
    """Map (transmitter, subband-1) to its priced-option id, -1 elsewhere."""
    opt_tx, opt_sb = priced_options(index)
    lut = np.full((index.n_tx, 3), -1, dtype=int)
    lut[opt_tx, opt_sb - 1] = np.arange(len(opt_tx))
    return opt_tx, opt_sb, lut


def _bs_option_values(values: np.ndarray, index: NodeIndexer) -> np.ndarray:
    """Gather a (n_tx, 3, n_rx) table into (n_priced, n_rx) option rows."""
    opt_tx, opt_sb = priced_options(index)
    return values[opt_tx, opt_sb - 1, :]


def _d2d_option_values(values: np.ndarray, index: NodeIndexer) -> np.ndarray:
    """Per D2D RX ordinal, the value of its own TX on subband 3."""
    return values[index.pair_tx_global, 2, index.d2d_rx_cols]


def select_assignment(bs_scores: np.ndarray, d2d_scores: np.ndarray,
                      index: NodeIndexer) -> Assignment:
    """Shared selection skeleton of every association scheme.

    ``bs_scores`` has one row per priced option in (n, s) order;
    ``d2d_scores`` has one entry per D2D RX ordinal.  Each receiver takes
    the best base-station option (ties to the lowest transmitter index,
    then the lowest subband); a D2D RX switches to its own TX only when
    that strictly beats the best base-station score.
    """
    n_rx = index.n_rx
    if bs_scores.ndim != 2 or bs_scores.shape[1] != n_rx or bs_scores.shape[0] == 0:
        raise ValueError("no base-station option available")
    opt_tx, opt_sb = priced_options(index)
    best = np.argmax(bs_scores, axis=0)
    cols = np.arange(n_rx)
    best_val = bs_scores[best, cols]
    tx = opt_tx[best].copy()
    sb = opt_sb[best].copy()
    if index.n_pairs > 0:
        rx_cols = index.d2d_rx_cols
        take = best_val[rx_cols] < d2d_scores
        tx[rx_cols[take]] = index.pair_tx_global[take]
        sb[rx_cols[take]] = 3
    if np.any(np.isneginf(best_val) & (sb != 3)):
        raise ValueError("receiver left without a usable association option")
    return Assignment(tx=tx, subband=sb)


def user_choice(k: int, rates: RateTable, mu: np.ndarray):
    """Best option of receiver ``k`` under prices ``mu`` -> (n, s).

    Cellular users and D2D TXs maximize ``c - mu`` over base-station
    options; a D2D RX additionally switches to its own TX when ``c`` there
    strictly beats the best base-station utility.
    """
    idx = rates.index
    opt_tx, opt_sb = priced_options(idx)
    if len(opt_tx) == 0:
        raise ValueError("receiver has no available association option")
    mu = np.asarray(mu, dtype=float)
    util = rates.log_rate[opt_tx, opt_sb - 1, k] - mu
    best = int(np.argmax(util))
    n, s = int(opt_tx[best]), int(opt_sb[best])
    if idx.rx_role(k) == "D2D_RX":
        j = k - idx.n_cellular - idx.n_pairs
        own_tx = int(idx.pair_tx_global[j])
        if util[best] < rates.log_rate[own_tx, 2, k]:
            return own_tx, 3
    return n, s


def bs_load_update(mu_ns):
    """KKT-optimal load of a priced pair: ``exp(mu - 1)``."""
    return np.exp(np.asarray(mu_ns, dtype=float) - 1.0)


def bs_price_update(mu_ns, y_ns, demand, xi: float):
    """Subgradient price step ``mu - xi * (y - demand)``."""
    if xi <= 0:
        raise ValueError("stepsize must be positive")
    return np.asarray(mu_ns, dtype=float) - xi * (np.asarray(y_ns, dtype=float)
                                                  - np.asarray(demand, dtype=float))


def option_loads(x: Assignment, index: NodeIndexer) -> np.ndarray:
    """Realized demand per priced pair, i.e. the per-(n, s) head counts."""
    _, _, lut = _option_lookup(index)
    ids = lut[x.tx, x.subband - 1]
    ids = ids[ids >= 0]
    return np.bincount(ids, minlength=index.n_mbs + 2 * index.n_pbs).astype(float)


def primal_utility(x: Assignment, rates: RateTable) -> float:
    """Network-wide utility G of a feasible assignment.

    Sum of ``c - log(load)`` over base-station associations plus ``c`` over
    D2D-mode receivers; empty priced pairs contribute nothing.
    """
    idx = rates.index
    k = np.arange(idx.n_rx)
    if len(x) != idx.n_rx:
        raise ValueError("assignment does not cover every receiver")
    if not rates.available[x.tx, x.subband - 1, k].all():
        raise ValueError("assignment uses unavailable (n, s, k) triples")
    csum = rates.log_rate[x.tx, x.subband - 1, k].sum()
    loads = option_loads(x, idx)
    busy = loads > 0
    penalty = (loads[busy] * np.log(loads[busy])).sum()
    return float(csum - penalty)


def dual_value(mu: np.ndarray, rates: RateTable) -> float:
    """Lagrangian dual I(mu): per-receiver best scores plus sum of exp(mu-1)."""
    idx = rates.index
    mu = np.asarray(mu, dtype=float)
    util = _bs_option_values(rates.log_rate, idx) - mu[:, None]
    best = util.max(axis=0)
    if idx.n_pairs > 0:
        rx_cols = idx.d2d_rx_cols
        best[rx_cols] = np.maximum(best[rx_cols],
                                   _d2d_option_values(rates.log_rate, idx))
    return float(best.sum() + bs_load_update(mu).sum())


def dual_subgradient(mu: np.ndarray, rates: RateTable) -> np.ndarray:
    """Subgradient of I at mu: KKT loads minus the demands chosen under mu."""
    idx = rates.index
    mu = np.asarray(mu, dtype=float)
    util = _bs_option_values(rates.log_rate, idx) - mu[:, None]
    x = select_assignment(util, _d2d_option_values(rates.log_rate, idx), idx)
    return bs_load_update(mu) - option_loads(x, idx)


def _window_converged(history, tol: float) -> bool:
    if len(history) < CONVERGENCE_WINDOW:
        return False
    w = np.asarray(history[-CONVERGENCE_WINDOW:])
    spread = w.max() - w.min()
    scale = max(abs(float(w.mean())), 1e-30)
    return bool(spread / scale < tol)


def solve_max_utility(rates: RateTable,
                      cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Synchronous-round price exchange between receivers and base stations.

    Each round broadcasts ``mu``, lets every receiver choose, aggregates the
    demands, refreshes the KKT loads and steps the prices.  Stops when the
    relative spread of the utility over the last 10 rounds drops below the
    tolerance, or at the iteration cap; returns the best-utility iterate.
    """
    idx = rates.index
    opt_tx, opt_sb = priced_options(idx)
    if len(opt_tx) == 0:
        raise ValueError("no priced association option in the instance")
    bs_c = _bs_option_values(rates.log_rate, idx)
    d2d_c = _d2d_option_values(rates.log_rate, idx)

    mu = np.full(len(opt_tx), float(cfg.mu_init))
    utilities, duals, mus, demands, residuals = [], [], [], [], []
    best_g = -np.inf
    best_x = None
    x = None
    converged = False

    for t in range(cfg.max_iterations):
        x = select_assignment(bs_c - mu[:, None], d2d_c, idx)
        g = primal_utility(x, rates)
        if not np.isfinite(g):
            raise ValueError("non-finite utility; the rate table is corrupt")
        demand = option_loads(x, idx)
        y = bs_load_update(mu)

        utilities.append(g)
        duals.append(dual_value(mu, rates))
        mus.append(mu.copy())
        demands.append(demand)
        residuals.append(float(np.abs(y - demand).max()))
        if g > best_g:
            best_g = g
            best_x = x

        if _window_converged(utilities, cfg.convergence_tol):
            converged = True
            break
        if t + 1 == cfg.max_iterations:
            break
        mu = bs_price_update(mu, y, demand, cfg.stepsize_xi)

    return SolveResult(
        final_x=best_x,
        last_x=x,
        mu_star=mu.copy(),
        utility_trace=np.asarray(utilities),
        dual_trace=np.asarray(duals),
        mu_trace=np.asarray(mus),
        demand_trace=np.asarray(demands),
        residual_trace=np.asarray(residuals),
        converged=converged,
        iterations_used=len(utilities),
    )


def brute_force_oracle(rates: RateTable, cap: int = 10_000_000):
    """Exhaustive optimum (x*, G*) of the association problem.

    Every receiver independently picks one of its available options; the
    full cartesian product is scored in blocks.  Ties go to the
    lexicographically smallest assignment (per-receiver options in (n, s)
    order, the D2D option last).  Refuses instances whose product of option
    counts exceeds ``cap``.
    """
    idx = rates.index
    opt_tx, opt_sb, _ = _option_lookup(idx)
    n_bs_opts = len(opt_tx)
    if n_bs_opts == 0:
        raise ValueError("no base-station option to enumerate")
    n_rx = idx.n_rx

    n_opts = np.full(n_rx, n_bs_opts, dtype=np.int64)
    if idx.n_pairs > 0:
        n_opts[idx.d2d_rx_cols] += 1
    total = 1
    for n in n_opts:
        total *= int(n)
    if total > cap:
        raise ValueError(
            f"instance needs {total} assignments, above the enumeration cap {cap}")

    # per-receiver option scores; column n_bs_opts is the D2D option
    copt = np.zeros((n_rx, n_bs_opts + 1))
    copt[:, :n_bs_opts] = _bs_option_values(rates.log_rate, idx).T
    if idx.n_pairs > 0:
        copt[idx.d2d_rx_cols, n_bs_opts] = _d2d_option_values(rates.log_rate, idx)

    suffix = np.ones(n_rx, dtype=np.int64)
    for k in range(n_rx - 2, -1, -1):
        suffix[k] = suffix[k + 1] * n_opts[k + 1]

    yln = np.zeros(n_rx + 1)
    counts_range = np.arange(1, n_rx + 1)
    yln[1:] = counts_range * np.log(counts_range)

    best_g = -np.inf
    best_flat = 0
    for lo in range(0, total, _ORACLE_BLOCK):
        hi = min(lo + _ORACLE_BLOCK, total)
        flat = np.arange(lo, hi, dtype=np.int64)
        rows = np.arange(hi - lo)
        csum = np.zeros(hi - lo)
        counts = np.zeros((hi - lo, n_bs_opts), dtype=np.int32)
        for k in range(n_rx):
            ck = (flat // suffix[k]) % n_opts[k]
            csum += copt[k, ck]
            on_bs = ck < n_bs_opts
            counts[rows[on_bs], ck[on_bs]] += 1
        g = csum - yln[counts].sum(axis=1)
        j = int(np.argmax(g)) if len(g) else 0
        if len(g) and g[j] > best_g:
            best_g = float(g[j])
            best_flat = lo + j

    tx = np.zeros(n_rx, dtype=int)
    sb = np.zeros(n_rx, dtype=int)
    for k in range(n_rx):
        ck = int((best_flat // suffix[k]) % n_opts[k])
        if ck < n_bs_opts:
            tx[k], sb[k] = int(opt_tx[ck]), int(opt_sb[ck])
        else:
            j = k - idx.n_cellular - idx.n_pairs
            tx[k], sb[k] = int(idx.pair_tx_global[j]), 3
    x = Assignment(tx=tx, subband=sb)
    return x, primal_utility(x, rates)
