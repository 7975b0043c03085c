import numpy as np
import pytest

from hetnet_d2d import (compute_report, coverage_probability, effective_rates,
                        jain_index, per_bs_loads, rate_cdf,
                        tier_and_d2d_counts, solve_max_utility)
from hetnet_d2d.solver import Assignment

from conftest import make_index, make_table, physical_instance


def test_effective_rates_share_the_subband():
    idx = make_index(n_mbs=1, n_cellular=5)
    rates = make_table(idx, {(0, 1, k): np.log(10e6) for k in range(5)})
    x = Assignment(np.zeros(5, dtype=int), np.ones(5, dtype=int))
    r = effective_rates(x, rates)
    assert np.allclose(r, 2e6)


def test_effective_rate_sole_user_keeps_rate():
    idx = make_index(n_mbs=1, n_cellular=1)
    rates = make_table(idx, {(0, 1, 0): np.log(7e6)})
    x = Assignment(np.array([0]), np.array([1]))
    assert effective_rates(x, rates)[0] == pytest.approx(7e6)


def test_effective_rate_d2d_mode_load_one():
    idx = make_index(n_mbs=1, n_pairs=1)
    rx = idx.d2d_rx_cols[0]
    rates = make_table(idx, {(0, 1, idx.n_cellular): 1.0}, {0: np.log(360e3)})
    x = Assignment(np.array([0, idx.n_bs]), np.array([1, 3]))
    assert effective_rates(x, rates)[rx] == pytest.approx(360e3)


def test_jain_examples():
    assert jain_index([5, 5, 5, 5]) == pytest.approx(1.0)
    assert jain_index([10, 0, 0, 0]) == pytest.approx(0.25)
    # oracle: 16 / (2 * 10)
    assert jain_index([3, 1]) == pytest.approx(0.8)
    assert jain_index([0, 0]) == 1.0
    with pytest.raises(ValueError):
        jain_index([])


def test_jain_bounds_and_scale_invariance():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n = rng.integers(1, 30)
        y = rng.uniform(0.0, 10.0, size=n)
        if y.sum() == 0:
            continue
        j = jain_index(y)
        assert 1.0 / n - 1e-12 <= j <= 1.0 + 1e-12
        assert jain_index(3.7 * y) == pytest.approx(j)
    assert jain_index(np.full(7, 4.2)) == pytest.approx(1.0)


def test_coverage_examples():
    samples = np.array([1e6, 2e6, 3e6, 4e6])
    assert coverage_probability(samples, 2.5e6) == pytest.approx(0.5)
    assert coverage_probability(samples, 0.0) == 1.0
    assert coverage_probability(samples, 5e6) == 0.0
    with pytest.raises(ValueError):
        coverage_probability([], 1.0)


def test_rate_cdf_examples():
    assert rate_cdf([1.0, 2.0, 3.0], [2.0])[0] == pytest.approx(2 / 3)
    assert rate_cdf([1.0, 2.0, 3.0], [0.5])[0] == 0.0
    assert rate_cdf([1.0, 2.0, 3.0], [3.0])[0] == 1.0
    with pytest.raises(ValueError):
        rate_cdf([1.0], [2.0, 1.0])


def test_cdf_monotone_with_limits():
    rng = np.random.default_rng(4)
    samples = rng.exponential(1e6, size=500)
    grid = np.linspace(0.0, samples.max(), 64)
    cdf = rate_cdf(samples, grid)
    assert np.all(np.diff(cdf) >= 0)
    assert cdf[0] <= 1e-12
    assert cdf[-1] == 1.0


def test_coverage_complements_cdf_at_continuity_points():
    rng = np.random.default_rng(9)
    samples = np.unique(rng.uniform(0.0, 1e7, size=300))
    for rho in rng.uniform(0.0, 1e7, size=20):
        assert (coverage_probability(samples, rho)
                + rate_cdf(samples, [rho])[0]) == pytest.approx(1.0)


def test_tier_counts_examples():
    idx = make_index(n_mbs=2, n_cellular=3)
    rates = make_table(idx, {(n, 1, k): 1.0 for n in range(2) for k in range(3)})

    class Lay:  # only the index is consulted
        index = idx
    x = Assignment(np.array([0, 1, 0]), np.array([1, 1, 1]))
    c = tier_and_d2d_counts(x, Lay())
    assert (c.macrotier_users, c.picotier_users, c.d2d_mode_users) == (3, 0, 0)

    idx2 = make_index(n_mbs=1, n_pbs=1, n_pairs=1)
    class Lay2:
        index = idx2
    x2 = Assignment(np.array([1, idx2.n_bs]), np.array([1, 3]))
    c2 = tier_and_d2d_counts(x2, Lay2())
    assert (c2.macrotier_users, c2.picotier_users, c2.d2d_mode_users) == (0, 1, 1)
    assert (c2.d2d_rx_on_bs, c2.d2d_rx_on_tx) == (0, 1)


def test_tier_counts_total_and_effective_rate_consistency():
    layout, rates, power = physical_instance(42, 43)
    result = solve_max_utility(rates)
    x = result.final_x
    c = tier_and_d2d_counts(x, layout)
    idx = layout.index
    assert (c.macrotier_users + c.picotier_users + c.d2d_mode_users) == idx.n_rx
    assert c.d2d_rx_on_bs + c.d2d_rx_on_tx == idx.n_pairs

    # sum of effective rates on one (n, s) equals sum of rates over its load
    r_eff = effective_rates(x, rates)
    k = np.arange(idx.n_rx)
    r_raw = rates.rate[x.tx, x.subband - 1, k]
    for n in range(idx.n_bs):
        for s in (1, 2):
            members = (x.tx == n) & (x.subband == s)
            y = members.sum()
            if y == 0:
                continue
            assert r_eff[members].sum() == pytest.approx(r_raw[members].sum() / y)


def test_compute_report_bundles_everything():
    layout, rates, power = physical_instance(7, 8)
    result = solve_max_utility(rates)
    rep = compute_report(result.final_x, rates, layout, [0.25e6, 0.5e6])
    idx = layout.index
    assert rep.effective_rate_samples.shape == (idx.n_rx,)
    assert set(rep.coverage) == {0.25e6, 0.5e6}
    assert all(0.0 <= v <= 1.0 for v in rep.coverage.values())
    assert rep.sum_utility == pytest.approx(result.utility_trace.max())
    assert not rep.jain_degenerate
    loads = per_bs_loads(result.final_x, idx)
    assert loads.sum() + rep.counts.d2d_mode_users == idx.n_rx
