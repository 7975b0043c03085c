"""All five association schemes on one drop, side by side.

Shows the load-balancing story in miniature: SINR- and rate-chasing pile
everyone onto the macro stations, the price-based utility solver and its
Rate-Bias twin spread the load, SINR Bias spreads it even more.
"""

import numpy as np

from hetnet_d2d import (ChannelConfig, PartitionConfig, RadioConfig,
                        ScenarioConfig, allocate_power, assoc_max_rate,
                        assoc_max_sinr, assoc_rate_bias, assoc_sinr_bias,
                        build_rate_table, compute_gains, generate_layout,
                        jain_index, per_bs_loads, solve_max_utility,
                        tier_and_d2d_counts)

lay = generate_layout(ScenarioConfig(rng_seed=7))
gains = compute_gains(lay, ChannelConfig(rng_seed=11))
radio = RadioConfig()
power = allocate_power(lay, radio)
rates = build_rate_table(gains, power, PartitionConfig(eta=0.5), radio)

result = solve_max_utility(rates)
print(f"utility solver: {result.iterations_used} rounds, "
      f"converged={result.converged}, best G={result.utility_trace.max():.1f}")

schemes = {
    "max_utility": result.final_x,
    "rate_bias": assoc_rate_bias(rates, result.mu_star),
    "max_rate": assoc_max_rate(rates),
    "max_sinr": assoc_max_sinr(rates),
    "sinr_bias": assoc_sinr_bias(rates, power),
}

print(f"{'scheme':<12} {'macro':>6} {'pico':>6} {'d2d':>5} {'jain':>7}")
for name, x in schemes.items():
    c = tier_and_d2d_counts(x, lay)
    j = jain_index(per_bs_loads(x, lay.index))
    print(f"{name:<12} {c.macrotier_users:>6} {c.picotier_users:>6} "
          f"{c.d2d_mode_users:>5} {j:>7.3f}")

# Rate Bias replays the utility solver's final choices exactly
same = np.array_equal(schemes["rate_bias"].tx, result.last_x.tx) and \
    np.array_equal(schemes["rate_bias"].subband, result.last_x.subband)
print(f"rate_bias == utility solver's final-round choices: {same}")
