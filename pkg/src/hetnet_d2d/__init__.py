"""Simulator and association solvers for D2D-enabled two-tier cellular networks."""

from .topology import NetworkLayout, NodeIndexer, ScenarioConfig, generate_layout
from .channel import (ChannelConfig, ChannelGains, compute_gains,
                      pathloss_macro_db, pathloss_pico_d2d_db)
from .phy import (PartitionConfig, PowerAllocation, RadioConfig, RateTable,
                  allocate_power, build_rate_table, compute_rates, compute_sinr,
                  dbm_to_mw)
from .solver import (Assignment, SolveResult, SolverConfig, brute_force_oracle,
                     bs_load_update, bs_price_update, dual_subgradient,
                     dual_value, option_loads, primal_utility, priced_options,
                     select_assignment, solve_max_utility, user_choice)
from .baselines import (SchemeId, assoc_max_rate, assoc_max_sinr,
                        assoc_rate_bias, assoc_sinr_bias)
from .metrics import (AssociationCounts, MetricsReport, compute_report,
                      coverage_probability, effective_rates, jain_index,
                      per_bs_loads, rate_cdf, tier_and_d2d_counts)
from .harness import (ExperimentConfig, RunReport, build_drop, load_config,
                      run_experiment, sweep_d2d, sweep_eta)
from .instance_io import Instance, export_instance, import_instance

__version__ = "0.1.0"
