"""One random network drop, drawn.

Generates the default deployment (2x2 macro grid, pico stations, cellular
users and D2D pairs scattered into each macrocell) and plots who sits
where.  Output lands in demo_out/.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from hetnet_d2d import ScenarioConfig, generate_layout

cfg = ScenarioConfig(rng_seed=7)
lay = generate_layout(cfg)
print(f"{lay.n_mbs} MBSs, {lay.n_pbs} PBSs, {lay.n_cellular} cellular users, "
      f"{lay.n_pairs} D2D pairs")

# sanity: every D2D receiver sits 10..50 m from its transmitter
d = np.linalg.norm(lay.d2d_tx_xy - lay.d2d_rx_xy, axis=1)
print(f"D2D link distances: min {d.min():.1f} m, max {d.max():.1f} m")

fig, ax = plt.subplots(figsize=(7, 7))
ax.scatter(*lay.cellular_xy.T, s=8, c="0.6", label="cellular user")
ax.scatter(*lay.d2d_tx_xy.T, s=18, c="tab:green", marker="^", label="D2D TX")
ax.scatter(*lay.d2d_rx_xy.T, s=18, c="tab:olive", marker="v", label="D2D RX")
ax.scatter(*lay.pbs_xy.T, s=60, c="tab:blue", marker="s", label="PBS")
ax.scatter(*lay.mbs_xy.T, s=160, c="tab:red", marker="*", label="MBS")
for tx, rx in zip(lay.d2d_tx_xy, lay.d2d_rx_xy):
    ax.plot([tx[0], rx[0]], [tx[1], rx[1]], c="tab:green", lw=0.5, alpha=0.5)

half = cfg.inter_site_distance / 2
for cx, cy in lay.mbs_xy:
    ax.add_patch(plt.Rectangle((cx - half, cy - half), 2 * half, 2 * half,
                               fill=False, ls=":", ec="0.8"))
ax.set_xlabel("x [m]")
ax.set_ylabel("y [m]")
ax.set_aspect("equal")
ax.legend(loc="upper right", fontsize=8)
ax.set_title("Default network drop (seed 7)")

os.makedirs("demo_out", exist_ok=True)
fig.savefig("demo_out/01_network_drop.png", dpi=150, bbox_inches="tight")
print("wrote demo_out/01_network_drop.png")
