"""Render hetnet-d2d experiment CSVs into the standard result figures.

Each figure id names one plot family and the CSV schema it consumes; the
renderer never recomputes metrics, it only displays what the experiment
harness wrote.  Layouts are deterministic: fixed figure size, groups
sorted by name.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

TIER_COLUMNS = ("macrotier_users", "picotier_users", "d2d_mode_users")

REQUIRED_COLUMNS = {
    "tier_loads": {"scheme", *TIER_COLUMNS},
    "lbi": {"scheme", "jain"},
    "d2d_counts": {"d2d_pairs", "scheme", "rx_on_bs_mean", "rx_on_tx_mean"},
    "rate_cdf_all": {"scheme", "rate_bps"},
    "rate_cdf_macro": {"scheme", "rate_bps", "serving_tier"},
    "coverage_vs_eta": {"eta", "scheme", "rho_bps", "coverage_mean"},
    "convergence": {"drop", "iteration", "G", "I"},
}

FIGURE_IDS = tuple(sorted(REQUIRED_COLUMNS))


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_csv: str
    output_image: str

    def __post_init__(self):
        if self.figure_id not in REQUIRED_COLUMNS:
            raise ValueError(f"unknown figure id {self.figure_id!r}; "
                             f"expected one of {', '.join(FIGURE_IDS)}")


def read_rows(path, required):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = set(reader.fieldnames or ())
        missing = required - header
        if missing:
            raise ValueError(
                f"{path} lacks required column(s) {sorted(missing)}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path} holds no data rows")
    return rows


def cdf_layer(samples):
    """Empirical CDF as plotted: sorted sample points, P[R <= x] at each."""
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ValueError("no rate samples")
    p = np.arange(1, x.size + 1) / x.size
    return x, p


def _schemes(rows):
    return sorted({r["scheme"] for r in rows})


def _mean_by_scheme(rows, column):
    out = {}
    for s in _schemes(rows):
        vals = [float(r[column]) for r in rows if r["scheme"] == s]
        out[s] = float(np.mean(vals))
    return out


def _fig(width=6.5, height=4.0):
    return plt.subplots(figsize=(width, height))


def _render_tier_loads(rows, ax):
    schemes = _schemes(rows)
    width = 0.8 / len(TIER_COLUMNS)
    base = np.arange(len(schemes))
    labels = ("macrotier", "picotier", "D2D mode")
    for j, (col, label) in enumerate(zip(TIER_COLUMNS, labels)):
        means = _mean_by_scheme(rows, col)
        ax.bar(base + j * width, [means[s] for s in schemes], width,
               label=label)
    ax.set_xticks(base + width)
    ax.set_xticklabels(schemes, rotation=20)
    ax.set_ylabel("mean users served")
    ax.legend()


def _render_lbi(rows, ax):
    means = _mean_by_scheme(rows, "jain")
    schemes = _schemes(rows)
    ax.bar(range(len(schemes)), [means[s] for s in schemes], 0.6)
    ax.set_xticks(range(len(schemes)))
    ax.set_xticklabels(schemes, rotation=20)
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("load balancing index (Jain)")


def _render_d2d_counts(rows, ax):
    for s in _schemes(rows):
        sub = sorted((int(r["d2d_pairs"]), float(r["rx_on_tx_mean"]))
                     for r in rows if r["scheme"] == s)
        x, y = zip(*sub)
        ax.plot(x, y, "o-", label=s)
    ax.set_xlabel("D2D pairs per macrocell")
    ax.set_ylabel("mean D2D RXs served by their TX")
    ax.legend()


def _render_rate_cdf(rows, ax, macro_only=False):
    for s in _schemes(rows):
        samples = [float(r["rate_bps"]) for r in rows
                   if r["scheme"] == s
                   and (not macro_only or r["serving_tier"] == "macro")]
        if not samples:
            continue
        x, p = cdf_layer(samples)
        ax.step(np.asarray(x) / 1e6, p, where="post", label=s)
    if not ax.lines and not ax.collections:
        raise ValueError("no samples matched the figure's filter")
    ax.set_xlabel("effective rate [Mbps]")
    ax.set_ylabel("CDF")
    ax.set_ylim(0.0, 1.02)
    ax.legend(loc="lower right")


def _render_coverage_vs_eta(rows, ax):
    combos = sorted({(r["scheme"], int(r["rho_bps"])) for r in rows})
    for scheme, rho in combos:
        sub = sorted((float(r["eta"]), float(r["coverage_mean"]))
                     for r in rows
                     if r["scheme"] == scheme and int(r["rho_bps"]) == rho)
        x, y = zip(*sub)
        label = f"{scheme}, rho={rho / 1e6:g} Mbps"
        ax.plot(x, y, "o-", label=label)
    ax.set_xlabel(r"subband-2 fraction $\eta$")
    ax.set_ylabel("coverage probability")
    ax.set_ylim(0.0, 1.02)
    ax.legend(fontsize=8)


def _render_convergence(rows, ax):
    drops = sorted({int(r["drop"]) for r in rows})
    for d in drops:
        sub = sorted((int(r["iteration"]), float(r["G"]), float(r["I"]))
                     for r in rows if int(r["drop"]) == d)
        t, g, i = zip(*sub)
        first = d == drops[0]
        ax.plot(t, g, "-", color="tab:blue", alpha=1.0 if first else 0.35,
                label="G (sum utility)" if first else None)
        ax.plot(t, i, "--", color="tab:orange", alpha=1.0 if first else 0.35,
                label="I (dual value)" if first else None)
    ax.set_xlabel("iteration")
    ax.set_ylabel("network-wide utility")
    ax.legend()


def render(spec: FigureSpec) -> str:
    """Render one figure; returns the written image path."""
    rows = read_rows(spec.input_csv, REQUIRED_COLUMNS[spec.figure_id])
    fig, ax = _fig()
    if spec.figure_id == "tier_loads":
        _render_tier_loads(rows, ax)
    elif spec.figure_id == "lbi":
        _render_lbi(rows, ax)
    elif spec.figure_id == "d2d_counts":
        _render_d2d_counts(rows, ax)
    elif spec.figure_id == "rate_cdf_all":
        _render_rate_cdf(rows, ax)
    elif spec.figure_id == "rate_cdf_macro":
        _render_rate_cdf(rows, ax, macro_only=True)
    elif spec.figure_id == "coverage_vs_eta":
        _render_coverage_vs_eta(rows, ax)
    elif spec.figure_id == "convergence":
        _render_convergence(rows, ax)
    ax.grid(alpha=0.3)
    fig.savefig(spec.output_image, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return spec.output_image
