"""Lossless export/import of solver instances for oracle replay.

The file is self-describing JSON with a format tag and version.  Floats are
written with full round-trip precision, so re-importing an instance
reproduces solver outputs exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .phy import PowerAllocation, RateTable
from .topology import NetworkLayout

FORMAT_TAG = "hetnet-d2d-instance"
FORMAT_VERSION = 1


@dataclass(eq=False)
class Instance:
    rates: RateTable
    layout: NetworkLayout
    power: PowerAllocation | None


def export_instance(rates: RateTable, layout: NetworkLayout, path,
                    power: PowerAllocation | None = None) -> None:
    """Write one instance (mask, SINR/rate tables, power, layout) to JSON."""
    if rates.rate is None or rates.log_rate is None:
        raise ValueError("rate table is incomplete; run compute_rates first")
    doc = {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "counts": {
            "mbs": layout.n_mbs,
            "pbs": layout.n_pbs,
            "cellular": layout.n_cellular,
            "pairs": layout.n_pairs,
        },
        "layout": {
            "mbs_xy": layout.mbs_xy.tolist(),
            "pbs_xy": layout.pbs_xy.tolist(),
            "cellular_xy": layout.cellular_xy.tolist(),
            "d2d_tx_xy": layout.d2d_tx_xy.tolist(),
            "d2d_rx_xy": layout.d2d_rx_xy.tolist(),
            "pair_map": np.asarray(layout.pair_map).tolist(),
        },
        "tables": {
            "available": rates.available.astype(int).tolist(),
            "sinr": rates.sinr.tolist(),
            "rate": rates.rate.tolist(),
            "log_rate": rates.log_rate.tolist(),
        },
        "power_mw": None if power is None else power.p.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def import_instance(path) -> Instance:
    """Read an instance file back; parse errors name the byte offset."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(
            f"instance parse error at byte {err.pos} of {path}: {err.msg}") from err

    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise ValueError(f"{path} is not a {FORMAT_TAG} file")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(
            f"unsupported instance version {doc.get('version')!r}; "
            f"this reader handles version {FORMAT_VERSION}")
    try:
        lay = doc["layout"]
        layout = NetworkLayout(
            mbs_xy=np.asarray(lay["mbs_xy"], dtype=float).reshape(-1, 2),
            pbs_xy=np.asarray(lay["pbs_xy"], dtype=float).reshape(-1, 2),
            cellular_xy=np.asarray(lay["cellular_xy"], dtype=float).reshape(-1, 2),
            d2d_tx_xy=np.asarray(lay["d2d_tx_xy"], dtype=float).reshape(-1, 2),
            d2d_rx_xy=np.asarray(lay["d2d_rx_xy"], dtype=float).reshape(-1, 2),
            pair_map=np.asarray(lay["pair_map"], dtype=int),
        )
        idx = layout.index
        counts = doc["counts"]
        if (counts["mbs"], counts["pbs"], counts["cellular"], counts["pairs"]) != (
                layout.n_mbs, layout.n_pbs, layout.n_cellular, layout.n_pairs):
            raise ValueError("counts header disagrees with the layout arrays")
        shape = (idx.n_tx, 3, idx.n_rx)
        tables = doc["tables"]
        rates = RateTable(
            available=np.asarray(tables["available"]).astype(bool).reshape(shape),
            sinr=np.asarray(tables["sinr"], dtype=float).reshape(shape),
            index=idx,
            rate=np.asarray(tables["rate"], dtype=float).reshape(shape),
            log_rate=np.asarray(tables["log_rate"], dtype=float).reshape(shape),
        )
        power = None
        if doc.get("power_mw") is not None:
            power = PowerAllocation(
                p=np.asarray(doc["power_mw"], dtype=float).reshape(idx.n_tx, 3),
                index=idx)
    except (KeyError, TypeError) as err:
        raise ValueError(f"malformed instance file {path}: {err}") from err
    return Instance(rates=rates, layout=layout, power=power)
