import dataclasses
import json
import os

import numpy as np
import pytest

from hetnet_d2d import (ExperimentConfig, ScenarioConfig, SchemeId,
                        brute_force_oracle, build_drop, export_instance,
                        import_instance, load_config, run_experiment,
                        solve_max_utility, sweep_d2d, sweep_eta)
from hetnet_d2d.cli import main as cli_main

TINY = dict(macro_rows=1, macro_cols=2, pbs_per_macrocell=1,
            cellular_users_per_macrocell=3, d2d_pairs_per_macrocell=1,
            rng_seed=11)


def tiny_config(out_dir, **kw):
    base = dict(
        scenario=ScenarioConfig(**TINY),
        schemes=(SchemeId.MAX_SINR,),
        drops=1,
        out_dir=str(out_dir),
    )
    base.update(kw)
    return ExperimentConfig(**base)


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_smoke_run_writes_csvs(tmp_path):
    config = tiny_config(tmp_path / "out")
    report = run_experiment(config)
    out = tmp_path / "out"
    metrics = (out / "metrics.csv").read_text().splitlines()
    assert len(metrics) == 2  # header + one drop x one scheme
    assert metrics[0].startswith("drop,scheme,eta,d2d_pairs,macrotier_users")
    assert (out / "rates.csv").exists()
    assert (out / "convergence.csv").exists()
    assert (out / "report.json").exists()
    assert report.aggregates["max_sinr"]["jain"]["se"] == 0.0


def test_identical_configs_are_byte_identical(tmp_path):
    c1 = tiny_config(tmp_path / "out", drops=2,
                     schemes=tuple(SchemeId))
    run_experiment(c1)
    first = {f: read(tmp_path / "out" / f)
             for f in ("metrics.csv", "rates.csv", "convergence.csv",
                       "report.json")}
    run_experiment(c1)
    for f, blob in first.items():
        assert read(tmp_path / "out" / f) == blob


def test_seed_ledger_prefix_stability(tmp_path):
    # removing the last drop never changes earlier drops' rows
    c3 = tiny_config(tmp_path / "a", drops=3)
    c2 = tiny_config(tmp_path / "b", drops=2)
    run_experiment(c3)
    run_experiment(c2)
    rows3 = (tmp_path / "a" / "metrics.csv").read_text().splitlines()
    rows2 = (tmp_path / "b" / "metrics.csv").read_text().splitlines()
    assert rows3[:3] == rows2[:3]


def test_paired_eta_sweep_shares_layout_and_shadowing(tmp_path):
    config = tiny_config(tmp_path / "out")
    for eta in (0.2, 0.8):
        sub = dataclasses.replace(
            config, partition=dataclasses.replace(config.partition, eta=eta))
        layout, rates, _, seeds = build_drop(sub, 0)
        if eta == 0.2:
            ref_pos, ref_seeds = layout.rx_positions(), seeds
        else:
            np.testing.assert_array_equal(layout.rx_positions(), ref_pos)
            assert seeds == ref_seeds


def test_sweep_eta_writes_coverage_table(tmp_path):
    config = tiny_config(tmp_path / "out", schemes=(SchemeId.MAX_RATE,))
    reports = sweep_eta(config, [0.0, 0.5, 0.5])
    table = (tmp_path / "out" / "coverage_vs_eta.csv").read_text().splitlines()
    # header + 2 distinct etas x 4 rhos + repeated eta rows identical
    rows_05 = [r for r in table[1:] if r.startswith("0.5,")]
    assert len(rows_05) == 8
    assert rows_05[:4] == rows_05[4:]
    assert (tmp_path / "out" / "eta_0.0" / "metrics.csv").exists()
    assert (tmp_path / "out" / "eta_0.5" / "metrics.csv").exists()


def test_sweep_d2d_writes_counts_table(tmp_path):
    config = tiny_config(tmp_path / "out")
    sweep_d2d(config, [1, 2])
    table = (tmp_path / "out" / "d2d_counts.csv").read_text().splitlines()
    assert table[0] == ("d2d_pairs,scheme,rx_on_bs_mean,rx_on_bs_se,"
                        "rx_on_tx_mean,rx_on_tx_se")
    assert len(table) == 3


def test_rate_bias_requires_max_utility():
    with pytest.raises(ValueError):
        ExperimentConfig(schemes=(SchemeId.RATE_BIAS,))


def test_config_file_roundtrip_and_unknown_keys(tmp_path):
    good = {
        "scenario": {"macro_rows": 1, "macro_cols": 1, "pbs_per_macrocell": 1,
                     "cellular_users_per_macrocell": 2,
                     "d2d_pairs_per_macrocell": 1, "rng_seed": 5},
        "partition": {"eta": 0.3},
        "schemes": ["max_sinr", "max_rate"],
        "drops": 2,
        "target_rates": [500000.0],
        "out_dir": str(tmp_path / "o"),
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(good))
    config = load_config(p)
    assert config.partition.eta == 0.3
    assert config.schemes == (SchemeId.MAX_SINR, SchemeId.MAX_RATE)
    assert config.drops == 2

    bad_top = dict(good, extra_knob=1)
    p.write_text(json.dumps(bad_top))
    with pytest.raises(ValueError, match="extra_knob"):
        load_config(p)

    bad_section = dict(good, scenario=dict(good["scenario"], typo_key=2))
    p.write_text(json.dumps(bad_section))
    with pytest.raises(ValueError, match="typo_key"):
        load_config(p)


def test_instance_roundtrip_reproduces_solver(tmp_path):
    config = tiny_config(tmp_path / "out")
    layout, rates, power, _ = build_drop(config, 0)
    path = tmp_path / "inst.json"
    export_instance(rates, layout, path, power=power)
    inst = import_instance(path)

    np.testing.assert_array_equal(inst.rates.available, rates.available)
    np.testing.assert_array_equal(inst.rates.rate, rates.rate)
    np.testing.assert_array_equal(inst.power.p, power.p)
    np.testing.assert_array_equal(inst.layout.pair_map, layout.pair_map)

    a = solve_max_utility(rates)
    b = solve_max_utility(inst.rates)
    np.testing.assert_array_equal(a.final_x.tx, b.final_x.tx)
    assert a.utility_trace.max() == b.utility_trace.max()


def test_handwritten_instance_feeds_the_oracle(tmp_path):
    doc = {
        "format": "hetnet-d2d-instance",
        "version": 1,
        "counts": {"mbs": 1, "pbs": 0, "cellular": 2, "pairs": 0},
        "layout": {
            "mbs_xy": [[0.0, 0.0]],
            "pbs_xy": [],
            "cellular_xy": [[10.0, 0.0], [20.0, 0.0]],
            "d2d_tx_xy": [],
            "d2d_rx_xy": [],
            "pair_map": [],
        },
        "tables": {
            "available": [[[1, 1], [0, 0], [0, 0]]],
            "sinr": [[[3.0, 1.0], [0.0, 0.0], [0.0, 0.0]]],
            "rate": [[[8e6, 5e6], [1e-20, 1e-20], [1e-20, 1e-20]]],
            "log_rate": [[[np.log(8e6), np.log(5e6)],
                          [np.log(1e-20)] * 2, [np.log(1e-20)] * 2]],
        },
        "power_mw": [[10 ** 4.6, 0.0, 0.0]],
    }
    path = tmp_path / "hand.json"
    path.write_text(json.dumps(doc))
    inst = import_instance(path)
    x, g = brute_force_oracle(inst.rates)
    assert g == pytest.approx(np.log(8e6) + np.log(5e6) - 2 * np.log(2.0))


def test_truncated_instance_names_byte_offset(tmp_path):
    config = tiny_config(tmp_path / "out")
    layout, rates, power, _ = build_drop(config, 0)
    path = tmp_path / "inst.json"
    export_instance(rates, layout, path)
    blob = path.read_bytes()[: 1000]
    path.write_bytes(blob)
    with pytest.raises(ValueError, match="byte"):
        import_instance(path)


def test_version_mismatch_rejected(tmp_path):
    path = tmp_path / "v9.json"
    path.write_text(json.dumps({"format": "hetnet-d2d-instance", "version": 9}))
    with pytest.raises(ValueError, match="version"):
        import_instance(path)
    path.write_text(json.dumps({"format": "other"}))
    with pytest.raises(ValueError):
        import_instance(path)


def test_cli_run_and_oracle_check(tmp_path, capsys):
    out = tmp_path / "cli_out"
    cfg = {
        "scenario": {"macro_rows": 1, "macro_cols": 2, "pbs_per_macrocell": 1,
                     "cellular_users_per_macrocell": 3,
                     "d2d_pairs_per_macrocell": 1, "rng_seed": 11},
        "schemes": ["max_sinr"],
        "drops": 1,
        "out_dir": str(out),
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert cli_main(["run", "--config", str(p)]) == 0
    assert (out / "metrics.csv").exists()

    assert cli_main(["oracle-check", "--instances", "2", "--seed", "3"]) == 0
    captured = capsys.readouterr()
    assert "within 5%" in captured.out


def test_cli_sweeps(tmp_path):
    out = tmp_path / "sweep_out"
    cfg = {
        "scenario": {"macro_rows": 1, "macro_cols": 2, "pbs_per_macrocell": 1,
                     "cellular_users_per_macrocell": 2,
                     "d2d_pairs_per_macrocell": 1, "rng_seed": 4},
        "schemes": ["max_rate"],
        "drops": 1,
        "out_dir": str(out),
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert cli_main(["sweep-eta", "--config", str(p),
                     "--eta", "0.2", "--eta", "0.6"]) == 0
    assert (out / "coverage_vs_eta.csv").exists()
    assert cli_main(["sweep-d2d", "--config", str(p),
                     "--pairs", "1", "--pairs", "2"]) == 0
    assert (out / "d2d_counts.csv").exists()


def test_cli_export_instance_and_error_path(tmp_path, capsys):
    dest = tmp_path / "inst.json"
    assert cli_main(["export-instance", "--path", str(dest), "--seed", "2"]) == 0
    assert dest.exists()
    # malformed config file -> nonzero exit with a message
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli_main(["run", "--config", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err
