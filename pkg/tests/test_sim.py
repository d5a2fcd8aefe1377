import csv

import numpy as np
import pytest

from hybridbeam.sim import (
    ExperimentConfig,
    SweepPoint,
    aggregate,
    run_experiment,
    run_point,
    trial_entropy,
    write_records_csv,
    write_summary_csv,
)

TINY = dict(
    n_tx=8, n_rx=4, l_tx=2, l_rx=2, n_streams=2,
    snr_db=(10.0,), gamma_tx=(0.001,), gamma_rx=(0.5,),
    trials=2, base_seed=7,
)


def test_config_validation():
    with pytest.raises(ValueError, match="no schemes"):
        ExperimentConfig(schemes=())
    with pytest.raises(ValueError, match="unknown scheme"):
        ExperimentConfig(schemes=("nonsense",))
    with pytest.raises(ValueError, match="l_tx"):
        ExperimentConfig(n_streams=6, l_tx=5)
    cfg = ExperimentConfig(schemes=("hybrid_4bit",))
    assert cfg.schemes == ("hybrid_4bit",)


def test_trial_entropy_stable_and_point_local():
    p1 = SweepPoint(10.0, 0.001, 0.5)
    p2 = SweepPoint(20.0, 0.001, 0.5)
    assert trial_entropy(1, p1, 0) == trial_entropy(1, p1, 0)
    assert trial_entropy(1, p1, 0) != trial_entropy(1, p1, 1)
    assert trial_entropy(1, p1, 0) != trial_entropy(1, p2, 0)
    assert trial_entropy(1, p1, 0) != trial_entropy(2, p1, 0)


def test_run_point_one_record_per_scheme():
    cfg = ExperimentConfig(**TINY, schemes=("proposed",))
    records = run_point(cfg, cfg.sweep[0], 0)
    assert len(records) == 1
    rec = records[0]
    assert rec.status == "ok"
    assert rec.ee == pytest.approx(rec.se / (rec.p_tx + rec.p_rx), rel=1e-12)


def test_run_point_paired_channels():
    cfg = ExperimentConfig(**TINY, schemes=("proposed", "hybrid_1bit", "digital"))
    records = run_point(cfg, cfg.sweep[0], 0)
    hashes = {r.channel_hash for r in records}
    assert len(hashes) == 1


def test_run_point_deterministic():
    cfg = ExperimentConfig(**TINY, schemes=("proposed", "hybrid_8bit"))
    a = run_point(cfg, cfg.sweep[0], 1)
    b = run_point(cfg, cfg.sweep[0], 1)
    for ra, rb in zip(a, b):
        assert ra.se == rb.se and ra.ee == rb.ee
        assert np.array_equal(ra.bits_tx, rb.bits_tx)


def test_run_point_records_scheme_failure():
    # an impossible brute-force budget fails that record, others continue
    cfg = ExperimentConfig(**TINY, schemes=("proposed", "brute_force"), bf_max_combos=1)
    records = run_point(cfg, cfg.sweep[0], 0)
    by_scheme = {r.scheme: r for r in records}
    assert by_scheme["proposed"].status == "ok"
    assert by_scheme["brute_force"].status.startswith("error")
    assert np.isnan(by_scheme["brute_force"].ee)


def test_run_experiment_order_and_workers():
    cfg = ExperimentConfig(**TINY, schemes=("hybrid_1bit",))
    serial = run_experiment(cfg, workers=1)
    parallel = run_experiment(cfg, workers=2)
    assert [r.trial for r in serial] == [r.trial for r in parallel]
    assert all(a.se == b.se for a, b in zip(serial, parallel))


def test_aggregate_statistics():
    cfg = ExperimentConfig(**{**TINY, "trials": 3}, schemes=("hybrid_2bit",))
    records = run_experiment(cfg)
    rows = aggregate(records)
    assert len(rows) == 1
    row = rows[0]
    ses = [r.se for r in records]
    assert row["n"] == 3
    assert row["se_mean"] == pytest.approx(np.mean(ses))
    assert row["se_stderr"] == pytest.approx(np.std(ses, ddof=1) / np.sqrt(3))
    # permutation invariance
    rows_rev = aggregate(records[::-1])
    assert rows_rev[0]["se_mean"] == row["se_mean"]


def test_aggregate_single_record_stderr_zero():
    cfg = ExperimentConfig(**{**TINY, "trials": 1}, schemes=("hybrid_2bit",))
    rows = aggregate(run_experiment(cfg))
    assert rows[0]["n"] == 1
    assert rows[0]["se_stderr"] == 0.0


def test_aggregate_identical_records_stderr_zero():
    cfg = ExperimentConfig(**{**TINY, "trials": 1}, schemes=("hybrid_2bit",))
    records = run_experiment(cfg)
    rows = aggregate(records + records)
    assert rows[0]["n"] == 2
    assert rows[0]["se_stderr"] == 0.0


def test_aggregate_drops_empty_groups():
    cfg = ExperimentConfig(**{**TINY, "trials": 1}, schemes=("brute_force",), bf_max_combos=1)
    records = run_experiment(cfg)
    with pytest.warns(UserWarning, match="omitted"):
        rows = aggregate(records)
    assert rows == []


def test_csv_round_trip_identical(tmp_path):
    cfg = ExperimentConfig(**TINY, schemes=("proposed",))
    records = run_experiment(cfg)
    rows = aggregate(records)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_records_csv(records, p1)
    write_records_csv(run_experiment(cfg), p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert "np.float64" not in p1.read_text()  # plain decimal literals only
    s1 = tmp_path / "s1.csv"
    write_summary_csv(rows, s1)
    with open(s1) as fh:
        parsed = list(csv.DictReader(fh))
    assert len(parsed) == 1
    assert float(parsed[0]["ee_mean"]) == pytest.approx(rows[0]["ee_mean"])


def test_sweep_product():
    cfg = ExperimentConfig(
        **{**TINY, "snr_db": (0.0, 10.0), "gamma_tx": (0.001, 0.01), "gamma_rx": (0.5,)}
    )
    assert len(cfg.sweep) == 4
