import os
from pathlib import Path

import pytest

from hybridbeam.cli import ConfigError, load_config, main

REPO = Path(__file__).resolve().parents[1]

QUICK = """
[experiment]
schema_version = 1

[dims]
n_tx = 8
n_rx = 4
l_tx = 2
l_rx = 2
n_streams = 2

[sweep]
snr_db = 10
gamma_tx = 0.001
gamma_rx = 0.5

[run]
trials = 2
base_seed = 3
schemes = proposed, hybrid_1bit
"""


@pytest.fixture
def quick_cfg(tmp_path):
    path = tmp_path / "quick.cfg"
    path.write_text(QUICK)
    return path


def test_load_config_defaults(quick_cfg):
    cfg, trace = load_config(quick_cfg)
    assert cfg.n_tx == 8 and cfg.trials == 2
    assert cfg.schemes == ("proposed", "hybrid_1bit")
    assert cfg.power.p_dac == 0.1
    assert cfg.admm.max_iters == 20
    assert trace["tx_antennas"] == (8,)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.cfg")


def test_load_config_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("[dims]\nn_tx = 8\nbogus = 1\n")
    with pytest.raises(ConfigError, match=r"\[dims\].*bogus"):
        load_config(path)


def test_load_config_bad_value(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("[dims]\nn_tx = not_a_number\n")
    with pytest.raises(ConfigError, match="n_tx"):
        load_config(path)


def test_load_config_empty_schemes(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text(QUICK.replace("schemes = proposed, hybrid_1bit", "schemes ="))
    with pytest.raises(ConfigError, match="no schemes enabled"):
        load_config(path)


def test_bundled_configs_parse():
    for name in ("fig2.cfg", "fig3.cfg", "fig7.cfg", "bf_toy.cfg", "quick.cfg"):
        cfg, _ = load_config(REPO / "configs" / name)
        assert cfg.trials >= 1


def test_cmd_run_writes_deterministic_csv(quick_cfg, tmp_path, capsys):
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["run", "--config", str(quick_cfg), "--out", str(out1)]) == 0
    assert main(["run", "--config", str(quick_cfg), "--out", str(out2)]) == 0
    assert (out1 / "records.csv").read_bytes() == (out2 / "records.csv").read_bytes()
    assert (out1 / "summary.csv").read_bytes() == (out2 / "summary.csv").read_bytes()
    printed = capsys.readouterr().out
    assert "proposed" in printed and "ee=" in printed


def test_cmd_run_seed_override_changes_output(quick_cfg, tmp_path):
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    main(["run", "--config", str(quick_cfg), "--out", str(out1)])
    main(["run", "--config", str(quick_cfg), "--out", str(out2), "--seed", "99"])
    assert (out1 / "records.csv").read_bytes() != (out2 / "records.csv").read_bytes()


def test_cmd_run_malformed_config(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[dims]\nn_tx = oops\n")
    code = main(["run", "--config", str(bad), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_cmd_trace(tmp_path, capsys):
    path = tmp_path / "trace.cfg"
    path.write_text(QUICK + "\n[trace]\ntx_antennas = 8, 16\nrx_antennas = 4\ntrials = 2\n")
    out = tmp_path / "out"
    assert main(["trace", "--config", str(path), "--out", str(out)]) == 0
    lines = (out / "trace.csv").read_text().splitlines()
    assert lines[0] == "side,n_antennas,iteration,nmse_db,primal_residual"
    # 2 tx variants + 1 rx variant, 20 iterations each
    assert len(lines) == 1 + 3 * 20
    # determinism
    out2 = tmp_path / "out2"
    main(["trace", "--config", str(path), "--out", str(out2)])
    assert (out / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()


def test_cmd_trace_single_iteration(tmp_path):
    path = tmp_path / "trace.cfg"
    path.write_text(QUICK + "\n[admm]\nmax_iters = 1\n\n[trace]\ntx_antennas = 8\nrx_antennas = 4\ntrials = 1\n")
    out = tmp_path / "out"
    assert main(["trace", "--config", str(path), "--out", str(out)]) == 0
    lines = (out / "trace.csv").read_text().splitlines()
    assert len(lines) == 1 + 2  # header + one row per side


def test_cmd_bruteforce(tmp_path, capsys):
    path = tmp_path / "bf.cfg"
    path.write_text(QUICK + "\n[bits]\nmin = 1\nmax = 2\n")
    out = tmp_path / "out"
    assert main(["bruteforce", "--config", str(path), "--out", str(out)]) == 0
    body = (out / "bf_compare.csv").read_text().splitlines()
    assert body[0].startswith("snr_db,")
    assert len(body) == 2
    assert "gap=" in capsys.readouterr().out


def test_cmd_bruteforce_guard(tmp_path, capsys):
    path = tmp_path / "bf.cfg"
    path.write_text(QUICK + "\n[bruteforce]\nmax_combos = 2\n")
    code = main(["bruteforce", "--config", str(path), "--out", str(tmp_path / "o")])
    assert code == 2
    err = capsys.readouterr().err
    assert "reduce the chain count or the bit range" in err


def test_env_log_level(quick_cfg, tmp_path, monkeypatch):
    monkeypatch.setenv("HYBRIDBEAM_LOG", "DEBUG")
    assert main(["run", "--config", str(quick_cfg), "--out", str(tmp_path / "o")]) == 0
