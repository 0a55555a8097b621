"""Unit tests for the experiment runner CLI."""

import json

import numpy as np
import pytest

from berrydec.cli import (CONFIG_ERROR, NUMERICAL_ERROR, ConfigError,
                          ExperimentConfig, build_config, main, write_csv)


def _read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# berrydec ")
    assert lines[1].startswith("# config: ")
    cfg = json.loads(lines[1][len("# config: "):])
    header = lines[2].split(",")
    rows = [[float(x) for x in ln.split(",")] for ln in lines[3:]]
    return cfg, header, rows


def test_build_config_rejects_unknown_key():
    with pytest.raises(ConfigError):
        build_config("single", {"bogus": 1.0}, {})
    with pytest.raises(ConfigError):
        build_config("nope", {}, {})
    with pytest.raises(ConfigError):
        build_config("sweep", {}, {})  # no sweep_values
    with pytest.raises(ConfigError):
        build_config("single", {}, {"B": -1.0})
    with pytest.raises(ConfigError):
        build_config("single", {}, {"workers": 0})
    with pytest.raises(ConfigError):
        build_config("single", {}, {"sweep_param": "bogus"})


def test_build_config_flag_precedence():
    cfg = build_config("single", {"B": 50.0, "theta": 0.5}, {"B": 75.0})
    assert cfg.B == 75.0 and cfg.theta == 0.5
    assert cfg.bath().cutoff == cfg.cutoff
    assert cfg.bath().power == pytest.approx(cfg.lambda_norm, rel=1e-12)


def test_config_coupling_override():
    cfg = build_config("single", {}, {"coupling": 0.25})
    assert cfg.bath().coupling == 0.25


def test_main_config_error_paths(tmp_path, capsys):
    assert main(["single", "--config", str(tmp_path / "missing.json")]) == CONFIG_ERROR
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["single", "--config", str(bad)]) == CONFIG_ERROR
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    assert main(["single", "--config", str(listed)]) == CONFIG_ERROR
    assert main(["single", "--B", "-5"]) == CONFIG_ERROR
    assert "config error" in capsys.readouterr().err


def test_main_numerical_error_exit(tmp_path, capsys):
    # pole-crossing tilted loop: gamma = theta'
    code = main(["single", "--path-echo", "--theta-prime", "0.5",
                 "--gamma-list", "0.5", "--out", str(tmp_path / "x.csv")])
    assert code == NUMERICAL_ERROR
    assert "numerical failure" in capsys.readouterr().err


def test_main_single_writes_csv(tmp_path, capsys):
    out = tmp_path / "single.csv"
    assert main(["single", "--out", str(out)]) == 0
    cfg, header, rows = _read_csv(out)
    assert cfg["experiment"] == "single" and cfg["B"] == 100.0
    assert header[:4] == ["F_2T0", "Phi", "delta_Phi", "dephasing"]
    assert len(rows) == 1 and len(rows[0]) == len(header)
    row = dict(zip(header, rows[0]))
    assert row["F_2T0"] == pytest.approx(0.512277117869, rel=1e-9)
    assert row["Phi"] == pytest.approx(np.pi * (1 - np.cos(np.pi / 4)), rel=1e-9)
    err = capsys.readouterr().err
    assert "F_2T0 =" in err  # summary goes to stderr


def test_main_single_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["single", "--out", str(a)]) == 0
    assert main(["single", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_main_stdout_default(capsys):
    assert main(["single", "--multinoise"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# berrydec ")
    assert "F_2T0" in out


def test_main_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--sweep-param", "theta",
                 "--sweep-values", "0.5,0.8", "--out", str(out)])
    assert code == 0
    _, header, rows = _read_csv(out)
    assert header[0] == "theta" and len(rows) == 2
    assert rows[0][0] == 0.5 and rows[1][0] == 0.8


def test_main_fig6_small(tmp_path):
    out = tmp_path / "fig6.csv"
    code = main(["fig6", "--gamma-list", "0.0,0.3", "--out", str(out)])
    assert code == 0
    _, header, rows = _read_csv(out)
    assert header == ["gamma", "theta_prime", "F_2T0"]
    assert len(rows) == 2
    assert all(0.0 <= r[2] <= 1.0 for r in rows)


def test_write_csv_formatting(tmp_path):
    cfg = ExperimentConfig(experiment="single")
    out = tmp_path / "fmt.csv"
    write_csv(str(out), ["a", "b"], [(1.0 / 3.0, 2.0)], cfg)
    _, header, rows = _read_csv(out)
    assert header == ["a", "b"]
    assert rows[0][0] == pytest.approx(1.0 / 3.0, rel=1e-11)
