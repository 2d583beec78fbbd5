"""Command-line harness: outputs, determinism, precedence, error paths.

The heavy double-slit pipeline is exercised end to end in
test_acceptance.py; here the fast subcommands cover the harness logic.
"""
import hashlib
import math
import os

import numpy as np
import pytest

from pilotwave.cli import DEFAULT_DELTAS, main, worker_count


def _hash_dir(path):
    out = {}
    for name in sorted(os.listdir(path)):
        with open(os.path.join(path, name), "rb") as fh:
            out[name] = hashlib.sha256(fh.read()).hexdigest()
    return out


def _run(argv):
    return main(argv)


def test_stern_gerlach_run_and_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    rc = _run(["stern-gerlach", "--n", "8", "--seed", "3",
               "--out", str(out)])
    assert rc == 0
    names = set(os.listdir(out))
    assert {"sg_density.csv", "sg_trajectories.csv", "sg_impacts.csv",
            "sg_density_matrix.csv", "sg_summary.csv",
            "summary.csv"} <= names
    line = capsys.readouterr().out.strip()
    assert "experiment=stern-gerlach" in line
    assert "up_fraction=" in line


def test_stern_gerlach_byte_identical_across_workers(tmp_path):
    hashes = []
    for i, workers in enumerate(("1", "7")):
        out = tmp_path / f"run{i}"
        os.environ["PILOTWAVE_WORKERS"] = workers
        try:
            assert _run(["stern-gerlach", "--n", "6", "--seed", "11",
                         "--out", str(out)]) == 0
        finally:
            del os.environ["PILOTWAVE_WORKERS"]
        hashes.append(_hash_dir(out))
    assert hashes[0] == hashes[1]


def test_worker_count_is_advisory_only():
    os.environ["PILOTWAVE_WORKERS"] = "junk"
    try:
        assert worker_count() == 1
    finally:
        del os.environ["PILOTWAVE_WORKERS"]
    assert worker_count() == 1


def test_eprb_default_delta_ladder(tmp_path):
    out = tmp_path / "ep"
    assert _run(["eprb", "--n", "30", "--seed", "5", "--out", str(out)]) == 0
    corr = open(out / "eprb_correlations.csv").read().splitlines()
    assert len(corr) == 1 + len(DEFAULT_DELTAS)
    first = corr[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == -1.0     # aligned analyzers anti-correlate


def test_eprb_delta_flag_beats_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"delta = {math.pi / 2}\n")
    out1 = tmp_path / "flag"
    assert _run(["eprb", "--n", "20", "--seed", "1", "--out", str(out1),
                 "--config", str(cfg), "--delta", str(math.pi)]) == 0
    rows = open(out1 / "eprb_correlations.csv").read().splitlines()
    assert len(rows) == 2
    assert float(rows[1].split(",")[0]) == pytest.approx(math.pi)
    # config delta used when no flag given
    out2 = tmp_path / "cfg"
    assert _run(["eprb", "--n", "20", "--seed", "1", "--out", str(out2),
                 "--config", str(cfg)]) == 0
    rows = open(out2 / "eprb_correlations.csv").read().splitlines()
    assert len(rows) == 2
    assert float(rows[1].split(",")[0]) == pytest.approx(math.pi / 2)


def test_flag_overrides_config_seed(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = 1\nn = 10\n")
    out = tmp_path / "o"
    assert _run(["stern-gerlach", "--config", str(cfg), "--seed", "2",
                 "--out", str(out)]) == 0
    summary = dict(
        line.split(",") for line in
        open(out / "summary.csv").read().splitlines()[1:]
    )
    assert summary["seed"] == "2"
    assert summary["n"] == "10"


def test_config_error_goes_to_stderr(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("seed = 0\npanels = -4\n")
    rc = _run(["stern-gerlach", "--config", str(cfg),
               "--out", str(tmp_path)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "line 2" in err
    assert "panels" in err
    assert capsys.readouterr().out == ""


def test_missing_config_file_fails_cleanly(tmp_path, capsys):
    rc = _run(["eprb", "--config", str(tmp_path / "nope.cfg"),
               "--out", str(tmp_path)])
    assert rc == 1
    assert "nope.cfg" in capsys.readouterr().err


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        _run(["triple-slit"])
    assert exc.value.code == 2


def test_eprb_spin_history_file(tmp_path):
    out = tmp_path / "hist"
    assert _run(["eprb", "--n", "4", "--seed", "0", "--out", str(out),
                 "--delta", "0.0"]) == 0
    rows = np.loadtxt(out / "eprb_spin_history.csv", delimiter=",",
                      skiprows=1)
    theta_a, theta_b = rows[:, 2], rows[:, 3]
    assert np.allclose(theta_a + theta_b, math.pi, atol=1e-9)
