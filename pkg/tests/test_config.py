"""Flat key = value configuration parsing and validation."""
import math

import pytest

from pilotwave.config import RunConfig, parse_config
from pilotwave.errors import ConfigError


def test_defaults_round_trip():
    cfg = parse_config()
    assert cfg == RunConfig()
    assert cfg.experiment == "double-slit"
    assert cfg.theta0 == pytest.approx(math.pi / 3)


def test_file_values_and_comments(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(
        "# comment line\n"
        "\n"
        "experiment = stern-gerlach\n"
        "seed = 42\n"
        "n = 250\n"
        "theta0 = 1.5\n"
        "mode = mixture\n"
    )
    cfg = parse_config(str(p))
    assert cfg.experiment == "stern-gerlach"
    assert cfg.seed == 42
    assert cfg.n == 250
    assert cfg.theta0 == 1.5
    assert cfg.mode == "mixture"
    # untouched keys keep their defaults
    assert cfg.b0 == RunConfig().b0


def test_overrides_beat_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("seed = 1\nn = 10\n")
    cfg = parse_config(str(p), overrides={"seed": 7, "n": None})
    assert cfg.seed == 7          # override wins
    assert cfg.n == 10            # None override is ignored


def test_unknown_key_reports_line(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("seed = 1\nbogus = 3\n")
    with pytest.raises(ConfigError) as err:
        parse_config(str(p))
    assert "bogus" in str(err.value)
    assert "line 2" in str(err.value)


def test_malformed_line_reports_line(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# fine\njust words\n")
    with pytest.raises(ConfigError) as err:
        parse_config(str(p))
    assert "line 2" in str(err.value)


def test_type_errors(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("n = many\n")
    with pytest.raises(ConfigError) as err:
        parse_config(str(p))
    assert "cannot parse" in str(err.value)


@pytest.mark.parametrize("line,fragment", [
    ("experiment = triple-slit", "must be one of"),
    ("seed = -1", "must be >= 0"),
    ("n = 0", "must be >= 1"),
    ("half_width = 0", "must be positive"),
    ("hbar_divisor = 0.5", "must be >= 1"),
    ("theta0 = 4.0", "must lie in [0, pi]"),
    ("phi0 = 6.3", "must lie in [0, 2 pi)"),
    ("mode = thermal", "must be 'pure' or 'mixture'"),
    ("delta = -0.5", "must lie in [0, pi]"),
    ("panels = 7", "even integer"),
    ("panels = -4", "even integer"),
    ("abs_tol = 0", "must be positive"),
])
def test_range_checks(tmp_path, line, fragment):
    p = tmp_path / "run.cfg"
    p.write_text(line + "\n")
    with pytest.raises(ConfigError) as err:
        parse_config(str(p))
    assert fragment in str(err.value)
    assert "line 1" in str(err.value)


def test_override_validation():
    with pytest.raises(ConfigError):
        parse_config(overrides={"hbar_divisor": 0.1})
    with pytest.raises(ConfigError):
        parse_config(overrides={"nonsense": 1})
