"""Flat key = value run configuration.

One schema covers all three experiments; every key has a type and a range
check, unknown keys are rejected, and errors carry the offending line
number. Command-line flags override file values, which override defaults.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigError

EXPERIMENTS = ("double-slit", "stern-gerlach", "eprb")


@dataclass
class RunConfig:
    experiment: str = "double-slit"
    seed: int = 0
    n: int = 100
    out: str = "."
    # double-slit geometry and source
    half_width: float = 1.0e-7
    separation: float = 1.0e-6
    d1: float = 0.35
    d2: float = 0.35
    beam_speed: float = 1.8e8
    sigma_source: float = 3.0e-6
    hbar_divisor: float = 1.0
    # magnet configuration (stern-gerlach and eprb)
    b0: float = 5.0
    gradient: float = 1.0e3
    length: float = 0.01
    drift: float = 0.2
    speed: float = 500.0
    sigma0: float = 1.0e-4
    theta0: float = math.pi / 3.0
    phi0: float = 0.0
    mode: str = "pure"
    # eprb analyzer angle (single delta; the CLI may pass several)
    delta: float = 0.0
    # numerics
    panels: int = 64
    abs_tol: float = 1.0e-10


def _positive(x) -> bool:
    return x > 0


_SCHEMA = {
    "experiment": (str, lambda v: v in EXPERIMENTS,
                   f"must be one of {', '.join(EXPERIMENTS)}"),
    "seed": (int, lambda v: v >= 0, "must be >= 0"),
    "n": (int, lambda v: v >= 1, "must be >= 1"),
    "out": (str, lambda v: True, ""),
    "half_width": (float, _positive, "must be positive"),
    "separation": (float, _positive, "must be positive"),
    "d1": (float, _positive, "must be positive"),
    "d2": (float, _positive, "must be positive"),
    "beam_speed": (float, _positive, "must be positive"),
    "sigma_source": (float, _positive, "must be positive"),
    "hbar_divisor": (float, lambda v: v >= 1.0, "must be >= 1"),
    "b0": (float, _positive, "must be positive"),
    "gradient": (float, _positive, "must be positive"),
    "length": (float, _positive, "must be positive"),
    "drift": (float, _positive, "must be positive"),
    "speed": (float, _positive, "must be positive"),
    "sigma0": (float, _positive, "must be positive"),
    "theta0": (float, lambda v: 0.0 <= v <= math.pi, "must lie in [0, pi]"),
    "phi0": (float, lambda v: 0.0 <= v < 2.0 * math.pi,
             "must lie in [0, 2 pi)"),
    "mode": (str, lambda v: v in ("pure", "mixture"),
             "must be 'pure' or 'mixture'"),
    "delta": (float, lambda v: 0.0 <= v <= math.pi, "must lie in [0, pi]"),
    "panels": (int, lambda v: v >= 2 and v % 2 == 0,
               "must be an even integer >= 2"),
    "abs_tol": (float, _positive, "must be positive"),
}

# The schema and the dataclass must stay in lockstep.
assert set(_SCHEMA) == {f.name for f in fields(RunConfig)}


def _convert(key: str, raw, line=None):
    if key not in _SCHEMA:
        raise ConfigError(f"unknown key {key!r}", line=line)
    caster, check, message = _SCHEMA[key]
    if isinstance(raw, str):
        try:
            if caster is int:
                value = int(raw, 0)
            elif caster is float:
                value = float(raw)
            else:
                value = raw
        except ValueError as exc:
            raise ConfigError(
                f"key {key!r}: cannot parse {raw!r} as {caster.__name__}",
                line=line,
            ) from exc
    else:
        try:
            value = caster(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(
                f"key {key!r}: bad value {raw!r}", line=line
            ) from exc
    if not check(value):
        raise ConfigError(f"key {key!r}: {message} (got {value!r})", line=line)
    return value


def parse_config(path=None, overrides=None) -> RunConfig:
    """Build a RunConfig from defaults, an optional file, then overrides.

    The file format is one ``key = value`` per line; blank lines and lines
    starting with ``#`` are ignored. ``overrides`` (e.g. from CLI flags)
    win over file values.
    """
    config = RunConfig()
    if path is not None:
        with open(path) as fh:
            for lineno, raw_line in enumerate(fh, start=1):
                line = raw_line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(
                        f"expected 'key = value', got {line!r}", line=lineno
                    )
                key, _, raw = line.partition("=")
                key = key.strip()
                value = _convert(key, raw.strip(), line=lineno)
                config = replace(config, **{key: value})
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        config = replace(config, **{key: _convert(key, raw)})
    return config
