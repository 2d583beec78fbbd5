"""Batch harness: parse a run configuration, execute one experiment,
write deterministic CSVs.

Identical (config, seed) pairs produce byte-identical outputs; the
PILOTWAVE_WORKERS environment variable is accepted for symmetry with batch
schedulers but cannot change any result (the computation is vectorized in
a single process).
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .config import RunConfig, parse_config
from .constants import DEFAULT_CONSTANTS
from .double_slit import (
    SlitGeometry,
    TwoSlitField,
    density_cross_sections,
    fringe_spacing,
    hbar_scaling_study,
    run_trajectory_bundle,
    wave_at_slits,
)
from .eprb import EPRBModel, PairState
from .errors import PilotWaveError
from .gaussian import GaussianPacket
from .io import write_csv, write_summary
from .stern_gerlach import MagnetSpec, SternGerlachModel

CROSS_SECTION_DISTANCES = (0.35e-3, 3.5e-3, 3.5e-2, 0.35)
HBAR_DIVISOR_LADDER = (1.0, 10.0, 100.0, 1000.0, 10000.0)
DEFAULT_DELTAS = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi)
SCALING_TRAJECTORIES = 100
SPIN_HISTORY_PAIRS = 10


def worker_count() -> int:
    """Advisory worker count from the environment (never affects output)."""
    try:
        return max(1, int(os.environ.get("PILOTWAVE_WORKERS", "1")))
    except ValueError:
        return 1


def _out(config: RunConfig, name: str) -> str:
    return os.path.join(config.out, name)


def run_double_slit(config: RunConfig) -> list:
    constants = DEFAULT_CONSTANTS.with_hbar_divisor(config.hbar_divisor)
    geometry = SlitGeometry(
        half_width=config.half_width, separation=config.separation,
        d1=config.d1, d2=config.d2, beam_speed=config.beam_speed,
    )
    source = GaussianPacket(center=0.0, sigma=config.sigma_source,
                            mass=constants.electron_mass)
    field = TwoSlitField(wave_at_slits(source, geometry, constants),
                         source.mass, constants)

    distances = [d for d in CROSS_SECTION_DISTANCES if d <= geometry.d2]
    if not distances or distances[-1] < geometry.d2:
        distances.append(geometry.d2)
    sections = density_cross_sections(field, distances)
    for sec in sections:
        write_csv(
            _out(config, f"cross_section_{sec.distance:g}.csv"),
            ("y", "interference", "sum"),
            zip(sec.y, sec.interference, sec.summed),
        )

    bundle = run_trajectory_bundle(field, config.n, config.seed)
    write_csv(
        _out(config, "trajectories.csv"), ("traj_id", "t", "y"),
        ((j, t, bundle.positions[i, j])
         for j in range(config.n) for i, t in enumerate(bundle.times)),
    )
    write_csv(_out(config, "impacts.csv"), ("y",),
              ((y,) for y in bundle.screen.impacts))

    study = hbar_scaling_study(
        geometry, source, HBAR_DIVISOR_LADDER,
        min(config.n, SCALING_TRAJECTORIES), config.seed, constants,
    )
    write_csv(
        _out(config, "hbar_study.csv"), ("divisor", "traj_id", "t", "y"),
        ((res.divisor, j, t, res.positions[i, j])
         for res in study
         for j in range(res.positions.shape[1])
         for i, t in enumerate(res.times)),
    )

    near, far = sections[0], sections[-1]
    discrepancy = float(np.max(np.abs(near.interference - near.summed))
                        / np.max(near.summed))
    spacing = fringe_spacing(geometry, distances[-1], source.mass, constants)
    summary = [
        ("experiment", "double-slit"), ("seed", config.seed),
        ("n", config.n), ("hbar_divisor", config.hbar_divisor),
        ("slit_flux", field.slit_wave.flux()),
        ("near_field_discrepancy", discrepancy),
        ("far_field_visibility", far.visibility),
        ("fringe_spacing", spacing),
        ("deviation_divisor_1", study[0].deviation),
        ("deviation_divisor_10000", study[-1].deviation),
    ]
    write_summary(_out(config, "summary.csv"), summary)
    return summary


def run_stern_gerlach(config: RunConfig) -> list:
    magnet = MagnetSpec(b0=config.b0, gradient=config.gradient,
                        length=config.length, drift=config.drift,
                        speed=config.speed)
    packet = GaussianPacket(center=0.0, sigma=config.sigma0,
                            mass=DEFAULT_CONSTANTS.silver_mass)
    model = SternGerlachModel(magnet, packet)
    t_d = model.decoherence_time()
    result = model.run_ensemble(config.mode, config.n, config.seed,
                                theta0=config.theta0, phi0=config.phi0)

    z_max = model.derived.z_delta + model.derived.u * 2.0 * t_d \
        + 5.0 * packet.sigma
    z_grid = np.linspace(-z_max, z_max, 241)
    write_csv(
        _out(config, "sg_density.csv"), ("z", "t", "rho"),
        ((z, t, rho)
         for t in (0.0, 0.5 * t_d, t_d, 2.0 * t_d)
         for z, rho in zip(z_grid, model.density(config.theta0, z_grid, t))),
    )
    write_csv(
        _out(config, "sg_trajectories.csv"),
        ("traj_id", "t", "z", "theta", "phi"),
        ((j, t, result.positions[i, j], result.theta_history[i, j],
          result.phi_history[i, j])
         for j in range(config.n) for i, t in enumerate(result.times)),
    )
    write_csv(_out(config, "sg_impacts.csv"), ("z", "outcome"),
              zip(result.impacts, result.outcomes))
    matrix_times = (0.0, magnet.transit_time, magnet.transit_time + t_d,
                    magnet.transit_time + 2.0 * t_d)
    rows = []
    for t in matrix_times:
        rho = model.spin_density_matrix(config.theta0, config.phi0, t)
        rows.append((t, rho[0, 0].real, rho[0, 0].imag,
                     rho[0, 1].real, rho[0, 1].imag,
                     rho[1, 0].real, rho[1, 0].imag,
                     rho[1, 1].real, rho[1, 1].imag))
    write_csv(
        _out(config, "sg_density_matrix.csv"),
        ("t", "rho_uu_re", "rho_uu_im", "rho_ud_re", "rho_ud_im",
         "rho_du_re", "rho_du_im", "rho_dd_re", "rho_dd_im"),
        rows,
    )
    write_csv(
        _out(config, "sg_summary.csv"),
        ("z_delta", "u", "t_D", "up_fraction"),
        [(model.derived.z_delta, model.derived.u, t_d, result.up_fraction)],
    )
    summary = [
        ("experiment", "stern-gerlach"), ("seed", config.seed),
        ("n", config.n), ("mode", config.mode),
        ("theta0", config.theta0), ("phi0", config.phi0),
        ("z_delta", model.derived.z_delta), ("u", model.derived.u),
        ("t_D", t_d), ("up_fraction", result.up_fraction),
    ]
    write_summary(_out(config, "summary.csv"), summary)
    return summary


def run_eprb(config: RunConfig, deltas) -> list:
    magnet = MagnetSpec(b0=config.b0, gradient=config.gradient,
                        length=config.length, drift=config.drift,
                        speed=config.speed)
    packet = GaussianPacket(center=0.0, sigma=config.sigma0,
                            mass=DEFAULT_CONSTANTS.silver_mass)
    model = EPRBModel(magnet, packet)
    table = model.outcome_table(deltas, config.n, config.seed)
    rows = model.correlation_study(deltas, config.n, config.seed)

    write_csv(
        _out(config, "eprb_pairs.csv"),
        ("pair_id", "theta0_A", "phi0_A", "z0_A", "z0_B",
         "outcome_A", "outcome_B", "delta"),
        ((j, table.thetas_A[j], table.phis_A[j], table.positions[j, 0],
          table.positions[j, 1], int(table.outcomes_A[j]),
          int(table.outcomes_B[float(d)][j]), float(d))
         for d in deltas for j in range(config.n)),
    )
    write_csv(
        _out(config, "eprb_correlations.csv"),
        ("delta", "E", "P_pp", "P_pm", "P_mp", "P_mm", "n"),
        ((r.delta, r.correlation, r.p_pp, r.p_pm, r.p_mp, r.p_mm, r.n)
         for r in rows),
    )
    history_rows = []
    for j in range(min(config.n, SPIN_HISTORY_PAIRS)):
        pair = PairState.from_A(
            x0_A=0.0, z0_A=float(table.positions[j, 0]),
            x0_B=float(table.positions[j, 2]),
            z0_B=float(table.positions[j, 1]),
            theta_A=float(table.thetas_A[j]), phi_A=float(table.phis_A[j]),
        )
        run = model.causal_pair_run(pair, float(deltas[0]))
        history_rows.extend(
            (j, t, run.theta_A[i], run.theta_B[i])
            for i, t in enumerate(run.times)
        )
    write_csv(_out(config, "eprb_spin_history.csv"),
              ("pair_id", "t", "theta_A", "theta_B"), history_rows)
    summary = [
        ("experiment", "eprb"), ("seed", config.seed), ("n", config.n),
        ("t_D", model.sg.decoherence_time()),
    ]
    for r in rows:
        summary.append((f"E_delta_{r.delta:g}", r.correlation))
        summary.append((f"oracle_delta_{r.delta:g}", -math.cos(r.delta)))
    write_summary(_out(config, "summary.csv"), summary)
    return summary


def _config_file_keys(path) -> set:
    keys = set()
    if path is None:
        return keys
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#") and "=" in line:
                keys.add(line.partition("=")[0].strip())
    return keys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilotwave",
        description="Pilot-wave measurement experiments: deterministic "
                    "trajectory ensembles and densities, written as CSV.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)

    def common(p):
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--seed", type=int, help="master RNG seed")
        p.add_argument("--n", type=int, help="ensemble size")
        p.add_argument("--out", help="output directory")

    p_ds = sub.add_parser("double-slit", help="two-slit electron interference")
    common(p_ds)
    p_ds.add_argument("--hbar-divisor", type=float, dest="hbar_divisor",
                      help="divide hbar for the classical-limit run")

    p_sg = sub.add_parser("stern-gerlach", help="spin measurement by magnet")
    common(p_sg)
    p_sg.add_argument("--theta0", type=float, help="initial polar angle (rad)")
    p_sg.add_argument("--phi0", type=float, help="initial azimuth (rad)")
    p_sg.add_argument("--mode", choices=("pure", "mixture"),
                      help="shared initial spin or uniform random spins")

    p_ep = sub.add_parser("eprb", help="two-particle correlation experiment")
    common(p_ep)
    p_ep.add_argument("--delta", type=float, action="append",
                      help="analyzer angle in rad (repeatable)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, key, None)
        for key in ("seed", "n", "out", "hbar_divisor",
                    "theta0", "phi0", "mode")
    }
    overrides["experiment"] = args.experiment
    try:
        config = parse_config(args.config, overrides)
        if args.experiment == "double-slit":
            summary = run_double_slit(config)
        elif args.experiment == "stern-gerlach":
            summary = run_stern_gerlach(config)
        else:
            if getattr(args, "delta", None):
                deltas = list(args.delta)
            elif "delta" in _config_file_keys(args.config):
                deltas = [config.delta]
            else:
                deltas = list(DEFAULT_DELTAS)
            summary = run_eprb(config, deltas)
    except (PilotWaveError, OSError, ValueError) as exc:
        print(f"pilotwave: {args.experiment}: {exc}", file=sys.stderr)
        return 1
    line = " ".join(f"{k}={v}" for k, v in summary)
    print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
