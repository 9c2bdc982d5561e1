"""Command-line interface.

Subcommands drive the two engines and the analytics:

    synccool simulate-sc --preset fig3c --out runs/fig3c
    synccool simulate-mf --config my.json --out runs/mf
    synccool steady-state --preset fig7 --out runs/profiles
    synccool sweep --preset fig10 --out runs/sweep
    synccool spectrum runs/mf/timeseries.csv --channel xdagx --out runs/spec

--threads changes execution speed only, never results; --seed overrides the
config's master_seed.  Exit codes: 0 success, 2 invalid configuration, 3
numerical failure (the offending trajectory is reported).
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, io
from .config import build_objects, load_config, preset_config, validate_config
from .ensemble import default_threads, simulate_ensemble
from .errors import ConfigError, NumericalBlowupError, PSDViolationError, SynccoolError
from .meanfield import meanfield_simulate
from .observables import laplace_spectrum, spectrum_peaks
from .steady_state import (
    momentum_scale_sq,
    p2_infinity,
    solve_steady_state,
    sweep_optimal,
)


def _error_exit(code, kind, message, **extra):
    payload = {"error": kind, "message": message}
    payload.update(extra)
    print(json.dumps(payload), file=sys.stderr)
    raise SystemExit(code)


def _load_cfg(args):
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset, not both")
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = preset_config(args.preset)
    else:
        raise ConfigError("one of --config or --preset is required")
    if args.seed is not None:
        cfg["master_seed"] = args.seed
    return validate_config(cfg)


def _add_common(sub):
    sub.add_argument("--config", help="path to a JSON run configuration")
    sub.add_argument("--preset", help="bundled preset name")
    sub.add_argument("--seed", type=int, help="override master_seed")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker threads (speed only, never results)")
    sub.add_argument("--out", required=True, help="output directory")


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate_sc(args):
    cfg = _load_cfg(args)
    if cfg["engine"] != "semiclassical":
        raise ConfigError(f"config engine is {cfg['engine']!r}, expected semiclassical")
    params, config, ic = build_objects(cfg)
    out = _outdir(args)
    threads = args.threads or default_threads()
    t0 = time.perf_counter()
    result = simulate_ensemble(params, config, ic, cfg["n_traj"],
                               cfg["master_seed"], threads=threads)
    wall = time.perf_counter() - t0
    io.write_timeseries(out / "timeseries.csv", result.series)
    for t_snap, snap in result.snapshots.items():
        io.write_snapshot(out / f"snapshot_t{t_snap:g}.csv", snap)
    io.write_metadata(out / "metadata.json", cfg, wall, "completed", threads,
                      extra={"clipped_steps": result.clipped_steps})
    return 0


def cmd_simulate_mf(args):
    cfg = _load_cfg(args)
    if cfg["engine"] != "meanfield":
        raise ConfigError(f"config engine is {cfg['engine']!r}, expected meanfield")
    params, config, ic = build_objects(cfg)
    out = _outdir(args)
    t0 = time.perf_counter()
    series, final, snapshots = meanfield_simulate(params, config, ic,
                                                  seed=cfg["master_seed"])
    wall = time.perf_counter() - t0
    io.write_timeseries(out / "timeseries.csv", series)
    for t_snap, snap in snapshots.items():
        io.write_snapshot(out / f"snapshot_t{t_snap:g}.csv", snap)
    io.write_snapshot(out / "final_state.csv",
                      {"x": final.x, "p": final.p, "s": final.s, "z": final.z})
    io.write_metadata(out / "metadata.json", cfg, wall, "completed",
                      args.threads or 1)
    return 0


def cmd_steady_state(args):
    cfg = _load_cfg(args)
    params, _, _ = build_objects(cfg)
    out = _outdir(args)
    regime = args.regime
    sol = solve_steady_state(params, regime=regime, delta_pin=args.delta_pin)
    io.write_table(out / "profiles.csv", io.PROFILE_SCHEMA, {
        "x": sol.x_grid,
        "s0": sol.s0,
        "z0": sol.z0,
        "v_eff": sol.v_eff,
        "gamma": sol.gamma,
        "diffusion_2d": sol.diffusion,
    })
    doc = {
        "x2": sol.x2,
        "omega0": sol.omega0,
        "regime": sol.regime,
        "e0": sol.e0,
        "x0_roots": list(sol.x0) if sol.x0 is not None else [],
        "p2_infinity": p2_infinity(params.w_pump, params.delta, params.kappa,
                                   params.n_gamma_c),
        "momentum_scale_sq": momentum_scale_sq(params.n_gamma_c),
    }
    with open(out / "solution.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_sweep(args):
    cfg = _load_cfg(args)
    params, _, _ = build_objects(cfg)
    out = _outdir(args)
    half_kappa = params.kappa / 2.0
    delta_grid = np.linspace(args.delta_min, args.delta_max,
                             args.delta_steps) * half_kappa
    w_grid = np.linspace(args.w_min, args.w_max, args.w_steps) * params.n_gamma_c
    pbar2 = momentum_scale_sq(params.n_gamma_c)

    p2_vs_w = np.array([p2_infinity(w, params.delta, params.kappa,
                                    params.n_gamma_c) for w in w_grid])
    io.write_table(out / "p2_vs_w.csv", io.SWEEP_SCHEMA, {
        "w_over_ngc": w_grid / params.n_gamma_c,
        "p2_infinity": p2_vs_w,
        "p2_over_pbar2": p2_vs_w / pbar2,
    })
    w_min, p2_min = sweep_optimal(delta_grid, params.kappa, params.n_gamma_c,
                                  w_grid=w_grid)
    io.write_table(out / "wmin_vs_delta.csv", io.SWEEP_SCHEMA, {
        "delta_over_half_kappa": delta_grid / half_kappa,
        "w_min_over_ngc": w_min / params.n_gamma_c,
    })
    io.write_table(out / "p2min_vs_delta.csv", io.SWEEP_SCHEMA, {
        "delta_over_half_kappa": delta_grid / half_kappa,
        "p2_min": p2_min,
        "p2_min_over_pbar2": p2_min / pbar2,
    })
    return 0


def cmd_spectrum(args):
    cols, _ = io.read_table(args.series)
    if args.channel not in cols:
        raise ConfigError(
            f"channel {args.channel!r} not in series; available: "
            f"{sorted(c for c in cols if c != 'time')}")
    out = _outdir(args)
    omega = np.linspace(args.omega_min, args.omega_max, args.omega_points)
    omega, spec = laplace_spectrum(cols["time"], cols[args.channel],
                                   omega=omega, window_fraction=args.window)
    io.write_table(out / "spectrum.csv", io.SPECTRUM_SCHEMA, {
        "omega": omega,
        "abs_s": np.abs(spec),
        "re_s": spec.real,
        "im_s": spec.imag,
    })
    pos, height = spectrum_peaks(omega, spec)
    io.write_table(out / "peaks.csv", io.SPECTRUM_SCHEMA, {
        "omega": pos,
        "height": height,
    })
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="synccool",
        description="Synchronization-assisted cavity cooling toolkit "
                    "(all quantities in recoil units)")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sc = subs.add_parser("simulate-sc", help="run a semiclassical ensemble")
    _add_common(sc)
    sc.set_defaults(func=cmd_simulate_sc)

    mf = subs.add_parser("simulate-mf", help="run a mean-field trajectory")
    _add_common(mf)
    mf.set_defaults(func=cmd_simulate_mf)

    ss = subs.add_parser("steady-state", help="steady-state profiles and tables")
    _add_common(ss)
    ss.add_argument("--regime", default="uniform",
                    choices=["uniform", "pinned"])
    ss.add_argument("--delta-pin", type=float, default=1.0)
    ss.set_defaults(func=cmd_steady_state)

    sw = subs.add_parser("sweep", help="fluctuation-dissipation parameter sweep")
    _add_common(sw)
    sw.add_argument("--delta-min", type=float, default=0.25,
                    help="lowest detuning in units of kappa/2")
    sw.add_argument("--delta-max", type=float, default=3.0)
    sw.add_argument("--delta-steps", type=int, default=12)
    sw.add_argument("--w-min", type=float, default=0.02,
                    help="lowest pump rate in units of NGc")
    sw.add_argument("--w-max", type=float, default=0.499)
    sw.add_argument("--w-steps", type=int, default=120)
    sw.set_defaults(func=cmd_sweep)

    sp = subs.add_parser("spectrum", help="Laplace spectrum of a recorded channel")
    sp.add_argument("series", help="timeseries.csv produced by a simulate command")
    sp.add_argument("--channel", default="xdagx")
    sp.add_argument("--window", type=float, default=0.2,
                    help="trailing fraction used for the stationary value")
    sp.add_argument("--omega-min", type=float, default=-20.0)
    sp.add_argument("--omega-max", type=float, default=20.0)
    sp.add_argument("--omega-points", type=int, default=2048)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _error_exit(2, "ConfigError", str(exc))
    except NumericalBlowupError as exc:
        _error_exit(3, "NumericalBlowupError", str(exc),
                    trajectory=exc.trajectory, step=exc.step)
    except PSDViolationError as exc:
        _error_exit(3, "PSDViolationError", str(exc),
                    trajectory=getattr(exc, "trajectory", None))
    except SynccoolError as exc:
        _error_exit(2, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
