"""Serialization of run outputs: CSV tables, JSON metadata, dense matrices.

CSV is the canonical tabular format.  Every table starts with a single `#`
comment line naming the schema and the units, followed by the column header;
floats are written with %.17g so that identical runs produce byte-identical
files.
"""

import json
import time

import numpy as np

TIMESERIES_SCHEMA = (
    "# synccool timeseries v1; units: time in 1/omega_R, momenta in hbar*k, "
    "frequencies in omega_R"
)
PROFILE_SCHEMA = (
    "# synccool steady-state profiles v1; x in 1/k, energies in hbar*omega_R, "
    "rates in omega_R, diffusion in (hbar*k)^2*omega_R"
)
SWEEP_SCHEMA = "# synccool sweep v1; w and NGc in omega_R, p2 in (hbar*k)^2"
SPECTRUM_SCHEMA = "# synccool spectrum v1; omega in omega_R, S in channel units * time"
SNAPSHOT_SCHEMA = "# synccool snapshot v1; x in 1/k, p in hbar*k"
HIST2D_SCHEMA = "# synccool histogram2d v1; x edges in 1/k, p edges in hbar*k"

_FMT = "%.17g"


def _format_row(values):
    return ",".join(_FMT % v for v in values)


def write_table(path, header_comment, columns):
    """Write named columns as commented CSV; columns is a dict name -> array."""
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    n_rows = len(arrays[0]) if arrays else 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header_comment + "\n")
        fh.write(",".join(names) + "\n")
        for i in range(n_rows):
            fh.write(_format_row(arr[i] for arr in arrays) + "\n")


def read_table(path):
    """Read a commented CSV written by write_table; returns (columns, comment)."""
    with open(path, encoding="utf-8") as fh:
        comment = fh.readline().rstrip("\n")
        names = fh.readline().rstrip("\n").split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        return {n: np.array([]) for n in names}, comment
    return {n: data[:, i] for i, n in enumerate(names)}, comment


def write_timeseries(path, series):
    cols = {"time": series.times}
    cols.update(series.channels)
    write_table(path, TIMESERIES_SCHEMA, cols)


def write_metadata(path, cfg, wall_time, status, threads, extra=None):
    from . import __version__

    n_traj = cfg.get("n_traj", 1)
    meta = {
        "config": cfg,
        "version": __version__,
        "wall_time_s": wall_time,
        "status": status,
        "threads": threads,
        "rng": {
            "algorithm": "philox4x64-10",
            "master_seed": cfg.get("master_seed", 0),
            "trajectory_keys": [[cfg.get("master_seed", 0), i]
                                for i in range(n_traj)],
        },
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
    }
    if extra:
        meta.update(extra)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_snapshot(path, snap):
    """Per-atom snapshot table; mean-field snapshots add dipole columns."""
    cols = {"x": snap["x"].ravel(), "p": snap["p"].ravel()}
    if "s" in snap:
        cols["s_re"] = snap["s"].real.ravel()
        cols["s_im"] = snap["s"].imag.ravel()
        cols["z"] = snap["z"].ravel()
    write_table(path, SNAPSHOT_SCHEMA, cols)


def write_histogram2d(path, hist):
    """Dense text matrix with the bin edges in comment headers."""
    xe, pe = hist.edges
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HIST2D_SCHEMA + "\n")
        fh.write("# x_edges: " + " ".join(_FMT % v for v in xe) + "\n")
        fh.write("# p_edges: " + " ".join(_FMT % v for v in pe) + "\n")
        for row in np.asarray(hist.counts, dtype=float):
            fh.write(" ".join(_FMT % v for v in row) + "\n")
