"""Parallel ensembles of semiclassical trajectories.

Trajectories are independent: each owns a counter-based RNG stream keyed by
(master_seed, trajectory index), so results are bitwise independent of the
worker count and of scheduling order.  Reduction over trajectories uses
numpy's pairwise summation on arrays stored in trajectory-index order.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NumericalBlowupError, PSDViolationError
from .observables import TimeSeries
from .params import xdagx_from_correlations
from .rng import rng_stream
from .semiclassical import PSD_TOL, initial_state

__version_tag__ = "synccool-0.1.0"


def default_threads():
    env = os.environ.get("SYNCCOOL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class EnsembleResult:
    """Ensemble statistics plus optional per-trajectory snapshots."""

    series: TimeSeries
    snapshots: dict = field(default_factory=dict)
    clipped_steps: int = 0
    per_trajectory: dict = field(default_factory=dict)


def _sample_grid(config):
    """Sample times and the integer step layout realizing them."""
    steps_per_sample = max(1, int(round(config.sample_every / config.dt)))
    n_samples = int(round(config.t_end / (steps_per_sample * config.dt)))
    times = np.arange(n_samples + 1) * (steps_per_sample * config.dt)
    return times, steps_per_sample, n_samples


def _snapshot_samples(times, snapshot_times):
    """Map requested snapshot times to nearest sample indices."""
    out = {}
    for t in snapshot_times:
        k = int(np.argmin(np.abs(times - t)))
        out[k] = float(times[k])
    return out


def _repair_kick(d_mat, z, dt, trajectory):
    """Eigendecomposition fallback for a covariance the fast path rejected."""
    evals, evecs = np.linalg.eigh(d_mat)
    top = max(float(evals[-1]), 0.0)
    tol = PSD_TOL * (top if top > 0.0 else 1.0)
    worst = float(evals[0])
    if worst < -tol:
        err = PSDViolationError(worst, -tol)
        err.trajectory = trajectory
        raise err
    factor = evecs * np.sqrt(np.clip(evals, 0.0, None))
    return factor @ z * np.sqrt(dt)


def _run_trajectory(traj_idx, params, config, ic, master_seed,
                    steps_per_sample, n_samples, snapshot_samples,
                    p2_out, p4_out, xx_out, snap_x, snap_p):
    rng = rng_stream(master_seed, traj_idx)
    state = initial_state(params, ic, rng)
    x, p, c = state.x, state.p, state.corr
    n = params.n_atoms
    w = params.w_pump
    ngc = params.n_gamma_c
    gc = params.gamma_c
    alpha = complex(params.alpha)
    fric_pref = ngc * params.kappa / (params.delta**2 + params.kappa**2 / 4.0)
    scheme = _kernels.SCHEME_IDS[config.scheme]
    fmode = _kernels.FORCE_MODE_IDS[config.force_mode]
    noise_on = bool(config.noise_enabled)
    d_out = np.empty((n, n))
    dummy = np.empty((1, 0))
    clipped = 0

    def record(k):
        p2_out[traj_idx, k] = np.mean(p * p)
        p4_out[traj_idx, k] = np.mean(p**4)
        xx_out[traj_idx, k] = xdagx_from_correlations(x, c)
        if k in snapshot_samples:
            snap_x[k][traj_idx] = x
            snap_p[k][traj_idx] = p

    record(0)
    for k in range(1, n_samples + 1):
        if noise_on:
            normals = rng.standard_normal((steps_per_sample, n))
        else:
            normals = np.empty((steps_per_sample, 0))
        offset = 0
        while offset < steps_per_sample:
            status, stepped, nclip = _kernels.sc_run_chunk(
                x, p, c, w, ngc, gc, alpha, fric_pref, config.dt, scheme,
                fmode, noise_on, normals[offset:], d_out)
            clipped += nclip
            done_global = (k - 1) * steps_per_sample + offset + stepped
            if status == _kernels.STATUS_BLOWUP:
                raise NumericalBlowupError(
                    "non-finite state during integration",
                    t=done_global * config.dt, step=done_global,
                    trajectory=traj_idx)
            if status == _kernels.STATUS_PSD_FAIL:
                kick = _repair_kick(d_out.copy(), normals[offset + stepped],
                                    config.dt, traj_idx)
                clipped += 1
                st2, _, _ = _kernels.sc_run_chunk(
                    x, p, c, w, ngc, gc, alpha, fric_pref, config.dt, scheme,
                    fmode, False, dummy, d_out)
                if st2 != _kernels.STATUS_OK:
                    raise NumericalBlowupError(
                        "non-finite state during repaired step",
                        t=done_global * config.dt, step=done_global,
                        trajectory=traj_idx)
                p += kick
                offset += stepped + 1
            else:
                offset += stepped
        if not np.all(np.isfinite(c)):
            raise NumericalBlowupError(
                "non-finite correlations after chunk",
                t=k * steps_per_sample * config.dt, trajectory=traj_idx)
        record(k)
    return clipped


def _kurtosis_jackknife(p2_rows, p4_rows):
    """Pooled kurtosis per time plus leave-one-trajectory-out jackknife errors."""
    n_traj = p2_rows.shape[0]
    s2 = np.sum(p2_rows, axis=0)
    s4 = np.sum(p4_rows, axis=0)
    p2 = s2 / n_traj
    p4 = s4 / n_traj
    with np.errstate(divide="ignore", invalid="ignore"):
        kurt = p4 / p2**2
    if n_traj < 2:
        return kurt, np.zeros_like(kurt)
    p2_jack = (s2[None, :] - p2_rows) / (n_traj - 1)
    p4_jack = (s4[None, :] - p4_rows) / (n_traj - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        k_jack = p4_jack / p2_jack**2
    k_mean = np.mean(k_jack, axis=0)
    stderr = np.sqrt((n_traj - 1) / n_traj
                     * np.sum((k_jack - k_mean[None, :]) ** 2, axis=0))
    return kurt, stderr


def simulate_ensemble(params, config, ic, n_traj, master_seed, threads=None):
    """Run n_traj independent semiclassical trajectories and reduce.

    Returns an EnsembleResult whose TimeSeries carries ensemble means and
    standard errors of <p^2>, <Xdag X> and the pooled kurtosis; identical
    (master_seed, n_traj, config) give bitwise-identical outputs regardless
    of the thread count.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    config.check_stability(params)
    times, steps_per_sample, n_samples = _sample_grid(config)
    snapshot_map = _snapshot_samples(times, config.snapshot_times)

    n = params.n_atoms
    p2_arr = np.empty((n_traj, n_samples + 1))
    p4_arr = np.empty((n_traj, n_samples + 1))
    xx_arr = np.empty((n_traj, n_samples + 1))
    snap_x = {k: np.empty((n_traj, n)) for k in snapshot_map}
    snap_p = {k: np.empty((n_traj, n)) for k in snapshot_map}

    def work(idx):
        return _run_trajectory(idx, params, config, ic, master_seed,
                               steps_per_sample, n_samples, set(snapshot_map),
                               p2_arr, p4_arr, xx_arr, snap_x, snap_p)

    threads = threads or default_threads()
    threads = max(1, min(threads, n_traj))
    if threads == 1:
        clipped = sum(work(i) for i in range(n_traj))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            clipped = sum(pool.map(work, range(n_traj)))

    kurt, kurt_err = _kurtosis_jackknife(p2_arr, p4_arr)
    sqrt_n = np.sqrt(n_traj)
    channels = {
        "p2_mean": np.mean(p2_arr, axis=0),
        "p2_stderr": (np.std(p2_arr, axis=0, ddof=1) / sqrt_n
                      if n_traj > 1 else np.zeros(n_samples + 1)),
        "p4_mean": np.mean(p4_arr, axis=0),
        "xdagx": np.mean(xx_arr, axis=0),
        "xdagx_stderr": (np.std(xx_arr, axis=0, ddof=1) / sqrt_n
                         if n_traj > 1 else np.zeros(n_samples + 1)),
        "kurtosis": kurt,
        "kurtosis_stderr": kurt_err,
    }
    meta = {
        "engine": "semiclassical",
        "n_traj": n_traj,
        "master_seed": int(master_seed),
        "n_atoms": params.n_atoms,
        "clipped_steps": int(clipped),
        "version": __version_tag__,
    }
    series = TimeSeries(times=times, channels=channels, meta=meta)
    snapshots = {snapshot_map[k]: {"x": snap_x[k], "p": snap_p[k]}
                 for k in snapshot_map}
    return EnsembleResult(series=series, snapshots=snapshots,
                          clipped_steps=int(clipped),
                          per_trajectory={"p2": p2_arr, "p4": p4_arr,
                                          "xdagx": xx_arr})
