"""Deterministic mean-field dynamics of dipoles, inversions and motion.

Particle-particle correlations are factorized, <sigma_j^dag sigma_l> ->
s_j^* s_l for j != l, while the correlations between each spin and its own
position are kept.  Pump noise and cavity shot noise are absent by
construction, so the only symmetry breaking is the random initial dipole
seed: s = 0 is an exact invariant manifold and would stay dark forever.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConsistencyError, InvalidParameterError, NumericalBlowupError
from .observables import TimeSeries
from .params import MASS, WAVELENGTH, order_parameter
from .rng import rng_stream

BLOCH_TOL = 1e-6
INVERSION_TOL = 1e-8


@dataclass
class MeanFieldState:
    """Positions, momenta, complex dipoles s_j and inversions z_j."""

    t: float
    x: np.ndarray
    p: np.ndarray
    s: np.ndarray
    z: np.ndarray

    def copy(self):
        return MeanFieldState(self.t, self.x.copy(), self.p.copy(),
                              self.s.copy(), self.z.copy())

    def validate(self):
        r = 4.0 * np.abs(self.s) ** 2 + self.z**2
        if np.any(r > 1.0 + BLOCH_TOL):
            raise ConsistencyError(
                f"state outside the Bloch ball: max 4|s|^2+z^2 = {r.max():.8f}")
        if np.any(np.abs(self.z) > 1.0 + INVERSION_TOL):
            raise ConsistencyError(
                f"inversion out of range: max|z| = {np.max(np.abs(self.z)):.8f}")


def initial_meanfield_state(params, ic, rng):
    """Uniform positions, thermal momenta, all atoms excited with a tiny
    random-phase dipole seed that breaks the dark s = 0 symmetry.

    Each spin starts as a pure state tipped from the pole by the seed, z(0) =
    sqrt(1 - 4 eps^2), so the state sits exactly on the Bloch sphere rather
    than outside it.
    """
    n = params.n_atoms
    x = rng.uniform(0.0, WAVELENGTH, n)
    p = rng.normal(0.0, np.sqrt(ic.p2_initial), n) if ic.p2_initial > 0 else np.zeros(n)
    phases = rng.uniform(0.0, 2.0 * np.pi, n)
    eps = ic.dipole_seed_eps
    s = eps * np.exp(1j * phases)
    z = np.full(n, np.sqrt(max(0.0, 1.0 - 4.0 * eps * eps)))
    return MeanFieldState(t=0.0, x=x, p=p, s=s, z=z)


def meanfield_derivatives(state, params):
    """Time derivatives (dx, dp, ds, dz) of the mean-field equations."""
    cosx = np.cos(state.x)
    sinx = np.sin(state.x)
    w = params.w_pump
    ngc = params.n_gamma_c
    alpha = params.alpha
    big_x = np.mean(state.s * cosx)
    ds = -0.5 * w * state.s - 0.5j * ngc * np.conj(alpha) * big_x * cosx * state.z
    dz = w * (1.0 - state.z) + 2.0 * ngc * (alpha * np.conj(big_x) * state.s).imag * cosx
    dx = state.p / MASS
    dp = -sinx * ngc * (alpha * np.conj(big_x) * state.s).real
    return dx, dp, ds, dz


def meanfield_xdagx(state):
    """<Xdag X> under mean-field factorization: |X|^2 plus the diagonal
    correction (1/N^2) sum_j cos^2(kx_j) [(1+z_j)/2 - |s_j|^2]."""
    cosx = np.cos(state.x)
    n = len(state.x)
    big_x = np.mean(state.s * cosx)
    diag = cosx**2 * (0.5 * (1.0 + state.z) - np.abs(state.s) ** 2)
    return abs(big_x) ** 2 + float(np.sum(diag)) / n**2


def meanfield_simulate(params, config, ic=None, seed=0, initial=None,
                       freeze_positions=False, validate_every_sample=True):
    """RK4 integration of one mean-field trajectory.

    Records <p^2>, |X|^2, the mean-field <Xdag X>, arg X and cos(arg X) on the
    sample grid; returns (TimeSeries, final state, snapshots).  An explicit
    ``initial`` state overrides the stochastic initialization.
    """
    if initial is None:
        if ic is None:
            raise InvalidParameterError("either ic or initial must be given")
        state = initial_meanfield_state(params, ic, rng_stream(seed, 0))
    else:
        state = initial.copy()
    config.check_stability(params)

    steps_per_sample = max(1, int(round(config.sample_every / config.dt)))
    n_samples = int(round(config.t_end / (steps_per_sample * config.dt)))
    times = np.arange(n_samples + 1) * (steps_per_sample * config.dt)
    snap_idx = {}
    for t in config.snapshot_times:
        snap_idx[int(np.argmin(np.abs(times - t)))] = None

    x, p, s, z = state.x, state.p, state.s, state.z
    alpha = complex(params.alpha)

    p2 = np.empty(n_samples + 1)
    p4 = np.empty(n_samples + 1)
    x_abs2 = np.empty(n_samples + 1)
    xdagx = np.empty(n_samples + 1)
    arg_x = np.empty(n_samples + 1)
    z_mean = np.empty(n_samples + 1)
    snapshots = {}

    def record(k):
        p2[k] = np.mean(p * p)
        p4[k] = np.mean(p**4)
        big_x = order_parameter(x, s)
        x_abs2[k] = abs(big_x) ** 2
        arg_x[k] = np.angle(big_x)
        cur = MeanFieldState(times[k], x, p, s, z)
        xdagx[k] = meanfield_xdagx(cur)
        z_mean[k] = np.mean(z)
        if validate_every_sample:
            cur.validate()
        if k in snap_idx:
            snapshots[float(times[k])] = {
                "x": x.copy(), "p": p.copy(), "s": s.copy(), "z": z.copy()}

    record(0)
    for k in range(1, n_samples + 1):
        status, stepped = _kernels.mf_run_chunk(
            x, p, s, z, params.w_pump, params.n_gamma_c, alpha,
            config.dt, steps_per_sample, freeze_positions)
        if status != _kernels.STATUS_OK:
            done = (k - 1) * steps_per_sample + stepped
            raise NumericalBlowupError("non-finite mean-field state",
                                       t=done * config.dt, step=done)
        record(k)

    channels = {
        "p2_mean": p2,
        "p4_mean": p4,
        "x_abs2": x_abs2,
        "xdagx": xdagx,
        "arg_x": arg_x,
        "cos_arg_x": np.cos(arg_x),
        "z_mean": z_mean,
    }
    meta = {
        "engine": "meanfield",
        "master_seed": int(seed),
        "n_atoms": params.n_atoms,
        "freeze_positions": bool(freeze_positions),
    }
    final = MeanFieldState(t=float(times[-1]), x=x, p=p, s=s, z=z)
    return TimeSeries(times=times, channels=channels, meta=meta), final, snapshots
