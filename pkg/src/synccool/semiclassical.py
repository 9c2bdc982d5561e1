"""Semiclassical stochastic dynamics with second-order cumulant spin correlations.

State per trajectory: positions x_j, momenta p_j and the N x N matrix
C_jl = <sigma_j^dag sigma_l>.  After the cavity has been eliminated the
momenta feel an adiabatic dipole force, a velocity-dependent retarded force
and a Gaussian noise whose covariance D_jl is set by the spin correlations;
the correlations themselves evolve under the pump and the collective
cavity-mediated coupling.

The functions in this module are the plain-numpy reference implementations;
the chunked numba kernel used for production ensembles lives in _kernels and
is cross-checked against these in the tests.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConsistencyError,
    InvalidParameterError,
    NumericalBlowupError,
    PSDViolationError,
)
from .params import MASS, WAVELENGTH

FORCE_MODES = ("full", "adiabatic-only", "friction-only")
SCHEMES = ("heun", "euler-maruyama")

# PSD repair tolerance: eigenvalues of the noise covariance above
# -PSD_TOL * max_eigenvalue are clipped to zero, anything lower is an error.
PSD_TOL = 1e-8


@dataclass
class SemiclassicalState:
    """Trajectory state: time, positions, momenta, spin-correlation matrix."""

    t: float
    x: np.ndarray
    p: np.ndarray
    corr: np.ndarray

    def copy(self):
        return SemiclassicalState(self.t, self.x.copy(), self.p.copy(),
                                  self.corr.copy())

    def validate(self, hermiticity_tol=1e-10, population_tol=1e-8):
        c = self.corr
        herm = np.max(np.abs(c - c.conj().T))
        if herm > hermiticity_tol:
            raise ConsistencyError(f"C non-Hermitian: max|C-C^dag| = {herm:.3e}")
        diag = np.diag(c).real
        if np.any(diag < -population_tol) or np.any(diag > 1.0 + population_tol):
            raise ConsistencyError(
                f"populations outside [0,1]: min={diag.min():.3e}, max={diag.max():.3e}"
            )


@dataclass(frozen=True)
class IntegrationConfig:
    """Time stepping controls shared by both engines."""

    dt: float = 2e-3
    t_end: float = 500.0
    scheme: str = "heun"
    force_mode: str = "full"
    noise_enabled: bool = True
    sample_every: float = 0.5
    snapshot_times: tuple = ()

    def __post_init__(self):
        if self.dt <= 0:
            raise InvalidParameterError(f"dt must be positive, got {self.dt}")
        if self.t_end <= 0:
            raise InvalidParameterError(f"t_end must be positive, got {self.t_end}")
        if self.scheme not in SCHEMES:
            raise InvalidParameterError(
                f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.force_mode not in FORCE_MODES:
            raise InvalidParameterError(
                f"force_mode must be one of {FORCE_MODES}, got {self.force_mode!r}")
        if self.sample_every <= 0:
            raise InvalidParameterError("sample_every must be positive")

    def check_stability(self, params):
        """Warn when dt resolves the fastest retained rate only marginally."""
        rate = max(params.w_pump, params.n_gamma_c)
        if self.dt * rate >= 0.1:
            warnings.warn(
                f"dt*max(w, NGc) = {self.dt * rate:.3g} >= 0.1; "
                "the integration may be under-resolved", stacklevel=2)


@dataclass(frozen=True)
class InitialCondition:
    """Thermal momenta, uniform positions over one wavelength, all atoms excited."""

    p2_initial: float = 5.0
    dipole_seed_eps: float = 1e-3   # used by the mean-field engine only

    def __post_init__(self):
        if self.p2_initial < 0:
            raise InvalidParameterError("p2_initial must be nonnegative")


def initial_state(params, ic, rng):
    """Draw the all-excited initial state: C = identity, x uniform, p thermal."""
    n = params.n_atoms
    x = rng.uniform(0.0, WAVELENGTH, n)
    p = rng.normal(0.0, np.sqrt(ic.p2_initial), n) if ic.p2_initial > 0 else np.zeros(n)
    corr = np.eye(n, dtype=complex)
    return SemiclassicalState(t=0.0, x=x, p=p, corr=corr)


# ---------------------------------------------------------------------------
# Right-hand sides
# ---------------------------------------------------------------------------

def _xdag_sigma(cosx, corr):
    """<Xdag sigma_j> = (1/N) sum_l cos(kx_l) C_lj for every j."""
    return cosx @ corr / corr.shape[0]


def cumulant_derivatives(state, params):
    """dC/dt of the second-order cumulant spin-correlation matrix.

    Diagonal: pump repopulation plus collective emission through the cavity.
    Off-diagonal: single-atom decay/pump damping plus the collective drive
    that builds synchronization.  Hermitian whenever the input is.
    """
    c = state.corr
    n = c.shape[0]
    cosx = np.cos(state.x)
    w = params.w_pump
    ngc = params.n_gamma_c
    gc = ngc / n
    alpha = params.alpha
    ia = 1j * alpha

    xds = _xdag_sigma(cosx, c)               # <Xdag sigma_j>
    diag = np.diag(c).real
    a = gc * ia * cosx**2 * diag             # single-atom damping rates
    u = 0.5 * ngc * ia * cosx * (2.0 * diag - 1.0)

    dc = -(w + a[:, None] + a.conj()[None, :]) * c
    dc += u[:, None] * xds[None, :]
    dc += (u[:, None] * xds[None, :]).conj().T
    # exact population equation on the diagonal
    np.fill_diagonal(dc, w * (1.0 - diag) + ngc * (alpha * xds).imag * cosx)
    return dc


def forces(state, params, force_mode="full"):
    """Per-atom force in units hbar*k*omega_R.

    Adiabatic part: -hbar k sin(kx_j) NGc Re[alpha <Xdag sigma_j>].
    Retarded part: the velocity-dependent cavity friction built from the
    sin-weighted momentum contraction of the correlation matrix.
    """
    if force_mode not in FORCE_MODES:
        raise InvalidParameterError(f"unknown force_mode {force_mode!r}")
    c = state.corr
    n = c.shape[0]
    cosx = np.cos(state.x)
    sinx = np.sin(state.x)
    ngc = params.n_gamma_c
    alpha = params.alpha
    f = np.zeros(n)
    if force_mode in ("full", "adiabatic-only"):
        xds = _xdag_sigma(cosx, c)
        f -= sinx * ngc * (alpha * xds).real
    if force_mode in ("full", "friction-only"):
        y = (sinx * state.p) @ c / n
        pref = ngc * params.kappa / (params.delta**2 + params.kappa**2 / 4.0)
        f -= pref * sinx * (1j * alpha**2 * y).real
    return f


def diffusion_matrix(state, params):
    """Momentum-noise covariance D_jl = Gc sin(kx_j) sin(kx_l) Re C_lj."""
    sinx = np.sin(state.x)
    gc = params.gamma_c
    return gc * np.outer(sinx, sinx) * state.corr.real.T


def sample_noise(diff, dt, rng, psd_tol=PSD_TOL):
    """One momentum-kick vector with covariance diff*dt.

    The covariance is factorized by symmetric eigendecomposition; eigenvalues
    within -psd_tol * max_eigenvalue of zero are clipped to zero (the PSD
    repair path for small integration drift), anything more negative raises.
    """
    diff = np.asarray(diff, dtype=float)
    evals, evecs = np.linalg.eigh(diff)
    top = max(float(evals[-1]), 0.0)
    tol = psd_tol * (top if top > 0.0 else 1.0)
    worst = float(evals[0])
    if worst < -tol:
        raise PSDViolationError(worst, -tol)
    # zero out the numerical-noise eigenvalues (|lambda| < eps * lambda_max)
    # along with the negative ones, so rank-deficient covariances factor cleanly
    clipped = np.where(evals > 1e-12 * top, evals, 0.0)
    factor = evecs * np.sqrt(clipped)
    z = rng.standard_normal(diff.shape[0])
    return factor @ z * np.sqrt(dt)


# ---------------------------------------------------------------------------
# Stepping
# ---------------------------------------------------------------------------

def _drift(state, params, force_mode):
    dx = state.p / MASS
    dp = forces(state, params, force_mode)
    dc = cumulant_derivatives(state, params)
    return dx, dp, dc


def _finalize_corr(corr):
    """Re-Hermitize and clamp populations into [0, 1]."""
    corr = 0.5 * (corr + corr.conj().T)
    np.fill_diagonal(corr, np.clip(np.diag(corr).real, 0.0, 1.0))
    return corr


def step(state, params, config, rng=None):
    """Advance one time step.

    Deterministic part by the configured scheme (Heun default, plain Euler for
    euler-maruyama); the stochastic momentum kick always enters Euler-Maruyama
    style, with the covariance evaluated at the pre-step state.
    """
    dt = config.dt
    kick = None
    if config.noise_enabled:
        if rng is None:
            raise InvalidParameterError("noise_enabled requires an rng")
        kick = sample_noise(diffusion_matrix(state, params), dt, rng)

    dx1, dp1, dc1 = _drift(state, params, config.force_mode)
    if config.scheme == "heun":
        pred = SemiclassicalState(
            t=state.t + dt,
            x=state.x + dt * dx1,
            p=state.p + dt * dp1,
            corr=state.corr + dt * dc1,
        )
        dx2, dp2, dc2 = _drift(pred, params, config.force_mode)
        x = state.x + 0.5 * dt * (dx1 + dx2)
        p = state.p + 0.5 * dt * (dp1 + dp2)
        corr = state.corr + 0.5 * dt * (dc1 + dc2)
    else:
        x = state.x + dt * dx1
        p = state.p + dt * dp1
        corr = state.corr + dt * dc1

    if kick is not None:
        p = p + kick
    corr = _finalize_corr(corr)
    new = SemiclassicalState(t=state.t + dt, x=x, p=p, corr=corr)
    if not (np.all(np.isfinite(new.p)) and np.all(np.isfinite(new.x))
            and np.all(np.isfinite(new.corr))):
        raise NumericalBlowupError("non-finite state after step",
                                   t=new.t, step=None)
    return new
