"""Synchronization-assisted cavity cooling: semiclassical and mean-field toolkit.

Simulates incoherently pumped two-level atoms moving along the axis of a lossy
standing-wave cavity after adiabatic elimination of the field, tracks the
build-up of the synchronization order parameter, and evaluates the analytic
steady-state theory (profiles, effective potential, friction, diffusion,
fluctuation-dissipation momentum width).

Units everywhere: hbar = k = omega_R = 1 (recoil units), mass m = 1/2.
"""

__version__ = "0.1.0"

from .ensemble import EnsembleResult, simulate_ensemble
from .errors import (
    ConfigError,
    ConsistencyError,
    InvalidParameterError,
    NumericalBlowupError,
    PSDViolationError,
    SynccoolError,
    UndefinedKurtosisError,
)
from .meanfield import (
    MeanFieldState,
    initial_meanfield_state,
    meanfield_derivatives,
    meanfield_simulate,
    meanfield_xdagx,
)
from .observables import (
    Histogram,
    TimeSeries,
    histogram1d,
    histogram2d,
    laplace_spectrum,
    moments,
    spectrum_peaks,
)
from .params import (
    MASS,
    WAVELENGTH,
    PhysicalParams,
    cavity_alpha,
    g_from_n_gamma_c,
    gamma_c,
    order_parameter,
    photon_number_estimate,
    saturation_xi,
    xdagx_from_correlations,
)
from .rng import restore_stream, rng_stream, stream_state
from .semiclassical import (
    InitialCondition,
    IntegrationConfig,
    SemiclassicalState,
    cumulant_derivatives,
    diffusion_matrix,
    forces,
    initial_state,
    sample_noise,
    step,
)
from .steady_state import (
    SteadyStateSolution,
    diffusion_closed,
    diffusion_oracle,
    friction_force,
    friction_from_s1,
    friction_sign_threshold,
    gamma_coeff,
    mean_hamiltonian,
    momentum_scale_sq,
    omega0,
    optimal_pump,
    p2_infinity,
    profiles_s0_z0,
    s1_z1,
    salzburger_zn,
    separatrix_energy,
    solve_steady_state,
    solve_x2_density,
    solve_x2_pinned,
    solve_x2_uniform,
    sweep_optimal,
    v_eff,
    x0_roots,
)
