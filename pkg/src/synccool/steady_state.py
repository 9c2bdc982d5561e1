"""Asymptotic (synchronized) steady-state theory.

Everything here treats the regime where the dipoles have locked: the internal
degrees of freedom follow the slow atomic motion adiabatically, the order
parameter X is static in a frame rotating at omega0 = w*delta/kappa, and the
motion is governed by an effective potential, a position-dependent friction
gamma(x) and a momentum diffusion D(x).  The phase of X is gauged away: all
formulas below take |X|^2 (written x2) and use the real saturation profile
xi(x) = (NGc/w) sqrt(x2) cos(kx).

Units: hbar = k = omega_R = 1 (see params module), so energies are in
hbar*omega_R, momenta in hbar*k and rates in omega_R.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .params import MASS, WAVELENGTH, cavity_alpha, saturation_xi

# Midpoint quadrature resolution for spatial averages over one wavelength.
# Exact to well below 1e-12 for the trigonometric integrands that appear here.
QUADRATURE_POINTS = 1024

BISECT_MAX_ITER = 200


def _position_grid(n=QUADRATURE_POINTS):
    """Midpoint grid over one cavity wavelength."""
    return (np.arange(n) + 0.5) * (WAVELENGTH / n)


# ---------------------------------------------------------------------------
# Self-consistent order parameter
# ---------------------------------------------------------------------------

def solve_x2_uniform(w_pump, n_gamma_c):
    """|X|^2 for atoms spread homogeneously over the standing wave.

    Closed form of the self-consistency condition after the spatial average;
    zero at and above the uniform upper synchronization threshold w = NGc/2.
    """
    if w_pump <= 0:
        raise InvalidParameterError(f"w_pump must be positive, got {w_pump}")
    r = w_pump / n_gamma_c
    val = 0.5 * r * (1.0 - r * (0.5 + np.sqrt(1.0 / r + 0.25)))
    return max(0.0, float(val))


def solve_x2_pinned(w_pump, n_gamma_c, delta_pin):
    """|X|^2 for atoms pinned at positions with cos(kx) = +/- delta_pin.

    delta_pin = 1 is the antinode lattice with threshold w = NGc; delta_pin = 0
    (nodes) only supports the unsynchronized solution.
    """
    if w_pump <= 0:
        raise InvalidParameterError(f"w_pump must be positive, got {w_pump}")
    if not 0.0 <= delta_pin <= 1.0:
        raise InvalidParameterError(f"delta_pin must lie in [0, 1], got {delta_pin}")
    if delta_pin == 0.0:
        return 0.0
    r = w_pump / n_gamma_c
    val = 0.5 * r * (1.0 - r / delta_pin**2)
    return max(0.0, float(val))


def solve_x2_density(w_pump, n_gamma_c, positions, tol=1e-12):
    """|X|^2 for an arbitrary empirical position set, by bisection.

    Solves (1/N) sum_j |xi_j|^2/(1+2|xi_j|^2) = (NGc/w) |X|^2 for the nonzero
    root when one exists.  The reduced residual is strictly decreasing in
    |X|^2, so the nonzero root is unique; when only the trivial root exists the
    function returns 0.
    """
    if w_pump <= 0:
        raise InvalidParameterError(f"w_pump must be positive, got {w_pump}")
    cos2 = np.cos(np.asarray(positions, dtype=float)) ** 2
    ratio = n_gamma_c / w_pump
    zeta2 = ratio**2 * cos2  # |xi_j|^2 = zeta2_j * x2

    def residual(x2):
        u = zeta2 * x2
        return float(np.mean(u / (1.0 + 2.0 * u)) - ratio * x2)

    # d residual/d x2 at 0+ decides whether a nonzero root exists.
    slope0 = float(np.mean(zeta2)) - ratio
    if slope0 <= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    if residual(hi) > 0.0:
        # cannot happen for physical parameters (|X| <= 1/2), guard anyway
        return hi
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def profiles_s0_z0(x, x2, w_pump, n_gamma_c):
    """Stationary dipole s0(x) and inversion z0(x) profiles (real gauge).

    s0 = xi/(1+2 xi^2) flips sign at every node of cos(kx) while z0 =
    1/(1+2 xi^2) peaks at 1 exactly at the nodes: the antiferromagnetic-like
    order of the synchronized phase.
    """
    xi = saturation_xi(np.asarray(x, dtype=float), np.sqrt(x2), w_pump, n_gamma_c).real
    denom = 1.0 + 2.0 * xi * xi
    return xi / denom, 1.0 / denom


def omega0(w_pump, delta, kappa):
    """Frequency of the collective dipole in the lab frame, w*delta/kappa."""
    if kappa <= 0:
        raise InvalidParameterError(f"kappa must be positive, got {kappa}")
    return w_pump * delta / kappa


# ---------------------------------------------------------------------------
# Effective potential and separatrix
# ---------------------------------------------------------------------------

def v_eff(x, x2, w_pump, delta, kappa, n_gamma_c):
    """Per-particle effective potential -(w/4)(delta/(kappa/2)) log(1+2 xi^2).

    For delta > 0 the minima sit at the antinodes cos(kx) = +/-1; the depth
    vanishes with the order parameter.
    """
    d = delta / (kappa / 2.0)
    xi = saturation_xi(np.asarray(x, dtype=float), np.sqrt(x2), w_pump, n_gamma_c).real
    return -(w_pump / 4.0) * d * np.log1p(2.0 * xi * xi)


def mean_hamiltonian(x, p, x2, w_pump, delta, kappa, n_gamma_c):
    """Single-particle energy p^2/2m + V_eff(x) of the synchronized phase."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    return p * p / (2.0 * MASS) + v_eff(x, x2, w_pump, delta, kappa, n_gamma_c)


def friction_sign_threshold(delta, kappa):
    """Saturation |xi|^2 at which the friction changes sign.

    Returns (sqrt(2|alpha|^2+1) - 1)/(2|alpha|^2) with |alpha|^2 =
    1 + (delta/(kappa/2))^2.  Below this value the retarded force damps the
    motion (for delta > 0), above it anti-damps.
    """
    a2 = abs(cavity_alpha(delta, kappa)) ** 2
    return (np.sqrt(2.0 * a2 + 1.0) - 1.0) / (2.0 * a2)


def x0_roots(x2, w_pump, delta, kappa, n_gamma_c):
    """Positions in [0, pi] where the friction coefficient changes sign.

    Empty when the peak saturation stays below the sign-change threshold, in
    which case the friction is damping everywhere except at the nodes/antinodes
    where it vanishes.  Roots come in pairs mirrored about pi/2.
    """
    if x2 <= 0:
        raise InvalidParameterError(f"x2 must be positive, got {x2}")
    thr = friction_sign_threshold(delta, kappa)
    zeta2 = (n_gamma_c / w_pump) ** 2 * x2
    if zeta2 < thr:
        return np.array([])
    c = np.sqrt(thr / zeta2)
    root = float(np.arccos(c))
    return np.array([root, np.pi - root])


def separatrix_energy(x2, w_pump, delta, kappa, n_gamma_c):
    """Energy E0 = -(w/4) log(1+2 xi(x0)^2) of the sign-change orbit.

    This is the mean-field energy of the trajectory whose kinetic energy
    vanishes exactly where the non-conservative force changes sign; phase-space
    density piles up around it.  Returns None when there is no sign change.
    """
    if x2 <= 0:
        return None
    thr = friction_sign_threshold(delta, kappa)
    zeta2 = (n_gamma_c / w_pump) ** 2 * x2
    if zeta2 < thr:
        return None
    return float(-(w_pump / 4.0) * np.log1p(2.0 * thr))


# ---------------------------------------------------------------------------
# Friction and first-order retardation corrections
# ---------------------------------------------------------------------------

def _f_delta(u, d):
    """Bracket F_Delta(u) = (1-2u)/(1+d^2) - 2u^2 controlling the friction sign."""
    return (1.0 - 2.0 * u) / (1.0 + d * d) - 2.0 * u * u


def gamma_coeff(x, x2, w_pump, delta, kappa, n_gamma_c):
    """Friction coefficient gamma(x); gamma > 0 means damping, F_ret = -gamma(x) p.

    gamma = 8 * d * F_Delta(xi^2) * xi^2 tan^2(kx) / (1+2 xi^2)^3 in recoil
    units.  The xi^2 tan^2 product is evaluated as zeta^2 sin^2(kx) (xi^2 is
    proportional to cos^2), which is finite on the whole wavelength including
    the nodes.
    """
    x = np.asarray(x, dtype=float)
    d = delta / (kappa / 2.0)
    zeta2 = (n_gamma_c / w_pump) ** 2 * x2
    u = zeta2 * np.cos(x) ** 2          # xi(x)^2
    safe = zeta2 * np.sin(x) ** 2       # xi^2 tan^2, cancellation-free
    return 8.0 * d * _f_delta(u, d) * safe / (1.0 + 2.0 * u) ** 3


def friction_force(x, p, x2, w_pump, delta, kappa, n_gamma_c):
    """Retarded (friction) force F_ret = -gamma(x) p."""
    return -gamma_coeff(x, x2, w_pump, delta, kappa, n_gamma_c) * np.asarray(p, dtype=float)


def s1_z1(x, x2, w_pump, delta, kappa, n_gamma_c):
    """First-order retardation corrections (s1, z1) to the spin profiles.

    These are the closed-form linear responses of the adiabatically eliminated
    spin to a slow drift of the atom, normalized so that s = s0 + (p/m) s1 and
    z = z0 + (p/m) z1.  The tan(kx)*xi products are assembled from
    zeta*sin(kx) factors so both stay finite at the nodes.
    """
    x = np.asarray(x, dtype=float)
    d = delta / (kappa / 2.0)
    alpha_c = d + 1.0j
    zeta = (n_gamma_c / w_pump) * np.sqrt(x2)
    cos = np.cos(x)
    sin = np.sin(x)
    u = (zeta * cos) ** 2               # xi^2
    denom = 1.0 + 2.0 * u
    # tan*xi^2 = zeta^2 sin cos ; tan*xi = zeta sin
    tan_xi2 = zeta * zeta * sin * cos
    tan_xi = zeta * sin
    z1 = (-(1.0 / w_pump) * 4.0 * tan_xi2 / denom**3
          + (4.0 / w_pump) * (1.0 - d * d) / (1.0 + d * d)
          * tan_xi2 * (2.0 * u - 1.0) / denom**3)
    s1 = (zeta * cos * z1
          + (2.0 / w_pump) * (1.0 / (1.0j * alpha_c)) * tan_xi * (2.0 * u - 1.0) / denom**2)
    return s1, z1


def friction_from_s1(x, x2, w_pump, delta, kappa, n_gamma_c):
    """Friction coefficient assembled from the retardation correction s1.

    Independent route to gamma(x): plugs s1 back into the retarded part of the
    adiabatic force, F_ret = -(1/m) p sin(kx) * NGc X * Re(alpha s1) with
    NGc X = w zeta in the real gauge, so gamma = (1/m) w zeta sin(kx)
    Re(alpha s1).  Agrees with gamma_coeff analytically, nodes included.
    """
    x = np.asarray(x, dtype=float)
    alpha = cavity_alpha(delta, kappa)
    zeta = (n_gamma_c / w_pump) * np.sqrt(x2)
    s1, _ = s1_z1(x, x2, w_pump, delta, kappa, n_gamma_c)
    return (1.0 / MASS) * w_pump * zeta * np.sin(x) * (alpha * s1).real


# ---------------------------------------------------------------------------
# Momentum diffusion: closed form and quantum-regression oracle
# ---------------------------------------------------------------------------

def diffusion_closed(x, x2, w_pump, delta, kappa, n_gamma_c):
    """Momentum diffusion 2D(x) of the synchronized phase (closed form).

    Includes the spin noise fed by the incoherent pump.  Evaluated with the
    cancellation-safe zeta^2 sin^2 form of the xi^2 tan^2 prefactor; vanishes
    at sin(kx) = 0 and stays finite at the nodes.
    """
    x = np.asarray(x, dtype=float)
    d = delta / (kappa / 2.0)
    zeta2 = (n_gamma_c / w_pump) ** 2 * x2
    u = zeta2 * np.cos(x) ** 2
    safe = zeta2 * np.sin(x) ** 2
    denom = 1.0 + 2.0 * u
    bracket = (1.0
               + 2.0 * d * d * u / denom
               - 2.0 * (d * d / (1.0 + d * d)) * (u / denom**2)
               * (5.0 + d * d + 4.0 * (d * d + 1.0) * u) / denom)
    return 0.5 * w_pump * safe * bracket


def _spin_drift_matrix(xi, w_pump, delta, kappa):
    """Drift matrix of the (sigma, sigma^dag, sigma^z) block in the rotating frame."""
    alpha = cavity_alpha(delta, kappa)
    ac = np.conj(alpha)
    w = w_pump
    return np.array(
        [
            [0.5j * w * ac, 0.0, -0.5j * w * ac * xi],
            [0.0, -0.5j * w * alpha, 0.5j * w * alpha * xi],
            [-1.0j * w * alpha * xi, 1.0j * w * ac * xi, -w],
        ],
        dtype=complex,
    )


def diffusion_oracle(x, x2, w_pump, delta, kappa, n_gamma_c, check_stationary=True):
    """Momentum diffusion 2D(x) from the quantum-regression integral.

    Independent numeric route: the symmetrized force autocorrelation is
    integrated over lag with int_0^inf exp(Omega tau) d tau = -Omega^{-1},
    with the initial operator products taken exactly in the stationary
    single-spin state.  The pump noise enters through that stationary state
    and the drift matrix; no closed-form expansion is used.
    """
    x = float(x)
    alpha = cavity_alpha(delta, kappa)
    zeta = (n_gamma_c / w_pump) * np.sqrt(x2)
    xi = zeta * np.cos(x)
    omega = _spin_drift_matrix(xi, w_pump, delta, kappa)
    b = np.array([0.0, 0.0, w_pump], dtype=complex)
    v_st = np.linalg.solve(omega, -b)

    u2 = xi * xi
    denom = 1.0 + 2.0 * u2
    s_st = xi / denom
    z_st = 1.0 / denom
    if check_stationary:
        target = np.array([s_st, s_st, z_st], dtype=complex)
        if not np.allclose(v_st, target, atol=1e-10, rtol=1e-10):
            raise InvalidParameterError(
                "spin drift matrix stationary state is inconsistent with the "
                "adiabatic profiles; parameters outside the validity range"
            )
    p_excited = (1.0 + u2) / denom
    p_ground = u2 / denom

    # Force operator F = q1 sigma + conj(q1) sigma^dag with
    # q1 = -(1/2) w tan(kx) xi alpha  (tan*xi = zeta*sin is node-safe).
    q1 = -0.5 * w_pump * zeta * np.sin(x) * alpha
    q = np.array([q1, np.conj(q1), 0.0], dtype=complex)
    f_mean = 2.0 * s_st * q1.real

    # m_i = <F v_i> in the stationary state, exact operator products:
    # sigma sigma = 0, sigma^dag sigma = P_e, sigma sigma^dag = P_g,
    # sigma sigma^z = sigma, sigma^dag sigma^z = -sigma^dag.
    m = np.array(
        [
            np.conj(q1) * p_excited,
            q1 * p_ground,
            q1 * s_st - np.conj(q1) * s_st,
        ],
        dtype=complex,
    )
    init = m - f_mean * v_st
    val = q @ (-np.linalg.solve(omega, init))
    return float(val.real)


# ---------------------------------------------------------------------------
# Asymptotic momentum width and optimization
# ---------------------------------------------------------------------------

def momentum_scale_sq(n_gamma_c):
    """Reference momentum width pbar^2 = (hbar k)^2 NGc/(2 omega_R) in recoil units."""
    return 0.5 * n_gamma_c


def p2_infinity(w_pump, delta, kappa, n_gamma_c):
    """Asymptotic momentum width <p^2>_inf = Dbar/gammabar over a uniform density.

    The numerator is the wavelength average of the full noise power 2D(x)
    (the delta-correlation convention <xi xi'> = 2D delta), which reproduces
    the threshold limit <p^2>_inf/2m = hbar w/8 at delta = kappa/2.  At and
    above the uniform synchronization threshold the xi -> 0 pointwise limit
    w(1+d^2)/(16 d) is returned.  A non-damping average (gammabar <= 0) yields
    inf: no finite fluctuation-dissipation width exists there.
    """
    d = delta / (kappa / 2.0)
    if d == 0.0:
        return np.inf
    x2 = solve_x2_uniform(w_pump, n_gamma_c)
    if x2 == 0.0:
        val = w_pump * (1.0 + d * d) / (16.0 * d)
        return val if val > 0 else np.inf
    grid = _position_grid()
    d_bar = float(np.mean(diffusion_closed(grid, x2, w_pump, delta, kappa, n_gamma_c)))
    g_bar = float(np.mean(gamma_coeff(grid, x2, w_pump, delta, kappa, n_gamma_c)))
    if g_bar <= 0.0:
        return np.inf
    return d_bar / g_bar


def optimal_pump(delta, kappa, n_gamma_c, w_grid=None):
    """Pump rate minimizing <p^2>_inf at fixed detuning, with parabolic refinement.

    Returns (w_min, p2_min).  The scan covers the synchronization window up to
    the uniform threshold NGc/2 unless an explicit grid is given.
    """
    if w_grid is None:
        w_grid = np.linspace(0.02, 0.499, 120) * n_gamma_c
    w_grid = np.asarray(w_grid, dtype=float)
    vals = np.array([p2_infinity(w, delta, kappa, n_gamma_c) for w in w_grid])
    if not np.any(np.isfinite(vals)):
        return np.nan, np.inf
    i = int(np.nanargmin(np.where(np.isfinite(vals), vals, np.nan)))
    w_min, p2_min = w_grid[i], vals[i]
    if 0 < i < len(w_grid) - 1 and np.all(np.isfinite(vals[i - 1 : i + 2])):
        # parabola through the three points around the discrete minimum
        y0, y1, y2 = vals[i - 1 : i + 2]
        denom = y0 - 2.0 * y1 + y2
        if denom > 0:
            shift = 0.5 * (y0 - y2) / denom
            shift = float(np.clip(shift, -1.0, 1.0))
            w_ref = w_grid[i] + shift * (w_grid[i + 1] - w_grid[i])
            p2_ref = p2_infinity(w_ref, delta, kappa, n_gamma_c)
            if p2_ref <= p2_min:
                w_min, p2_min = w_ref, p2_ref
    return float(w_min), float(p2_min)


def sweep_optimal(delta_grid, kappa, n_gamma_c, w_grid=None):
    """Tables (w_min(delta), <p^2>_min(delta)) over a detuning grid.

    Grid search over w per detuning with parabolic refinement around the
    discrete minimum; refinement never increases the minimum.
    """
    delta_grid = np.asarray(delta_grid, dtype=float)
    if delta_grid.size == 0:
        raise InvalidParameterError("delta grid must be non-empty")
    w_min = np.empty_like(delta_grid)
    p2_min = np.empty_like(delta_grid)
    for i, delta in enumerate(delta_grid):
        w_min[i], p2_min[i] = optimal_pump(delta, kappa, n_gamma_c, w_grid=w_grid)
    return w_min, p2_min


# ---------------------------------------------------------------------------
# Comparison with the single-atom-correlation (non-synchronized) laser regime
# ---------------------------------------------------------------------------

def salzburger_zn(w_pump, kappa, n_atoms, g, delta):
    """Stationary inversion z_N of the incoherently pumped cavity laser model
    with factorized atom-atom correlations (no synchronization), in the
    no-spontaneous-emission, N*g^2 = const limit.

    Gamma = w g^2/(w^2+delta^2); z_N = (kappa + NGamma - sqrt((kappa+NGamma)^2
    - 4 kappa NGamma))/(2 NGamma).  Equals 1 whenever kappa >= N*Gamma.
    """
    gamma = w_pump * g * g / (w_pump * w_pump + delta * delta)
    n_gamma = n_atoms * gamma
    if n_gamma <= 0:
        raise InvalidParameterError(f"N*Gamma must be positive, got {n_gamma}")
    disc = (kappa + n_gamma) ** 2 - 4.0 * kappa * n_gamma
    return (kappa + n_gamma - np.sqrt(max(disc, 0.0))) / (2.0 * n_gamma)


# ---------------------------------------------------------------------------
# Bundled solution object
# ---------------------------------------------------------------------------

@dataclass
class SteadyStateSolution:
    """Self-consistent steady state on a position grid."""

    x2: float
    omega0: float
    regime: str
    x_grid: np.ndarray
    s0: np.ndarray
    z0: np.ndarray
    v_eff: np.ndarray
    gamma: np.ndarray
    diffusion: np.ndarray
    e0: float = field(default=None)
    x0: np.ndarray = field(default=None)


def solve_steady_state(params, regime="uniform", delta_pin=1.0, positions=None,
                       n_grid=QUADRATURE_POINTS):
    """Solve the order parameter and tabulate all steady-state profiles.

    regime: "uniform" (homogeneous density closed form), "pinned(delta)" via
    delta_pin, or "empirical-density" with explicit positions.
    """
    w, ngc = params.w_pump, params.n_gamma_c
    if regime == "uniform":
        x2 = solve_x2_uniform(w, ngc)
    elif regime == "pinned":
        x2 = solve_x2_pinned(w, ngc, delta_pin)
    elif regime == "empirical-density":
        if positions is None:
            raise InvalidParameterError("empirical-density regime needs positions")
        x2 = solve_x2_density(w, ngc, positions)
    else:
        raise InvalidParameterError(f"unknown regime {regime!r}")
    grid = _position_grid(n_grid)
    s0, z0 = profiles_s0_z0(grid, x2, w, ngc)
    pot = v_eff(grid, x2, w, params.delta, params.kappa, ngc)
    gam = gamma_coeff(grid, x2, w, params.delta, params.kappa, ngc)
    dif = diffusion_closed(grid, x2, w, params.delta, params.kappa, ngc)
    roots = x0_roots(x2, w, params.delta, params.kappa, ngc) if x2 > 0 else np.array([])
    e0 = separatrix_energy(x2, w, params.delta, params.kappa, ngc) if x2 > 0 else None
    return SteadyStateSolution(
        x2=x2,
        omega0=omega0(w, params.delta, params.kappa),
        regime=regime,
        x_grid=grid,
        s0=s0,
        z0=z0,
        v_eff=pot,
        gamma=gam,
        diffusion=dif,
        e0=e0,
        x0=roots,
    )
