"""Physical parameters and the elementary collective quantities.

Unit convention used everywhere in this package: hbar = k = omega_R = 1,
where k is the cavity wave number and omega_R = hbar k^2 / (2m) the recoil
frequency.  Consequently the atomic mass is m = 1/2, momenta are measured in
units of the photon momentum hbar*k, positions in 1/k, times in 1/omega_R and
all rates/frequencies (kappa, delta, w, g, N*Gamma_C) in omega_R.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, InvalidParameterError

# Atomic mass in recoil units (omega_R = hbar k^2 / 2m = 1).
MASS = 0.5

# One cavity wavelength in units of 1/k.
WAVELENGTH = 2.0 * np.pi


def gamma_c(g, delta, kappa):
    """Effective single-atom linewidth through the lossy cavity.

    Rate at which one atom at an antinode emits into the cavity mode and the
    photon is lost, Gamma_C = (g^2/4) * kappa / (delta^2 + kappa^2/4).
    """
    if kappa <= 0:
        raise InvalidParameterError(f"kappa must be positive, got {kappa}")
    return (g * g / 4.0) / (delta * delta + kappa * kappa / 4.0) * kappa


def g_from_n_gamma_c(n_gamma_c, n_atoms, delta, kappa):
    """Invert the collective linewidth N*Gamma_C for the vacuum Rabi frequency g."""
    if kappa <= 0:
        raise InvalidParameterError(f"kappa must be positive, got {kappa}")
    if n_gamma_c <= 0:
        raise InvalidParameterError(f"n_gamma_c must be positive, got {n_gamma_c}")
    g_sq = 4.0 * (n_gamma_c / n_atoms) * (delta * delta + kappa * kappa / 4.0) / kappa
    return np.sqrt(g_sq)


def cavity_alpha(delta, kappa):
    """Dimensionless cavity response alpha = delta/(kappa/2) - i.

    Purely imaginary on resonance; |alpha|^2 = 1 + (delta/(kappa/2))^2.
    """
    if kappa <= 0:
        raise InvalidParameterError(f"kappa must be positive, got {kappa}")
    return delta / (kappa / 2.0) - 1.0j


@dataclass(frozen=True)
class PhysicalParams:
    """Model constants in recoil units.

    Exactly one of ``g`` (vacuum Rabi frequency) and ``n_gamma_c`` (collective
    linewidth N*Gamma_C) must be given; the other is derived.  Run definitions
    are usually quoted through N*Gamma_C, the microscopic equations use g.
    """

    n_atoms: int
    kappa: float
    delta: float
    w_pump: float
    g: float = field(default=None)
    n_gamma_c: float = field(default=None)

    def __post_init__(self):
        if self.n_atoms < 1:
            raise InvalidParameterError(f"n_atoms must be >= 1, got {self.n_atoms}")
        if self.kappa <= 0:
            raise InvalidParameterError(f"kappa must be positive, got {self.kappa}")
        if self.w_pump <= 0:
            raise InvalidParameterError(f"w_pump must be positive, got {self.w_pump}")
        if (self.g is None) == (self.n_gamma_c is None):
            raise InvalidParameterError(
                "specify exactly one of g and n_gamma_c; the other is derived"
            )
        if self.g is None:
            g = g_from_n_gamma_c(self.n_gamma_c, self.n_atoms, self.delta, self.kappa)
            object.__setattr__(self, "g", float(g))
        else:
            if self.g <= 0:
                raise InvalidParameterError(f"g must be positive, got {self.g}")
            ngc = self.n_atoms * gamma_c(self.g, self.delta, self.kappa)
            object.__setattr__(self, "n_gamma_c", float(ngc))
        if self.gamma_c <= 0:
            raise ConsistencyError("derived Gamma_C is not positive")

    @property
    def gamma_c(self):
        """Single-atom linewidth Gamma_C."""
        return gamma_c(self.g, self.delta, self.kappa)

    @property
    def alpha(self):
        """Cavity response alpha = delta/(kappa/2) - i."""
        return cavity_alpha(self.delta, self.kappa)

    @property
    def detuning_ratio(self):
        """delta in units of the cavity half linewidth, delta/(kappa/2)."""
        return self.delta / (self.kappa / 2.0)

    @property
    def omega0(self):
        """Rotating-frame frequency of the synchronized dipoles, w*delta/kappa."""
        return self.w_pump * self.delta / self.kappa

    def with_n_atoms(self, n_atoms):
        """Copy with a different atom number at fixed N g^2 (fixed N*Gamma_C).

        This is the thermodynamic-limit convention used for sweeps over N: the
        collective linewidth, and with it the upper synchronization threshold,
        stays constant while Gamma_C scales as 1/N.
        """
        return PhysicalParams(
            n_atoms=n_atoms,
            kappa=self.kappa,
            delta=self.delta,
            w_pump=self.w_pump,
            n_gamma_c=self.n_gamma_c,
        )


def saturation_xi(x, order_param, w_pump, n_gamma_c):
    """Position-dependent synchronization saturation xi(x) = (NGc/w) X cos(kx).

    Plays the role the saturation parameter plays for a driven dipole, with the
    collective order parameter X as the drive.
    """
    if w_pump <= 0:
        raise InvalidParameterError(f"w_pump must be positive, got {w_pump}")
    return (n_gamma_c / w_pump) * order_param * np.cos(x)


def order_parameter(positions, dipoles):
    """Synchronization order parameter X = (1/N) sum_j s_j cos(k x_j)."""
    positions = np.asarray(positions)
    dipoles = np.asarray(dipoles)
    if positions.shape != dipoles.shape:
        raise InvalidParameterError(
            f"positions and dipoles must have matching shapes, got "
            f"{positions.shape} and {dipoles.shape}"
        )
    return complex(np.mean(dipoles * np.cos(positions)))


def xdagx_from_correlations(positions, corr, hermiticity_tol=1e-10):
    """Collective correlation <Xdag X> from the spin-correlation matrix.

    Evaluates (1/N^2) sum_jl cos(kx_j) cos(kx_l) C_jl with C_jl = <sigma_j^dag
    sigma_l>.  The result is real and nonnegative for any physical (PSD) C.
    """
    corr = np.asarray(corr)
    n = corr.shape[0]
    herm_err = np.max(np.abs(corr - corr.conj().T)) if n else 0.0
    if herm_err > hermiticity_tol:
        raise ConsistencyError(
            f"correlation matrix is non-Hermitian: max |C - C^dag| = {herm_err:.3e}"
        )
    # the quadratic form of a Hermitian matrix with a real vector only sees
    # the real part, so evaluate it there and stay exactly real
    c = np.cos(np.asarray(positions))
    return float(c @ corr.real @ c) / n**2


def photon_number_estimate(params, xdagx):
    """Intracavity photon number from the adiabatic field, proportional to N^2 <Xdag X>.

    Returns (N g / 2)^2 / (kappa^2/4 + delta^2) * xdagx.
    """
    if xdagx < 0:
        raise InvalidParameterError(f"xdagx must be nonnegative, got {xdagx}")
    num = (params.n_atoms * params.g / 2.0) ** 2
    den = params.kappa**2 / 4.0 + params.delta**2
    return num / den * xdagx
