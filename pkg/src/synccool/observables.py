"""Statistical reductions of trajectory data: moments, spectra, histograms."""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, UndefinedKurtosisError
from .params import WAVELENGTH


@dataclass
class TimeSeries:
    """Sampled observables on a common time grid.

    channels maps names (p2_mean, p2_stderr, kurtosis, xdagx, x_abs2,
    cos_arg_x, ...) to arrays of the same length as times; meta carries the
    run descriptor needed to reproduce the record.
    """

    times: np.ndarray
    channels: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        for name, arr in self.channels.items():
            if len(arr) != n:
                raise InvalidParameterError(
                    f"channel {name!r} has length {len(arr)}, expected {n}"
                )

    def channel(self, name):
        return self.channels[name]


@dataclass
class Histogram:
    """Binned samples; edges is an array (1D) or pair of arrays (2D)."""

    edges: object
    counts: np.ndarray
    mode: str = "counts"


@dataclass
class MomentStats:
    p2: float
    p4: float
    kurtosis: float
    p2_stderr: float
    kurtosis_stderr: float


def moments(p_samples):
    """Pooled second/fourth moments and kurtosis K = <p^4>/<p^2>^2.

    p_samples may be 1D (each sample its own resampling unit) or 2D with one
    row per trajectory; standard errors come from a leave-one-row-out
    jackknife with pairwise-safe summation.
    """
    p = np.asarray(p_samples, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    if p.size < 2:
        raise InvalidParameterError("need at least 2 samples")
    n_rows = p.shape[0]
    p2_rows = np.mean(p * p, axis=1)
    p4_rows = np.mean(p**4, axis=1)
    s2 = float(np.sum(p2_rows))
    s4 = float(np.sum(p4_rows))
    p2 = s2 / n_rows
    p4 = s4 / n_rows
    if p2 == 0.0:
        raise UndefinedKurtosisError("all samples are zero; kurtosis undefined")
    kurt = p4 / p2**2
    if n_rows < 2:
        return MomentStats(p2, p4, kurt, 0.0, 0.0)
    # leave-one-row-out jackknife
    p2_jack = (s2 - p2_rows) / (n_rows - 1)
    p4_jack = (s4 - p4_rows) / (n_rows - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        k_jack = p4_jack / p2_jack**2
    fac = (n_rows - 1) / n_rows
    p2_stderr = float(np.sqrt(fac * np.sum((p2_jack - np.mean(p2_jack)) ** 2)))
    k_stderr = float(np.sqrt(fac * np.sum((k_jack - np.mean(k_jack)) ** 2)))
    return MomentStats(p2, p4, kurt, p2_stderr, k_stderr)


def laplace_spectrum(times, values, omega=None, window_fraction=0.2,
                     stationary_value=None):
    """One-sided Laplace transform S(i w) = sum_n e^{i w t_n}(f_n - f_st) dt_n.

    The stationary value f_st is estimated as the mean over the trailing
    window_fraction of the record unless given explicitly.  Trapezoid weights;
    direct summation, so non-uniform time grids are fine.  Returns (omega, S).
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size < 16:
        raise InvalidParameterError("need at least 16 samples for a spectrum")
    if not 0.0 < window_fraction < 1.0:
        raise InvalidParameterError(
            f"window_fraction must be in (0, 1), got {window_fraction}"
        )
    if omega is None:
        omega = np.linspace(-20.0, 20.0, 2048)
    omega = np.asarray(omega, dtype=float)
    if stationary_value is None:
        n_tail = max(1, int(round(window_fraction * times.size)))
        stationary_value = float(np.mean(values[-n_tail:]))
    f = values - stationary_value
    # trapezoid weights on an arbitrary grid
    wts = np.empty_like(times)
    wts[1:-1] = 0.5 * (times[2:] - times[:-2])
    wts[0] = 0.5 * (times[1] - times[0])
    wts[-1] = 0.5 * (times[-1] - times[-2])
    spectrum = np.exp(1j * np.outer(omega, times)) @ (f * wts)
    return omega, spectrum


def spectrum_peaks(omega, spectrum, level_factor=3.0):
    """Locations and heights of local maxima of |S| above level_factor x median.

    Peak positions are refined by quadratic interpolation through the three
    samples around each discrete maximum.  Returns (positions, heights).
    """
    mag = np.abs(np.asarray(spectrum))
    med = np.median(mag)
    level = level_factor * med
    pos, height = [], []
    for i in range(1, len(mag) - 1):
        if mag[i] > level and mag[i] >= mag[i - 1] and mag[i] > mag[i + 1]:
            y0, y1, y2 = mag[i - 1 : i + 2]
            denom = y0 - 2.0 * y1 + y2
            shift = 0.5 * (y0 - y2) / denom if denom != 0.0 else 0.0
            shift = float(np.clip(shift, -1.0, 1.0))
            pos.append(omega[i] + shift * (omega[min(i + 1, len(omega) - 1)] - omega[i]))
            height.append(y1)
    return np.array(pos), np.array(height)


def histogram1d(samples, bins, mode="counts", range=None):
    """1D histogram; density mode integrates to 1."""
    if np.ndim(bins) == 0 and bins < 2:
        raise InvalidParameterError("need at least 2 bins")
    samples = np.asarray(samples, dtype=float).ravel()
    counts, edges = np.histogram(samples, bins=bins, range=range,
                                 density=(mode == "density"))
    return Histogram(edges=edges, counts=counts, mode=mode)


def histogram2d(x_samples, p_samples, bins, mode="counts", p_range=None):
    """Phase-space histogram with positions folded into one wavelength."""
    if np.ndim(bins) == 0 and bins < 2:
        raise InvalidParameterError("need at least 2 bins")
    x = np.mod(np.asarray(x_samples, dtype=float).ravel(), WAVELENGTH)
    p = np.asarray(p_samples, dtype=float).ravel()
    rng = [[0.0, WAVELENGTH], p_range if p_range is not None else
           [p.min() if p.size else -1.0, p.max() if p.size else 1.0]]
    counts, xe, pe = np.histogram2d(x, p, bins=bins, range=rng,
                                    density=(mode == "density"))
    return Histogram(edges=(xe, pe), counts=counts, mode=mode)
