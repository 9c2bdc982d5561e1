"""Chunked numba kernels for the trajectory engines.

One trajectory is strictly sequential; these kernels advance a fixed number of
steps per call so the Python driver can record observables, feed fresh
pre-drawn normals (keeping the counter-based RNG outside the compiled code)
and check state health between chunks.  The semiclassical kernel mirrors the
plain-numpy reference in semiclassical.py; tests pin the two against each
other.

The correlation matrix is kept exactly Hermitian throughout: derivatives are
evaluated on the upper triangle only and mirrored, so no separate
re-Hermitization pass is needed and the Hermiticity invariant holds to the
bit.

Status codes returned by the semiclassical kernel:
    0  chunk completed
    1  non-finite value detected (step index reported)
    2  noise covariance indefinite beyond the repair tolerance (step index
       reported, offending covariance left in the d_out buffer)
"""

import numpy as np
from numba import njit

from .semiclassical import PSD_TOL

STATUS_OK = 0
STATUS_BLOWUP = 1
STATUS_PSD_FAIL = 2

FORCE_FULL = 0
FORCE_ADIABATIC = 1
FORCE_FRICTION = 2

SCHEME_HEUN = 0
SCHEME_EULER = 1

FORCE_MODE_IDS = {"full": FORCE_FULL, "adiabatic-only": FORCE_ADIABATIC,
                  "friction-only": FORCE_FRICTION}
SCHEME_IDS = {"heun": SCHEME_HEUN, "euler-maruyama": SCHEME_EULER}


@njit(cache=True, nogil=True, fastmath=True)
def _contractions(c, cosx, sinx, p, need_fric, xds, y):
    """<Xdag sigma_j> and the sin-weighted momentum contraction.

    Uses Hermiticity: sum_l cos_l C_lj = conj(sum_l cos_l C_jl), so both
    contractions stream over contiguous rows of C.
    """
    n = c.shape[0]
    for j in range(n):
        xa = 0.0j
        ya = 0.0j
        row = c[j]
        if need_fric:
            for l in range(n):
                xa += cosx[l] * row[l]
                ya += (sinx[l] * p[l]) * row[l]
        else:
            for l in range(n):
                xa += cosx[l] * row[l]
        xds[j] = np.conj(xa) / n
        y[j] = np.conj(ya) / n


@njit(cache=True, nogil=True, fastmath=True)
def _forces(p, cosx, sinx, xds, y, ngc, alpha, fric_pref, force_mode, dx, dp):
    n = p.shape[0]
    ia2 = 1j * alpha * alpha
    for j in range(n):
        dx[j] = 2.0 * p[j]          # p/m with m = 1/2
        f = 0.0
        if force_mode != FORCE_FRICTION:
            f -= sinx[j] * ngc * (alpha * xds[j]).real
        if force_mode != FORCE_ADIABATIC:
            f -= fric_pref * sinx[j] * (ia2 * y[j]).real
        dp[j] = f
    return


@njit(cache=True, nogil=True, fastmath=True)
def _spin_coeffs(c, cosx, w, ngc, gc, alpha, a, u):
    ia = 1j * alpha
    n = c.shape[0]
    for j in range(n):
        dj = c[j, j].real
        a[j] = gc * ia * cosx[j] * cosx[j] * dj
        u[j] = 0.5 * ngc * ia * cosx[j] * (2.0 * dj - 1.0)


@njit(cache=True, nogil=True, fastmath=True)
def _dc_upper(c, cosx, xds, w, ngc, a, u, alpha, dc):
    """Upper triangle (incl. diagonal) of dC/dt; the mirror is implied."""
    n = c.shape[0]
    for j in range(n):
        aj = a[j]
        uj = u[j]
        xj = np.conj(xds[j])
        for l in range(j + 1, n):
            dc[j, l] = (-(w + aj + np.conj(a[l])) * c[j, l]
                        + uj * xds[l] + np.conj(u[l]) * xj)
        dc[j, j] = w * (1.0 - c[j, j].real) + ngc * (alpha * xds[j]).imag * cosx[j]


@njit(cache=True, nogil=True, fastmath=True)
def _psd_factor(d_mat, low):
    """Pivot-clipping Cholesky of a (near-)PSD matrix.

    Writes a lower-triangular factor with low @ low.T equal to d_mat with any
    slightly negative directions clipped to zero (the repair path).  Pivots
    below -PSD_TOL*scale abort.  Returns (ok, n_clipped).
    """
    n = d_mat.shape[0]
    scale = 0.0
    for j in range(n):
        if d_mat[j, j] > scale:
            scale = d_mat[j, j]
    hard = -PSD_TOL * scale if scale > 0.0 else -PSD_TOL
    clipped = 0
    for j in range(n):
        s = d_mat[j, j]
        for k in range(j):
            s -= low[j, k] * low[j, k]
        if s <= 0.0:
            if s < hard:
                return False, clipped
            clipped += 1
            for i in range(j, n):
                low[i, j] = 0.0
            continue
        root = np.sqrt(s)
        low[j, j] = root
        inv = 1.0 / root
        for i in range(j + 1, n):
            t = d_mat[i, j]
            for k in range(j):
                t -= low[i, k] * low[j, k]
            low[i, j] = t * inv
    return True, clipped


@njit(cache=True, nogil=True, fastmath=True)
def sc_run_chunk(x, p, c, w, ngc, gc, alpha, fric_pref, dt, scheme,
                 force_mode, noise_on, normals, d_out):
    """Advance (x, p, C) in place by normals.shape[0] steps.

    When noise is off, normals may be a (n_steps, 0) dummy.  Returns
    (status, step_index, n_clipped); on STATUS_PSD_FAIL the state is left at
    the pre-step values and the offending covariance is in d_out.
    """
    n = x.shape[0]
    n_steps = normals.shape[0]
    need_fric = force_mode != FORCE_ADIABATIC
    dx1 = np.empty(n)
    dp1 = np.empty(n)
    dx2 = np.empty(n)
    dp2 = np.empty(n)
    dc1 = np.empty((n, n), dtype=np.complex128)
    cp = np.empty((n, n), dtype=np.complex128)
    xp = np.empty(n)
    pp = np.empty(n)
    cosx = np.empty(n)
    sinx = np.empty(n)
    xds = np.empty(n, dtype=np.complex128)
    y = np.empty(n, dtype=np.complex128)
    a = np.empty(n, dtype=np.complex128)
    u = np.empty(n, dtype=np.complex128)
    low = np.zeros((n, n))
    kick = np.empty(n)
    sqdt = np.sqrt(dt)
    half = 0.5 * dt
    total_clipped = 0

    for s in range(n_steps):
        for j in range(n):
            cosx[j] = np.cos(x[j])
            sinx[j] = np.sin(x[j])

        if noise_on:
            # covariance from the pre-step state
            for j in range(n):
                gs = gc * sinx[j]
                for l in range(n):
                    d_out[j, l] = gs * sinx[l] * c[j, l].real
            ok, nclip = _psd_factor(d_out, low)
            if not ok:
                return STATUS_PSD_FAIL, s, total_clipped
            total_clipped += nclip
            for j in range(n):
                acc = 0.0
                for kcol in range(j + 1):
                    acc += low[j, kcol] * normals[s, kcol]
                kick[j] = acc * sqdt

        # first drift evaluation at the pre-step state
        _contractions(c, cosx, sinx, p, need_fric, xds, y)
        _forces(p, cosx, sinx, xds, y, ngc, alpha, fric_pref, force_mode,
                dx1, dp1)
        _spin_coeffs(c, cosx, w, ngc, gc, alpha, a, u)
        _dc_upper(c, cosx, xds, w, ngc, a, u, alpha, dc1)

        if scheme == SCHEME_HEUN:
            for j in range(n):
                xp[j] = x[j] + dt * dx1[j]
                pp[j] = p[j] + dt * dp1[j]
                cp[j, j] = c[j, j] + dt * dc1[j, j]
                for l in range(j + 1, n):
                    val = c[j, l] + dt * dc1[j, l]
                    cp[j, l] = val
                    cp[l, j] = np.conj(val)
            for j in range(n):
                cosx[j] = np.cos(xp[j])
                sinx[j] = np.sin(xp[j])
            _contractions(cp, cosx, sinx, pp, need_fric, xds, y)
            _forces(pp, cosx, sinx, xds, y, ngc, alpha, fric_pref, force_mode,
                    dx2, dp2)
            _spin_coeffs(cp, cosx, w, ngc, gc, alpha, a, u)
            # second derivative evaluated and applied in one pass
            for j in range(n):
                x[j] += half * (dx1[j] + dx2[j])
                p[j] += half * (dp1[j] + dp2[j])
                aj = a[j]
                uj = u[j]
                xj = np.conj(xds[j])
                for l in range(j + 1, n):
                    d2 = (-(w + aj + np.conj(a[l])) * cp[j, l]
                          + uj * xds[l] + np.conj(u[l]) * xj)
                    val = c[j, l] + half * (dc1[j, l] + d2)
                    c[j, l] = val
                    c[l, j] = np.conj(val)
                d2 = (w * (1.0 - cp[j, j].real)
                      + ngc * (alpha * xds[j]).imag * cosx[j])
                djj = c[j, j].real + half * (dc1[j, j].real + d2)
                if djj < 0.0:
                    djj = 0.0
                elif djj > 1.0:
                    djj = 1.0
                c[j, j] = djj + 0.0j
        else:
            for j in range(n):
                x[j] += dt * dx1[j]
                p[j] += dt * dp1[j]
                for l in range(j + 1, n):
                    val = c[j, l] + dt * dc1[j, l]
                    c[j, l] = val
                    c[l, j] = np.conj(val)
                djj = c[j, j].real + dt * dc1[j, j].real
                if djj < 0.0:
                    djj = 0.0
                elif djj > 1.0:
                    djj = 1.0
                c[j, j] = djj + 0.0j

        if noise_on:
            for j in range(n):
                p[j] += kick[j]

        for j in range(n):
            if not (np.isfinite(p[j]) and np.isfinite(x[j])):
                return STATUS_BLOWUP, s, total_clipped
        if not np.isfinite(c[0, 0].real):
            return STATUS_BLOWUP, s, total_clipped

    return STATUS_OK, n_steps, total_clipped


@njit(cache=True, nogil=True, fastmath=True)
def _mf_derivs(x, p, s, z, w, ngc, alpha, freeze, dx, dp, ds, dz):
    """Mean-field drift of (x, p, s, z)."""
    n = x.shape[0]
    big_x = 0.0j
    for j in range(n):
        big_x += s[j] * np.cos(x[j])
    big_x /= n
    xc = np.conj(big_x)
    hac = 0.5 * ngc * np.conj(alpha)
    for j in range(n):
        cj = np.cos(x[j])
        ds[j] = -0.5 * w * s[j] - 1j * hac * big_x * cj * z[j]
        dz[j] = w * (1.0 - z[j]) + 2.0 * ngc * (alpha * xc * s[j]).imag * cj
        if freeze:
            dx[j] = 0.0
            dp[j] = 0.0
        else:
            dx[j] = 2.0 * p[j]
            dp[j] = -np.sin(x[j]) * ngc * (alpha * xc * s[j]).real


@njit(cache=True, nogil=True, fastmath=True)
def mf_run_chunk(x, p, s, z, w, ngc, alpha, dt, n_steps, freeze):
    """Advance the mean-field state in place by n_steps RK4 steps.

    Returns (status, step_index); status 1 flags a non-finite state.
    """
    n = x.shape[0]
    dx1 = np.empty(n); dp1 = np.empty(n)
    dx2 = np.empty(n); dp2 = np.empty(n)
    dx3 = np.empty(n); dp3 = np.empty(n)
    dx4 = np.empty(n); dp4 = np.empty(n)
    ds1 = np.empty(n, dtype=np.complex128); dz1 = np.empty(n)
    ds2 = np.empty(n, dtype=np.complex128); dz2 = np.empty(n)
    ds3 = np.empty(n, dtype=np.complex128); dz3 = np.empty(n)
    ds4 = np.empty(n, dtype=np.complex128); dz4 = np.empty(n)
    xt = np.empty(n); pt = np.empty(n)
    st = np.empty(n, dtype=np.complex128); zt = np.empty(n)

    for step_i in range(n_steps):
        _mf_derivs(x, p, s, z, w, ngc, alpha, freeze, dx1, dp1, ds1, dz1)
        h = 0.5 * dt
        for j in range(n):
            xt[j] = x[j] + h * dx1[j]; pt[j] = p[j] + h * dp1[j]
            st[j] = s[j] + h * ds1[j]; zt[j] = z[j] + h * dz1[j]
        _mf_derivs(xt, pt, st, zt, w, ngc, alpha, freeze, dx2, dp2, ds2, dz2)
        for j in range(n):
            xt[j] = x[j] + h * dx2[j]; pt[j] = p[j] + h * dp2[j]
            st[j] = s[j] + h * ds2[j]; zt[j] = z[j] + h * dz2[j]
        _mf_derivs(xt, pt, st, zt, w, ngc, alpha, freeze, dx3, dp3, ds3, dz3)
        for j in range(n):
            xt[j] = x[j] + dt * dx3[j]; pt[j] = p[j] + dt * dp3[j]
            st[j] = s[j] + dt * ds3[j]; zt[j] = z[j] + dt * dz3[j]
        _mf_derivs(xt, pt, st, zt, w, ngc, alpha, freeze, dx4, dp4, ds4, dz4)
        sixth = dt / 6.0
        for j in range(n):
            x[j] += sixth * (dx1[j] + 2.0 * (dx2[j] + dx3[j]) + dx4[j])
            p[j] += sixth * (dp1[j] + 2.0 * (dp2[j] + dp3[j]) + dp4[j])
            s[j] += sixth * (ds1[j] + 2.0 * (ds2[j] + ds3[j]) + ds4[j])
            z[j] += sixth * (dz1[j] + 2.0 * (dz2[j] + dz3[j]) + dz4[j])
        for j in range(n):
            if not (np.isfinite(p[j]) and np.isfinite(z[j])):
                return STATUS_BLOWUP, step_i
    return STATUS_OK, n_steps
