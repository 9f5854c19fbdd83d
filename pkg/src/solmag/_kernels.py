"""Compiled numerical kernels.

Everything here is numba-jitted scalar code: classical RK4 steps, period
detection against a hyperplane section, trajectory fills for the full
group dynamics, and tangent-space Lyapunov propagation measured in the
left-invariant frame.  The Python-facing API lives in the sibling
modules; kernels take and return plain floats and arrays only.
"""

import numpy as np
from numba import njit

# Status codes returned by _orbit_average.
STATUS_PERIODIC = 0
STATUS_FALLBACK = 1
STATUS_STATIONARY = 2
STATUS_NONFINITE = 3


@njit(cache=True, nogil=True, inline="always")
def _euler_rhs(nu, a0, a1, s):
    return a1 * a1 - a0 * a0, nu * a0 - s * a1, s * a0 - nu * a1


@njit(cache=True, nogil=True, inline="always")
def _euler_step(nu, a0, a1, u, s, h):
    """One RK4 step of the sphere dynamics with du/dt = nu carried along.

    The (nu, a0, a1) part is radially projected back to the unit sphere
    after the step; the quadrature variable u is left untouched.
    """
    k1n, k1a, k1b = _euler_rhs(nu, a0, a1, s)
    k1u = nu
    n2 = nu + 0.5 * h * k1n
    a2 = a0 + 0.5 * h * k1a
    b2 = a1 + 0.5 * h * k1b
    k2n, k2a, k2b = _euler_rhs(n2, a2, b2, s)
    k2u = n2
    n3 = nu + 0.5 * h * k2n
    a3 = a0 + 0.5 * h * k2a
    b3 = a1 + 0.5 * h * k2b
    k3n, k3a, k3b = _euler_rhs(n3, a3, b3, s)
    k3u = n3
    n4 = nu + h * k3n
    a4 = a0 + h * k3a
    b4 = a1 + h * k3b
    k4n, k4a, k4b = _euler_rhs(n4, a4, b4, s)
    k4u = n4
    w = h / 6.0
    nu1 = nu + w * (k1n + 2.0 * k2n + 2.0 * k3n + k4n)
    a01 = a0 + w * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
    a11 = a1 + w * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    u1 = u + w * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    r = np.sqrt(nu1 * nu1 + a01 * a01 + a11 * a11)
    return nu1 / r, a01 / r, a11 / r, u1


@njit(cache=True, nogil=True)
def _orbit_average(nu0, a00, a10, s, h, t_max, return_tol, refine_tol,
                   field_tol, sep_values, sep_tol):
    """Time average of nu over one closed orbit, or a capped Birkhoff mean.

    Returns (nu_bar, period, f_drift, status).  A period is declared at
    the first same-direction crossing of the hyperplane through the seed
    (normal along the initial velocity) whose state returns to the seed
    within return_tol; the crossing time is refined by bisection to
    refine_tol.  Seeds whose Casimir level sits within sep_tol of a
    separatrix value skip detection and go straight to the capped mean.
    """
    f0 = s * nu0 + a00 * a10
    en, ea, eb = _euler_rhs(nu0, a00, a10, s)
    speed = np.sqrt(en * en + ea * ea + eb * eb)
    if speed <= field_tol:
        # Stationary orbit: the average of nu is nu itself.
        return nu0, np.nan, 0.0, STATUS_STATIONARY

    detect = True
    for k in range(sep_values.shape[0]):
        if abs(f0 - sep_values[k]) <= sep_tol:
            detect = False

    nx = en / speed
    ny = ea / speed
    nz = eb / speed

    nsteps = int(np.floor(t_max / h + 1e-9))
    rem = t_max - nsteps * h
    if rem < 1e-12:
        rem = 0.0

    nu = nu0
    a0 = a00
    a1 = a10
    u = 0.0
    g_prev = 0.0
    f_drift = 0.0

    for i in range(nsteps):
        pn, pa, pb, pu = nu, a0, a1, u
        nu, a0, a1, u = _euler_step(nu, a0, a1, u, s, h)
        if not np.isfinite(nu + a0 + a1 + u):
            return np.nan, np.nan, f_drift, STATUS_NONFINITE
        df = abs(s * nu + a0 * a1 - f0)
        if df > f_drift:
            f_drift = df
        g_cur = (nu - nu0) * nx + (a0 - a00) * ny + (a1 - a10) * nz
        if detect and g_prev < 0.0 and g_cur >= 0.0:
            # Bisect the crossing time inside this step.
            lo = 0.0
            hi = h
            while hi - lo > refine_tol:
                mid = 0.5 * (lo + hi)
                mn, ma, mb, mu = _euler_step(pn, pa, pb, pu, s, mid)
                gm = (mn - nu0) * nx + (ma - a00) * ny + (mb - a10) * nz
                if gm >= 0.0:
                    hi = mid
                else:
                    lo = mid
            d = 0.5 * (lo + hi)
            mn, ma, mb, mu = _euler_step(pn, pa, pb, pu, s, d)
            dx = mn - nu0
            dy = ma - a00
            dz = mb - a10
            if np.sqrt(dx * dx + dy * dy + dz * dz) <= return_tol:
                period = i * h + d
                return mu / period, period, f_drift, STATUS_PERIODIC
        g_prev = g_cur

    if rem > 0.0:
        nu, a0, a1, u = _euler_step(nu, a0, a1, u, s, rem)
    if not np.isfinite(u):
        return np.nan, np.nan, f_drift, STATUS_NONFINITE
    return u / t_max, np.nan, f_drift, STATUS_FALLBACK


@njit(cache=True, nogil=True)
def _euler_trajectory(nu0, a00, a10, s, h, nsteps, rem):
    """Sampled sphere trajectory: states (m+1, 3) and running integral of nu."""
    m = nsteps + (1 if rem > 0.0 else 0)
    out = np.empty((m + 1, 3))
    uacc = np.empty(m + 1)
    nu, a0, a1, u = nu0, a00, a10, 0.0
    out[0, 0] = nu
    out[0, 1] = a0
    out[0, 2] = a1
    uacc[0] = 0.0
    for i in range(nsteps):
        nu, a0, a1, u = _euler_step(nu, a0, a1, u, s, h)
        out[i + 1, 0] = nu
        out[i + 1, 1] = a0
        out[i + 1, 2] = a1
        uacc[i + 1] = u
    if rem > 0.0:
        nu, a0, a1, u = _euler_step(nu, a0, a1, u, s, rem)
        out[m, 0] = nu
        out[m, 1] = a0
        out[m, 2] = a1
        uacc[m] = u
    return out, uacc


@njit(cache=True, nogil=True)
def _entropy_row(s, xi, nu_nodes, h, t_max, return_tol, refine_tol,
                 field_tol, sep_values, sep_tol):
    """|nu_bar| and fallback flags for all latitude nodes on one longitude."""
    n = nu_nodes.shape[0]
    vals = np.empty(n)
    fell = np.zeros(n, dtype=np.int64)
    ca = np.cos(2.0 * np.pi * xi)
    sa = np.sin(2.0 * np.pi * xi)
    for j in range(n):
        nu = nu_nodes[j]
        r = np.sqrt(1.0 - nu * nu)
        nb, period, fd, status = _orbit_average(
            nu, ca * r, sa * r, s, h, t_max, return_tol, refine_tol,
            field_tol, sep_values, sep_tol)
        vals[j] = abs(nb)
        if status == STATUS_FALLBACK:
            fell[j] = 1
    return vals, fell


@njit(cache=True, nogil=True, inline="always")
def _sol_rhs(u, y0, y1, nu, a0, a1, s):
    eu = np.exp(u)
    em = np.exp(-u)
    return (nu, eu * a0, em * a1,
            a1 * a1 - a0 * a0, nu * a0 - s * a1, s * a0 - nu * a1)


@njit(cache=True, nogil=True, inline="always")
def _sol_step(x, s, h):
    k1 = _sol_rhs(x[0], x[1], x[2], x[3], x[4], x[5], s)
    x2 = (x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1], x[2] + 0.5 * h * k1[2],
          x[3] + 0.5 * h * k1[3], x[4] + 0.5 * h * k1[4], x[5] + 0.5 * h * k1[5])
    k2 = _sol_rhs(x2[0], x2[1], x2[2], x2[3], x2[4], x2[5], s)
    x3 = (x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1], x[2] + 0.5 * h * k2[2],
          x[3] + 0.5 * h * k2[3], x[4] + 0.5 * h * k2[4], x[5] + 0.5 * h * k2[5])
    k3 = _sol_rhs(x3[0], x3[1], x3[2], x3[3], x3[4], x3[5], s)
    x4 = (x[0] + h * k3[0], x[1] + h * k3[1], x[2] + h * k3[2],
          x[3] + h * k3[3], x[4] + h * k3[4], x[5] + h * k3[5])
    k4 = _sol_rhs(x4[0], x4[1], x4[2], x4[3], x4[4], x4[5], s)
    w = h / 6.0
    return (x[0] + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x[1] + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            x[2] + w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
            x[3] + w * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
            x[4] + w * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]),
            x[5] + w * (k1[5] + 2.0 * k2[5] + 2.0 * k3[5] + k4[5]))


@njit(cache=True, nogil=True)
def _sol_trajectory(x0, s, h, nsteps, rem):
    """Full Sol phase-space trajectory.  Returns (states, bad_index).

    bad_index is -1 when every sample is finite, otherwise the first row
    at which a non-finite value appeared (the array is truncated there).
    """
    m = nsteps + (1 if rem > 0.0 else 0)
    out = np.empty((m + 1, 6))
    x = (x0[0], x0[1], x0[2], x0[3], x0[4], x0[5])
    for c in range(6):
        out[0, c] = x[c]
    for i in range(nsteps):
        x = _sol_step(x, s, h)
        ok = True
        for c in range(6):
            out[i + 1, c] = x[c]
            if not np.isfinite(x[c]):
                ok = False
        if not ok:
            return out[:i + 2], i + 1
    if rem > 0.0:
        x = _sol_step(x, s, rem)
        for c in range(6):
            out[m, c] = x[c]
            if not np.isfinite(x[c]):
                return out, m
    return out, -1


@njit(cache=True, nogil=True, inline="always")
def _variation_rhs(x, s):
    # x = (u, t, y0, y1, nu, tau, a0, a1)
    u, t, y0, y1, nu, tau, a0, a1 = x
    return (nu, tau, np.exp(u) * a0, np.exp(-u) * a1,
            a1 * a1 - a0 * a0 - s * tau, s * nu, nu * a0, -nu * a1)


@njit(cache=True, nogil=True)
def _variation_trajectory(x0, s, h, nsteps, rem):
    """Trajectory of the product-geometry flow twisted in the (u, t) plane."""
    m = nsteps + (1 if rem > 0.0 else 0)
    out = np.empty((m + 1, 8))
    x = (x0[0], x0[1], x0[2], x0[3], x0[4], x0[5], x0[6], x0[7])
    for c in range(8):
        out[0, c] = x[c]
    for i in range(m):
        hh = h if i < nsteps else rem
        k1 = _variation_rhs(x, s)
        x2 = (x[0] + 0.5 * hh * k1[0], x[1] + 0.5 * hh * k1[1],
              x[2] + 0.5 * hh * k1[2], x[3] + 0.5 * hh * k1[3],
              x[4] + 0.5 * hh * k1[4], x[5] + 0.5 * hh * k1[5],
              x[6] + 0.5 * hh * k1[6], x[7] + 0.5 * hh * k1[7])
        k2 = _variation_rhs(x2, s)
        x3 = (x[0] + 0.5 * hh * k2[0], x[1] + 0.5 * hh * k2[1],
              x[2] + 0.5 * hh * k2[2], x[3] + 0.5 * hh * k2[3],
              x[4] + 0.5 * hh * k2[4], x[5] + 0.5 * hh * k2[5],
              x[6] + 0.5 * hh * k2[6], x[7] + 0.5 * hh * k2[7])
        k3 = _variation_rhs(x3, s)
        x4 = (x[0] + hh * k3[0], x[1] + hh * k3[1], x[2] + hh * k3[2],
              x[3] + hh * k3[3], x[4] + hh * k3[4], x[5] + hh * k3[5],
              x[6] + hh * k3[6], x[7] + hh * k3[7])
        k4 = _variation_rhs(x4, s)
        w = hh / 6.0
        x = (x[0] + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
             x[1] + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
             x[2] + w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
             x[3] + w * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
             x[4] + w * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]),
             x[5] + w * (k1[5] + 2.0 * k2[5] + 2.0 * k3[5] + k4[5]),
             x[6] + w * (k1[6] + 2.0 * k2[6] + 2.0 * k3[6] + k4[6]),
             x[7] + w * (k1[7] + 2.0 * k2[7] + 2.0 * k3[7] + k4[7]))
        ok = True
        for c in range(8):
            out[i + 1, c] = x[c]
            if not np.isfinite(x[c]):
                ok = False
        if not ok:
            return out[:i + 2], i + 1
    return out, -1


@njit(cache=True, nogil=True, inline="always")
def _sol_joint_rhs(b, v, s):
    """Base sphere dynamics plus its linearization in the invariant frame.

    b = (nu, a0, a1); v = (du, xi0, xi1, dnu, da0, da1) where xi0, xi1
    are the y-direction variations measured in the left-invariant frame
    (coordinate variations scaled by e^{-u} and e^{u}); the base group
    coordinates decouple and are not tracked.
    """
    nu, a0, a1 = b
    du, xi0, xi1, dnu, da0, da1 = v
    bn = (a1 * a1 - a0 * a0, nu * a0 - s * a1, s * a0 - nu * a1)
    vn = (dnu,
          -nu * xi0 + a0 * du + da0,
          nu * xi1 - a1 * du + da1,
          -2.0 * a0 * da0 + 2.0 * a1 * da1,
          nu * da0 + a0 * dnu - s * da1,
          s * da0 - nu * da1 - a1 * dnu)
    return bn, vn


@njit(cache=True, nogil=True)
def _lyapunov_sol_frame(nu0, a00, a10, s, v0, h, t_end, renorm_dt, warm_frac):
    """Top Lyapunov exponent of the Sol flow via frame tangent propagation.

    The tangent vector is renormalized every renorm_dt time units; log
    growth accumulated only after the warm-up fraction so the estimate
    is not polluted by the transient alignment of the seed vector.
    """
    b = (nu0, a00, a10)
    v = (v0[0], v0[1], v0[2], v0[3], v0[4], v0[5])
    nsteps = int(np.round(t_end / h))
    renorm_every = max(1, int(np.round(renorm_dt / h)))
    warm_steps = int(warm_frac * nsteps)
    acc = 0.0
    t_meas0 = -1.0
    for i in range(nsteps):
        kb1, kv1 = _sol_joint_rhs(b, v, s)
        b2 = (b[0] + 0.5 * h * kb1[0], b[1] + 0.5 * h * kb1[1], b[2] + 0.5 * h * kb1[2])
        v2 = (v[0] + 0.5 * h * kv1[0], v[1] + 0.5 * h * kv1[1], v[2] + 0.5 * h * kv1[2],
              v[3] + 0.5 * h * kv1[3], v[4] + 0.5 * h * kv1[4], v[5] + 0.5 * h * kv1[5])
        kb2, kv2 = _sol_joint_rhs(b2, v2, s)
        b3 = (b[0] + 0.5 * h * kb2[0], b[1] + 0.5 * h * kb2[1], b[2] + 0.5 * h * kb2[2])
        v3 = (v[0] + 0.5 * h * kv2[0], v[1] + 0.5 * h * kv2[1], v[2] + 0.5 * h * kv2[2],
              v[3] + 0.5 * h * kv2[3], v[4] + 0.5 * h * kv2[4], v[5] + 0.5 * h * kv2[5])
        kb3, kv3 = _sol_joint_rhs(b3, v3, s)
        b4 = (b[0] + h * kb3[0], b[1] + h * kb3[1], b[2] + h * kb3[2])
        v4 = (v[0] + h * kv3[0], v[1] + h * kv3[1], v[2] + h * kv3[2],
              v[3] + h * kv3[3], v[4] + h * kv3[4], v[5] + h * kv3[5])
        kb4, kv4 = _sol_joint_rhs(b4, v4, s)
        w = h / 6.0
        bn = (b[0] + w * (kb1[0] + 2.0 * kb2[0] + 2.0 * kb3[0] + kb4[0]),
              b[1] + w * (kb1[1] + 2.0 * kb2[1] + 2.0 * kb3[1] + kb4[1]),
              b[2] + w * (kb1[2] + 2.0 * kb2[2] + 2.0 * kb3[2] + kb4[2]))
        r = np.sqrt(bn[0] * bn[0] + bn[1] * bn[1] + bn[2] * bn[2])
        b = (bn[0] / r, bn[1] / r, bn[2] / r)
        v = (v[0] + w * (kv1[0] + 2.0 * kv2[0] + 2.0 * kv3[0] + kv4[0]),
             v[1] + w * (kv1[1] + 2.0 * kv2[1] + 2.0 * kv3[1] + kv4[1]),
             v[2] + w * (kv1[2] + 2.0 * kv2[2] + 2.0 * kv3[2] + kv4[2]),
             v[3] + w * (kv1[3] + 2.0 * kv2[3] + 2.0 * kv3[3] + kv4[3]),
             v[4] + w * (kv1[4] + 2.0 * kv2[4] + 2.0 * kv3[4] + kv4[4]),
             v[5] + w * (kv1[5] + 2.0 * kv2[5] + 2.0 * kv3[5] + kv4[5]))
        if (i + 1) % renorm_every == 0 or i + 1 == nsteps:
            nv = np.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
                         + v[3] * v[3] + v[4] * v[4] + v[5] * v[5])
            if i + 1 > warm_steps:
                if t_meas0 < 0.0:
                    t_meas0 = (i + 1) * h
                else:
                    acc += np.log(nv)
            v = (v[0] / nv, v[1] / nv, v[2] / nv,
                 v[3] / nv, v[4] / nv, v[5] / nv)
    t_span = nsteps * h - t_meas0
    return acc / t_span


@njit(cache=True, nogil=True, inline="always")
def _variation_joint_rhs(b, v, s):
    """Momentum dynamics of the product twist plus frame linearization.

    b = (nu, tau, a0, a1); v = (du, dt, xi0, xi1, dnu, dtau, da0, da1).
    """
    nu, tau, a0, a1 = b
    du, dt, xi0, xi1, dnu, dtau, da0, da1 = v
    bn = (a1 * a1 - a0 * a0 - s * tau, s * nu, nu * a0, -nu * a1)
    vn = (dnu, dtau,
          -nu * xi0 + a0 * du + da0,
          nu * xi1 - a1 * du + da1,
          -2.0 * a0 * da0 + 2.0 * a1 * da1 - s * dtau,
          s * dnu,
          nu * da0 + a0 * dnu,
          -nu * da1 - a1 * dnu)
    return bn, vn


@njit(cache=True, nogil=True)
def _lyapunov_variation_frame(nu0, tau0, a00, a10, s, v0, h, t_end,
                              renorm_dt, warm_frac):
    """Top Lyapunov exponent of the product-twist flow (frame tangent)."""
    b = (nu0, tau0, a00, a10)
    v = (v0[0], v0[1], v0[2], v0[3], v0[4], v0[5], v0[6], v0[7])
    nsteps = int(np.round(t_end / h))
    renorm_every = max(1, int(np.round(renorm_dt / h)))
    warm_steps = int(warm_frac * nsteps)
    acc = 0.0
    t_meas0 = -1.0
    for i in range(nsteps):
        kb1, kv1 = _variation_joint_rhs(b, v, s)
        b2 = (b[0] + 0.5 * h * kb1[0], b[1] + 0.5 * h * kb1[1],
              b[2] + 0.5 * h * kb1[2], b[3] + 0.5 * h * kb1[3])
        v2 = (v[0] + 0.5 * h * kv1[0], v[1] + 0.5 * h * kv1[1],
              v[2] + 0.5 * h * kv1[2], v[3] + 0.5 * h * kv1[3],
              v[4] + 0.5 * h * kv1[4], v[5] + 0.5 * h * kv1[5],
              v[6] + 0.5 * h * kv1[6], v[7] + 0.5 * h * kv1[7])
        kb2, kv2 = _variation_joint_rhs(b2, v2, s)
        b3 = (b[0] + 0.5 * h * kb2[0], b[1] + 0.5 * h * kb2[1],
              b[2] + 0.5 * h * kb2[2], b[3] + 0.5 * h * kb2[3])
        v3 = (v[0] + 0.5 * h * kv2[0], v[1] + 0.5 * h * kv2[1],
              v[2] + 0.5 * h * kv2[2], v[3] + 0.5 * h * kv2[3],
              v[4] + 0.5 * h * kv2[4], v[5] + 0.5 * h * kv2[5],
              v[6] + 0.5 * h * kv2[6], v[7] + 0.5 * h * kv2[7])
        kb3, kv3 = _variation_joint_rhs(b3, v3, s)
        b4 = (b[0] + h * kb3[0], b[1] + h * kb3[1],
              b[2] + h * kb3[2], b[3] + h * kb3[3])
        v4 = (v[0] + h * kv3[0], v[1] + h * kv3[1],
              v[2] + h * kv3[2], v[3] + h * kv3[3],
              v[4] + h * kv3[4], v[5] + h * kv3[5],
              v[6] + h * kv3[6], v[7] + h * kv3[7])
        kb4, kv4 = _variation_joint_rhs(b4, v4, s)
        w = h / 6.0
        b = (b[0] + w * (kb1[0] + 2.0 * kb2[0] + 2.0 * kb3[0] + kb4[0]),
             b[1] + w * (kb1[1] + 2.0 * kb2[1] + 2.0 * kb3[1] + kb4[1]),
             b[2] + w * (kb1[2] + 2.0 * kb2[2] + 2.0 * kb3[2] + kb4[2]),
             b[3] + w * (kb1[3] + 2.0 * kb2[3] + 2.0 * kb3[3] + kb4[3]))
        v = (v[0] + w * (kv1[0] + 2.0 * kv2[0] + 2.0 * kv3[0] + kv4[0]),
             v[1] + w * (kv1[1] + 2.0 * kv2[1] + 2.0 * kv3[1] + kv4[1]),
             v[2] + w * (kv1[2] + 2.0 * kv2[2] + 2.0 * kv3[2] + kv4[2]),
             v[3] + w * (kv1[3] + 2.0 * kv2[3] + 2.0 * kv3[3] + kv4[3]),
             v[4] + w * (kv1[4] + 2.0 * kv2[4] + 2.0 * kv3[4] + kv4[4]),
             v[5] + w * (kv1[5] + 2.0 * kv2[5] + 2.0 * kv3[5] + kv4[5]),
             v[6] + w * (kv1[6] + 2.0 * kv2[6] + 2.0 * kv3[6] + kv4[6]),
             v[7] + w * (kv1[7] + 2.0 * kv2[7] + 2.0 * kv3[7] + kv4[7]))
        if (i + 1) % renorm_every == 0 or i + 1 == nsteps:
            nv = 0.0
            for c in range(8):
                nv += v[c] * v[c]
            nv = np.sqrt(nv)
            if i + 1 > warm_steps:
                if t_meas0 < 0.0:
                    t_meas0 = (i + 1) * h
                else:
                    acc += np.log(nv)
            v = (v[0] / nv, v[1] / nv, v[2] / nv, v[3] / nv,
                 v[4] / nv, v[5] / nv, v[6] / nv, v[7] / nv)
    t_span = nsteps * h - t_meas0
    return acc / t_span
