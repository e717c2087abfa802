"""Compiled inner loops for the time stepper and the streamfunction solver."""
import numpy as np
from numba import njit


@njit(cache=True)
def tridiag_sweep(lower, inv_den, cp, d):
    """Thomas sweep with precomputed factors; columns of ``d`` are independent."""
    n, m = d.shape
    x = np.empty_like(d)
    for k in range(m):
        x[0, k] = d[0, k] * inv_den[0, k]
    for i in range(1, n):
        a = lower[i]
        for k in range(m):
            x[i, k] = (d[i, k] - a * x[i - 1, k]) * inv_den[i, k]
    for i in range(n - 2, -1, -1):
        for k in range(m):
            x[i, k] -= cp[i, k] * x[i + 1, k]
    return x


@njit(cache=True)
def stokes_interior(psi, r, dr, dz, periodic):
    """``psi_rr - psi_r/r + psi_zz`` on the unknown nodes of the solver."""
    n_r, n_z = psi.shape
    j0 = 0 if periodic else 1
    j1 = n_z if periodic else n_z - 1
    out = np.empty((n_r - 2, j1 - j0))
    idr2 = 1.0 / dr ** 2
    idz2 = 1.0 / dz ** 2
    for i in range(1, n_r - 1):
        c = 1.0 / (2.0 * r[i] * dr)
        for j in range(j0, j1):
            jm = j - 1 if j > 0 else n_z - 1
            jp = j + 1 if j < n_z - 1 else 0
            p = psi[i, j]
            out[i - 1, j - j0] = ((psi[i + 1, j] - 2 * p + psi[i - 1, j]) * idr2
                                  - (psi[i + 1, j] - psi[i - 1, j]) * c
                                  + (psi[i, jp] - 2 * p + psi[i, jm]) * idz2)
    return out


@njit(cache=True)
def velocity(psi, r, dr, dz, periodic, v_r, v_z):
    """``v_r = -psi_z / r``, ``v_z = psi_r / r``; one-sided on the boundary ring."""
    n_r, n_z = psi.shape
    h_r = 0.5 / dr
    h_z = 0.5 / dz
    for i in range(n_r):
        ir = 1.0 / r[i]
        for j in range(n_z):
            if i == 0:
                pr = (-3 * psi[0, j] + 4 * psi[1, j] - psi[2, j]) * h_r
            elif i == n_r - 1:
                pr = (3 * psi[i, j] - 4 * psi[i - 1, j] + psi[i - 2, j]) * h_r
            else:
                pr = (psi[i + 1, j] - psi[i - 1, j]) * h_r
            if periodic:
                jm = j - 1 if j > 0 else n_z - 1
                jp = j + 1 if j < n_z - 1 else 0
                pz = (psi[i, jp] - psi[i, jm]) * h_z
            elif j == 0:
                pz = (-3 * psi[i, 0] + 4 * psi[i, 1] - psi[i, 2]) * h_z
            elif j == n_z - 1:
                pz = (3 * psi[i, j] - 4 * psi[i, j - 1] + psi[i, j - 2]) * h_z
            else:
                pz = (psi[i, j + 1] - psi[i, j - 1]) * h_z
            v_r[i, j] = -pz * ir
            v_z[i, j] = pr * ir


@njit(cache=True)
def _advect(fm, f0, fp, a, h, upwind):
    """Discretisation of ``a * df``; ``fm, f0, fp`` are the three stencil values."""
    if upwind:
        if a > 0:
            return a * (f0 - fm) / h
        return a * (fp - f0) / h
    return a * (fp - fm) / (2 * h)


@njit(cache=True)
def swirl_rhs(gamma, omega, v_r, v_z, r, dr, dz, periodic, upwind, out_g, out_o):
    """Right-hand sides of the Gamma and Omega equations at interior nodes.

    Gamma: lap G - v_r G_r - v_z G_z - (2/r) G_r
    Omega: lap W - v_r W_r - v_z W_z + (2/r) W_r + 2 G G_z / r**4

    The swirl term uses ``(2 v_theta / r**2) dv_theta/dz = 2 G G_z / r**4``.
    Boundary entries of the outputs are left untouched.
    """
    n_r, n_z = gamma.shape
    j0 = 0 if periodic else 1
    j1 = n_z if periodic else n_z - 1
    idr2 = 1.0 / dr ** 2
    idz2 = 1.0 / dz ** 2
    for i in range(1, n_r - 1):
        ri = r[i]
        inv_r = 1.0 / ri
        swirl_c = 2.0 / ri ** 4
        for j in range(j0, j1):
            jm = j - 1 if j > 0 else n_z - 1
            jp = j + 1 if j < n_z - 1 else 0
            vr = v_r[i, j]
            vz = v_z[i, j]

            g0 = gamma[i, j]
            gm, gp = gamma[i - 1, j], gamma[i + 1, j]
            gzm, gzp = gamma[i, jm], gamma[i, jp]
            lap_g = ((gp - 2 * g0 + gm) * idr2 + (gp - gm) * 0.5 / dr * inv_r
                     + (gzp - 2 * g0 + gzm) * idz2)
            out_g[i, j] = (lap_g - _advect(gm, g0, gp, vr + 2 * inv_r, dr, upwind)
                           - _advect(gzm, g0, gzp, vz, dz, upwind))

            w0 = omega[i, j]
            wm, wp = omega[i - 1, j], omega[i + 1, j]
            wzm, wzp = omega[i, jm], omega[i, jp]
            lap_w = ((wp - 2 * w0 + wm) * idr2 + (wp - wm) * 0.5 / dr * inv_r
                     + (wzp - 2 * w0 + wzm) * idz2)
            g_z = (gzp - gzm) * 0.5 / dz
            out_o[i, j] = (lap_w - _advect(wm, w0, wp, vr - 2 * inv_r, dr, upwind)
                           - _advect(wzm, w0, wzp, vz, dz, upwind)
                           + swirl_c * g0 * g_z)


@njit(cache=True)
def swirl_stage(gamma, omega, v_r, v_z, r, dr, dz, periodic, upwind,
                g0, o0, a, b, dt, src_g, src_o, out_g, out_o):
    """One SSP-RK stage ``out = a*u0 + b*(u + dt*(rhs(u) + src))``.

    Boundary nodes get ``a*u0 + b*u`` (frozen data stays frozen).  Pass
    zero-sized ``src`` arrays when there is no forcing.
    """
    n_r, n_z = gamma.shape
    has_src = src_g.size > 0
    for i in range(n_r):
        for j in range(n_z):
            out_g[i, j] = a * g0[i, j] + b * gamma[i, j]
            out_o[i, j] = a * o0[i, j] + b * omega[i, j]
    j0 = 0 if periodic else 1
    j1 = n_z if periodic else n_z - 1
    idr2 = 1.0 / dr ** 2
    idz2 = 1.0 / dz ** 2
    h_r = 0.5 / dr
    h_z = 0.5 / dz
    bdt = b * dt
    for i in range(1, n_r - 1):
        ri = r[i]
        inv_r = 1.0 / ri
        swirl_c = 2.0 / ri ** 4
        for j in range(j0, j1):
            jm = j - 1 if j > 0 else n_z - 1
            jp = j + 1 if j < n_z - 1 else 0
            vr = v_r[i, j]
            vz = v_z[i, j]
            g_0 = gamma[i, j]
            gm, gp = gamma[i - 1, j], gamma[i + 1, j]
            gzm, gzp = gamma[i, jm], gamma[i, jp]
            lap_g = ((gp - 2 * g_0 + gm) * idr2 + (gp - gm) * h_r * inv_r
                     + (gzp - 2 * g_0 + gzm) * idz2)
            kg = (lap_g - _advect(gm, g_0, gp, vr + 2 * inv_r, dr, upwind)
                  - _advect(gzm, g_0, gzp, vz, dz, upwind))
            w_0 = omega[i, j]
            wm, wp = omega[i - 1, j], omega[i + 1, j]
            wzm, wzp = omega[i, jm], omega[i, jp]
            lap_w = ((wp - 2 * w_0 + wm) * idr2 + (wp - wm) * h_r * inv_r
                     + (wzp - 2 * w_0 + wzm) * idz2)
            ko = (lap_w - _advect(wm, w_0, wp, vr - 2 * inv_r, dr, upwind)
                  - _advect(wzm, w_0, wzp, vz, dz, upwind)
                  + swirl_c * g_0 * (gzp - gzm) * h_z)
            if has_src:
                kg += src_g[i, j]
                ko += src_o[i, j]
            out_g[i, j] += bdt * kg
            out_o[i, j] += bdt * ko


@njit(cache=True)
def max_speed(gamma, v_r, v_z, r):
    """``max(|v_r|, |v_theta|, |v_z|)`` over all nodes."""
    n_r, n_z = gamma.shape
    m = 0.0
    for i in range(n_r):
        ir = 1.0 / r[i]
        for j in range(n_z):
            a = abs(v_r[i, j])
            if a > m:
                m = a
            a = abs(v_z[i, j])
            if a > m:
                m = a
            a = abs(gamma[i, j]) * ir
            if a > m:
                m = a
    return m


@njit(cache=True)
def weighted_source(values, r, power, j0, j1):
    """``-r**power * values`` on the solver's unknown nodes."""
    n_r = values.shape[0]
    out = np.empty((n_r - 2, j1 - j0))
    for i in range(1, n_r - 1):
        c = -r[i] ** power
        for j in range(j0, j1):
            out[i - 1, j - j0] = c * values[i, j]
    return out
