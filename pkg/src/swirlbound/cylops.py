"""Finite-difference operators for axisymmetric fields on an annular grid.

All derivatives are second-order centred differences.  Unless ``edges=True``
is passed, values on the Dirichlet boundary ring are not evaluated and come
back as NaN; with ``edges=True`` the ring uses second-order one-sided
differences.  Along a periodic z axis every node is interior.

The streamfunction convention is ``v_r = -psi_z / r``, ``v_z = psi_r / r``,
for which ``psi_rr - psi_r / r + psi_zz = -r * omega_theta``.
"""
from dataclasses import dataclass

import numpy as np
from scipy import fft

from . import _kernels
from .errors import NonConvergenceError
from .grid import AnnularGrid


@dataclass(frozen=True)
class AxisymVectorField:
    """Cylindrical components of a theta-independent vector field."""
    grid: AnnularGrid
    v_r: np.ndarray
    v_theta: np.ndarray
    v_z: np.ndarray

    def __post_init__(self):
        for name in ("v_r", "v_theta", "v_z"):
            a = np.asarray(getattr(self, name), dtype=float)
            if a.shape != self.grid.shape:
                a = np.broadcast_to(a, self.grid.shape).copy()
            object.__setattr__(self, name, a)

    @property
    def meridional(self):
        """The swirl-free drift ``b = (v_r, 0, v_z)``."""
        return AxisymVectorField(self.grid, self.v_r, np.zeros(self.grid.shape), self.v_z)

    def magnitude(self):
        return np.sqrt(self.v_r ** 2 + self.v_theta ** 2 + self.v_z ** 2)

    def scaled(self, lam):
        return AxisymVectorField(self.grid, lam * self.v_r, lam * self.v_theta,
                                 lam * self.v_z)


@dataclass(frozen=True)
class VorticityField:
    grid: AnnularGrid
    omega_r: np.ndarray
    omega_theta: np.ndarray
    omega_z: np.ndarray

    def magnitude(self):
        return np.sqrt(self.omega_r ** 2 + self.omega_theta ** 2 + self.omega_z ** 2)


@dataclass(frozen=True)
class GradientMatrix:
    """Potential matrix of the (omega_r, omega_z) system.

    ``rr = dv_r/dr - 1/r**2``, ``zr = dv_z/dr``, ``rz = dv_r/dz``,
    ``zz = dv_z/dz``.
    """
    grid: AnnularGrid
    rr: np.ndarray
    zr: np.ndarray
    rz: np.ndarray
    zz: np.ndarray

    def max_abs(self):
        """Entrywise max norm ``|V|`` at each node."""
        return np.maximum.reduce([np.abs(self.rr), np.abs(self.zr),
                                  np.abs(self.rz), np.abs(self.zz)])


def d_dr(grid, f, edges=False):
    dr = grid.dr
    out = np.empty(grid.shape)
    out[1:-1] = (f[2:] - f[:-2]) / (2 * dr)
    if edges:
        out[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * dr)
        out[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * dr)
    else:
        out[0] = out[-1] = np.nan
    return out


def d_dz(grid, f, edges=False):
    dz = grid.dz
    if grid.periodic_z:
        return (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / (2 * dz)
    out = np.empty(grid.shape)
    out[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / (2 * dz)
    if edges:
        out[:, 0] = (-3 * f[:, 0] + 4 * f[:, 1] - f[:, 2]) / (2 * dz)
        out[:, -1] = (3 * f[:, -1] - 4 * f[:, -2] + f[:, -3]) / (2 * dz)
    else:
        out[:, 0] = out[:, -1] = np.nan
    return out


def _d2_dz2(grid, f):
    if grid.periodic_z:
        return (np.roll(f, -1, axis=1) - 2 * f + np.roll(f, 1, axis=1)) / grid.dz ** 2
    out = np.full(grid.shape, np.nan)
    out[:, 1:-1] = (f[:, 2:] - 2 * f[:, 1:-1] + f[:, :-2]) / grid.dz ** 2
    return out


def _d2_dr2(grid, f):
    out = np.full(grid.shape, np.nan)
    out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / grid.dr ** 2
    return out


def gradient_axisym(grid, f, edges=False):
    """``(df/dr, df/dz)``; the theta component of an axisymmetric scalar is zero."""
    return d_dr(grid, f, edges), d_dz(grid, f, edges)


def laplacian_axisym(grid, f):
    """``f_rr + f_r / r + f_zz`` at interior nodes (NaN on the boundary ring)."""
    return _d2_dr2(grid, f) + d_dr(grid, f) / grid.rr + _d2_dz2(grid, f)


def divergence_axisym(v, edges=False):
    """``(1/r) d(r v_r)/dr + dv_z/dz``."""
    g = v.grid
    return d_dr(g, g.rr * v.v_r, edges) / g.rr + d_dz(g, v.v_z, edges)


def curl_axisym(v, edges=False):
    g = v.grid
    omega_r = -d_dz(g, v.v_theta, edges)
    omega_theta = d_dz(g, v.v_r, edges) - d_dr(g, v.v_z, edges)
    omega_z = d_dr(g, v.v_theta, edges) + v.v_theta / g.rr
    return VorticityField(g, omega_r, omega_theta, omega_z)


def gradient_matrix(v, edges=False):
    g = v.grid
    return GradientMatrix(g,
                          d_dr(g, v.v_r, edges) - 1.0 / g.rr ** 2,
                          d_dr(g, v.v_z, edges),
                          d_dz(g, v.v_r, edges),
                          d_dz(g, v.v_z, edges))


def stokes_operator(grid, psi):
    """``psi_rr - psi_r / r + psi_zz`` at interior nodes."""
    return _d2_dr2(grid, psi) - d_dr(grid, psi) / grid.rr + _d2_dz2(grid, psi)


def velocity_from_streamfunction(grid, psi, edges=True):
    """``(v_r, v_z) = (-psi_z / r, psi_r / r)``."""
    return -d_dz(grid, psi, edges) / grid.rr, d_dr(grid, psi, edges) / grid.rr


def _boundary_array(grid, bc):
    if bc is None:
        return np.zeros(grid.shape)
    if callable(bc):
        return grid.evaluate(bc)
    return np.broadcast_to(np.asarray(bc, dtype=float), grid.shape)


class StreamfunctionSolver:
    """Direct solver for ``psi_rr - psi_r/r + psi_zz = -r omega_theta``.

    The z direction is diagonalised by a type-I sine transform (Dirichlet) or
    a real FFT (periodic), leaving one tridiagonal system in r per z mode.
    The tridiagonal factorisations are computed once per grid.  The result is
    deterministic for identical input.

    Dirichlet data for psi are taken from the boundary entries of ``bc``.
    """

    def __init__(self, grid, tol=1e-10, max_refinements=3):
        self.grid = grid
        self.tol = tol
        self.max_refinements = max_refinements
        n_r, n_z = grid.shape
        dr, dz = grid.dr, grid.dz
        r = grid.r[1:-1]
        self._lower = 1 / dr ** 2 + 1 / (2 * r * dr)
        self._upper = 1 / dr ** 2 - 1 / (2 * r * dr)
        if grid.periodic_z:
            k = np.arange(n_z // 2 + 1)
            lam = -(2 - 2 * np.cos(2 * np.pi * k / n_z)) / dz ** 2
        else:
            m = n_z - 2
            k = np.arange(1, m + 1)
            lam = -(2 - 2 * np.cos(np.pi * k / (m + 1))) / dz ** 2
        diag = -2 / dr ** 2 + lam[None, :] * np.ones((r.size, 1))
        # Thomas factors, one column per z mode
        inv_den = np.empty_like(diag)
        cp = np.empty_like(diag)
        inv_den[0] = 1 / diag[0]
        cp[0] = self._upper[0] * inv_den[0]
        for i in range(1, r.size):
            inv_den[i] = 1 / (diag[i] - self._lower[i] * cp[i - 1])
            cp[i] = self._upper[i] * inv_den[i]
        self._inv_den = inv_den
        self._cp = cp

    def _forward(self, rhs):
        if self.grid.periodic_z:
            return fft.rfft(rhs, axis=1)
        return fft.dst(rhs, type=1, axis=1)

    def _backward(self, coef):
        if self.grid.periodic_z:
            return fft.irfft(coef, n=self.grid.n_z, axis=1)
        return fft.idst(coef, type=1, axis=1)

    def _solve_interior(self, rhs):
        """Solve with homogeneous boundary data; ``rhs`` on unknown nodes."""
        coef = _kernels.tridiag_sweep(self._lower, self._inv_den, self._cp,
                                      self._forward(rhs))
        return self._backward(coef)

    def _unknowns(self):
        return (slice(1, -1), slice(None)) if self.grid.periodic_z else (slice(1, -1), slice(1, -1))

    def _apply_interior(self, psi):
        """Operator applied to a full array, restricted to the unknown nodes."""
        g = self.grid
        return _kernels.stokes_interior(psi, g.r, g.dr, g.dz, g.periodic_z)

    def lift(self, bc=None):
        """Boundary data of psi and its contribution to the right-hand side.

        Reusing one lift across many solves with the same boundary data
        avoids re-applying the operator to the boundary ring every time.
        """
        g = self.grid
        psi_b = np.array(_boundary_array(g, bc), dtype=float)
        psi_b[self._unknowns()] = 0.0
        return BoundaryLift(psi_b, self._apply_interior(psi_b))

    def solve(self, omega_theta, bc=None, check=True, lift=None):
        """Streamfunction for ``omega_theta`` with Dirichlet data ``bc``.

        Raises :class:`NonConvergenceError` if the relative residual stays
        above ``tol`` after ``max_refinements`` correction sweeps.
        """
        return self._solve(np.asarray(omega_theta, dtype=float), 1,
                           self.lift(bc) if lift is None else lift, check)

    def solve_reduced(self, omega, lift, check=True):
        """Same as :meth:`solve` but takes ``omega_theta / r``."""
        return self._solve(np.asarray(omega, dtype=float), 2, lift, check)

    def _solve(self, values, power, lift, check):
        g = self.grid
        j0, j1 = (0, g.n_z) if g.periodic_z else (1, g.n_z - 1)
        f = _kernels.weighted_source(values, g.r, power, j0, j1)
        interior = self._unknowns()
        psi = lift.psi.copy()
        psi[interior] = self._solve_interior(f - lift.rhs)
        if not check:
            return psi
        scale = max(np.max(np.abs(f)) if f.size else 0.0,
                    np.max(np.abs(psi)) * (2 / g.dr ** 2 + 2 / g.dz ** 2))
        if scale == 0.0:
            return psi
        for it in range(1, self.max_refinements + 2):
            res = f - self._apply_interior(psi)
            rel = np.max(np.abs(res)) / scale
            if rel <= self.tol:
                return psi
            if it > self.max_refinements:
                break
            psi[interior] += self._solve_interior(res)
        raise NonConvergenceError(it, rel)


@dataclass(frozen=True)
class BoundaryLift:
    psi: np.ndarray
    rhs: np.ndarray


_solver_cache = {}


def streamfunction_solver(grid):
    """Shared :class:`StreamfunctionSolver` for ``grid`` (grids are immutable)."""
    solver = _solver_cache.get(grid)
    if solver is None:
        if len(_solver_cache) > 8:
            _solver_cache.clear()
        solver = _solver_cache[grid] = StreamfunctionSolver(grid)
    return solver


def solve_streamfunction(grid, omega_theta, bc=None, check=True):
    """Solve ``psi_rr - psi_r/r + psi_zz = -r omega_theta`` on ``grid``."""
    return streamfunction_solver(grid).solve(omega_theta, bc, check)
