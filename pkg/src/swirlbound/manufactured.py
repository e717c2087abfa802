"""Manufactured solutions for the (Gamma, Omega) system.

The exact fields vanish on the r boundaries for all time, so frozen
Dirichlet data stays exact, and are 4-periodic in z.  Source terms are
derived symbolically and compiled with :func:`sympy.lambdify`.
"""
from dataclasses import dataclass

import numpy as np
import sympy as sp

from .evolution import EvolutionConfig, Forcing, simulate
from .grid import make_grid

r, z, t = sp.symbols("r z t", real=True)


@dataclass(frozen=True)
class Manufactured:
    gamma: sp.Expr
    psi: sp.Expr

    @property
    def omega(self):
        """``omega_theta / r`` for the meridional flow of ``psi``."""
        p = self.psi
        return -(sp.diff(p, r, 2) - sp.diff(p, r) / r + sp.diff(p, z, 2)) / r ** 2

    @property
    def velocity(self):
        return -sp.diff(self.psi, z) / r, sp.diff(self.psi, r) / r

    def _lap(self, f):
        return sp.diff(f, r, 2) + sp.diff(f, r) / r + sp.diff(f, z, 2)

    def sources(self):
        """``(S_Gamma, S_Omega)`` such that the exact pair solves the forced system."""
        g, w = self.gamma, self.omega
        v_r, v_z = self.velocity
        s_g = (sp.diff(g, t) - self._lap(g) + v_r * sp.diff(g, r) + v_z * sp.diff(g, z)
               + 2 / r * sp.diff(g, r))
        s_w = (sp.diff(w, t) - self._lap(w) + v_r * sp.diff(w, r) + v_z * sp.diff(w, z)
               - 2 / r * sp.diff(w, r) - 2 * g * sp.diff(g, z) / r ** 4)
        return s_g, s_w

    def functions(self):
        """Numpy callables ``(gamma, omega, psi, s_gamma, s_omega)`` of ``(r, z, t)``."""
        exprs = (self.gamma, self.omega, self.psi) + self.sources()
        return tuple(sp.lambdify((r, z, t), e, "numpy") for e in exprs)


def default_solution(r_min=1.0, r_max=4.0):
    a, b = sp.Rational(r_min), sp.Rational(r_max)
    bump = (r - a) * (b - r)
    gamma = sp.exp(-t) * bump * (1 + sp.sin(sp.pi * z / 2) / 2)
    psi = sp.exp(-t / 2) * bump ** 3 * sp.cos(sp.pi * z / 2) / 20
    return Manufactured(gamma, psi)


@dataclass
class MmsResult:
    n_r: list
    h: list
    gamma_error: list
    omega_error: list

    @staticmethod
    def _orders(h, e):
        return [float(np.log(e[i] / e[i + 1]) / np.log(h[i] / h[i + 1]))
                for i in range(len(e) - 1)]

    @property
    def gamma_orders(self):
        return self._orders(self.h, self.gamma_error)

    @property
    def omega_orders(self):
        return self._orders(self.h, self.omega_error)


def mms_run(n_r, t_end=0.1, dt_factor=0.2, solution=None, r_min=1.0, r_max=4.0):
    """Integrate the forced system on one grid; return max errors at ``t_end``.

    The exact streamfunction vanishes on the r boundaries, so the default
    zero Dirichlet data for psi is exact.
    The grid is periodic on ``[-4, 4)`` with ``n_z = 2 (n_r - 1)`` nodes and
    ``dt = dt_factor h**2`` (adjusted to land on ``t_end``).
    """
    sol = default_solution(r_min, r_max) if solution is None else solution
    fg, fo, _, sg, so = sol.functions()
    grid = make_grid(r_min, r_max, -4, 4, n_r, 2 * (n_r - 1), True)
    cfg = EvolutionConfig(
        grid, lambda rr, zz: fg(rr, zz, 0.0), t_end,
        omega0=lambda rr, zz: fo(rr, zz, 0.0),
        dt_rule="fixed", dt=dt_factor * grid.h ** 2,
        forcing=Forcing(sg, so))
    traj = simulate(cfg)
    if traj.error is not None:
        raise traj.error
    final = traj.state(len(traj) - 1)
    eg = np.max(np.abs(final.gamma - grid.evaluate(fg, t_end)))
    eo = np.max(np.abs(final.omega - grid.evaluate(fo, t_end)))
    return grid, float(eg), float(eo)


def mms_convergence(levels=(17, 33, 65), **kw):
    n_r, h, eg, eo = [], [], [], []
    for n in levels:
        grid, a, b = mms_run(n, **kw)
        n_r.append(n)
        h.append(grid.h)
        eg.append(a)
        eo.append(b)
    return MmsResult(n_r, h, eg, eo)
