"""Scaling identities of the Navier-Stokes symmetry ``v -> k v(k x, k**2 t)``.

Closed-form field families are sympy expressions in ``(r, z, t)``.  Each side
of an identity is integrated with Gauss-Legendre quadrature on its own domain,
so agreement is a genuine check of the change of variables rather than a
re-arrangement of the same sums.
"""
import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .. import _kernels
from ..cylops import streamfunction_solver
from ..errors import RegionNotCoveredError
from ..grid import hollow, region_mask, time_weights

r_, z_, t_ = sp.symbols("r z t", real=True)


@dataclass(frozen=True)
class FieldFamily:
    """Axisymmetric velocity ``(v_r, v_theta, v_z)`` as sympy expressions."""
    name: str
    v_r: sp.Expr
    v_theta: sp.Expr
    v_z: sp.Expr

    def rescaled(self, k):
        k = sp.nsimplify(k)
        sub = {r_: k * r_, z_: k * z_, t_: k ** 2 * t_}
        return FieldFamily(f"{self.name}[k={k}]",
                           *(k * sp.sympify(c).subs(sub, simultaneous=True)
                             for c in (self.v_r, self.v_theta, self.v_z)))

    def vorticity(self):
        v_r, v_t, v_z = self.v_r, self.v_theta, self.v_z
        return (-sp.diff(v_t, z_), sp.diff(v_r, z_) - sp.diff(v_z, r_),
                sp.diff(v_t, r_) + v_t / r_)


def swirling_family():
    """Divergence-free decaying flow from a streamfunction, plus swirl."""
    psi = r_ ** 2 * sp.sin(z_) * sp.exp(-r_ ** 2 / 8 + t_) / (1 + r_ ** 2)
    return FieldFamily("swirling", -sp.diff(psi, z_) / r_,
                       r_ * sp.cos(z_ / 2) * sp.exp(t_ - r_ ** 2 / 10),
                       sp.diff(psi, r_) / r_)


def axial_family():
    return FieldFamily("axial", sp.Integer(0), sp.Integer(0), 1 - r_ ** 2)


def vortex_family():
    return FieldFamily("potential-vortex", sp.Integer(0), 1 / r_, sp.Integer(0))


def _lambdify(expr):
    f = sp.lambdify((r_, z_, t_), expr, "numpy")
    return lambda r, z, t: np.broadcast_to(np.asarray(f(r, z, t), dtype=float),
                                           np.broadcast(r, z, t).shape)


class _Rule:
    """Tensor Gauss-Legendre rule on ``C_{A,B,R} x (-R**2, 0)``."""

    def __init__(self, cyl, n):
        x, w = np.polynomial.legendre.leggauss(n)
        self.r = cyl.r_lo + (x + 1) * (cyl.r_hi - cyl.r_lo) / 2
        self.w_r = w * (cyl.r_hi - cyl.r_lo) / 2
        h = cyl.half_height
        self.z = x * h
        self.w_z = w * h
        dur = cyl.R ** 2
        self.t = (x - 1) * dur / 2
        self.w_t = w * dur / 2
        self.R = cyl.R
        self.rr, self.zz = np.meshgrid(self.r, self.z, indexing="ij")
        self.w_space = 2 * np.pi * (self.r * self.w_r)[:, None] * self.w_z[None, :]

    def l2_sq_slices(self, funcs):
        """Spatial ``int |f|^2`` at every quadrature time."""
        out = np.empty(self.t.size)
        for i, t in enumerate(self.t):
            val = sum(f(self.rr, self.zz, t) ** 2 for f in funcs)
            out[i] = np.sum(self.w_space * val)
        return out

    def l2(self, funcs):
        return math.sqrt(float(np.dot(self.w_t, self.l2_sq_slices(funcs))))


@dataclass
class ScalingCheck:
    """Relative discrepancies of identities (a)-(e) for one ``k``."""
    k: float
    family: str
    discrepancies: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)

    def passed(self, tol=1e-8):
        return all(d <= tol for d in self.discrepancies.values())


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def check_scaling(family=None, k=0.5, A=1.0, B=4.0, R=1.0, n_quad=48, n_time=129,
                  n_sup=97):
    """Check the five scaling identities on ``D = C_{A,B,R}``.

    (a) ``|v~|_{L2(D x (-R^2,0))} = k^(-3/2) |v|_{L2(kD x (-(kR)^2,0))}``
    (b) ``|b~|_{Linf L2} = k^(-1/2) |b|_{Linf L2}`` on the same pair of regions
    (c) ``|w~|_{L2} = k^(-1/2) |w|_{L2}``
    (d) nodes of the rescaled grid equal ``r / k``
    (e) ``sup |r~ v~_theta| = sup |r v_theta|``

    The time sup in (b) is taken over ``n_time`` matched instants
    ``t = k**2 t~``.
    """
    if not k > 0:
        raise ValueError("k must be positive")
    family = swirling_family() if family is None else family
    tilde = family.rescaled(k)
    D = hollow(A, B, R)
    kD = hollow(A, B, k * R)
    rule_t, rule = _Rule(D, n_quad), _Rule(kD, n_quad)
    v = [_lambdify(c) for c in (family.v_r, family.v_theta, family.v_z)]
    vt = [_lambdify(c) for c in (tilde.v_r, tilde.v_theta, tilde.v_z)]
    w = [_lambdify(c) for c in family.vorticity()]
    wt = [_lambdify(c) for c in tilde.vorticity()]
    out = ScalingCheck(float(k), family.name)

    lhs, rhs = rule_t.l2(vt), k ** -1.5 * rule.l2(v)
    out.values["a"] = (lhs, rhs)
    out.discrepancies["a"] = _rel(lhs, rhs)

    times = np.linspace(-R * R, 0.0, n_time)
    b_t = max(_space_l2(rule_t, vt[::2], t) for t in times)
    b_o = k ** -0.5 * max(_space_l2(rule, v[::2], k * k * t) for t in times)
    out.values["b"] = (b_t, b_o)
    out.discrepancies["b"] = _rel(b_t, b_o)

    lhs, rhs = rule_t.l2(wt), k ** -0.5 * rule.l2(w)
    out.values["c"] = (lhs, rhs)
    out.discrepancies["c"] = _rel(lhs, rhs)

    from ..grid import make_grid
    g = make_grid(D.r_lo, D.r_hi, -D.half_height, D.half_height, n_sup, n_sup)
    gs = g.scaled(k)
    out.discrepancies["d"] = float(np.max(np.abs(gs.r - g.r / k)) / np.max(g.r / k))
    out.values["d"] = (gs.r, g.r / k)

    # the rescaled field lives on D; its pre-image under x -> k x is kD
    rr, zz = g.rr, g.zz
    sup_t = max(np.max(np.abs(rr * vt[1](rr, zz, t))) for t in times)
    sup_o = max(np.max(np.abs(k * rr * v[1](k * rr, k * zz, k * k * t))) for t in times)
    out.values["e"] = (sup_t, sup_o)
    out.discrepancies["e"] = _rel(sup_t, sup_o)
    return out


def _space_l2(rule, funcs, t):
    val = sum(f(rule.rr, rule.zz, t) ** 2 for f in funcs)
    return math.sqrt(float(np.sum(rule.w_space * val)))


# -- rescaled trajectories -------------------------------------------------------------

def rescaled_trajectory(trajectory, k):
    """The same run seen through ``v -> k v(k x, k**2 t)``.

    Nodes become ``x / k`` and times ``t / k**2``; ``Gamma`` is unchanged,
    ``Omega`` gains ``k**3`` and the streamfunction boundary data ``1 / k``.
    The discrete equations are homogeneous under this map, so derived fields
    agree with the rescaled originals up to rounding.
    """
    from ..evolution import SwirlSystem, Trajectory

    if not k > 0:
        raise ValueError("k must be positive")
    sys0 = trajectory.system
    system = SwirlSystem(trajectory.grid.scaled(k), sys0.psi_boundary / k, sys0.advection)
    return Trajectory(system, trajectory.times / k ** 2, trajectory.gamma,
                      k ** 3 * trajectory.omega, trajectory.t_end / k ** 2,
                      gamma0_sup=trajectory.gamma0_sup)


# -- rescaled discrete equations ------------------------------------------------------

@dataclass
class RescaledResidual:
    """Max-norm residuals of the Gamma and Omega equations for rescaled data,
    relative to the size of the respective time derivatives."""
    k: float
    gamma: float
    omega: float
    gamma_abs: float
    omega_abs: float


def check_rescaled_equations(trajectory, k, A=1.0, B=4.0):
    """Residuals of both evolution equations for ``k``-rescaled snapshots.

    Snapshots are mapped to ``Gamma~ = Gamma(k x, k^2 t)``,
    ``Omega~ = k^3 Omega(k x, k^2 t)`` on the grid with nodes ``x / k`` and
    times ``t / k^2``.  The velocity is recovered on that grid, the time
    derivative is a centred difference of neighbouring snapshots, and the
    residual is measured on ``C_{A,B,1}`` over the final unit of rescaled
    time.  Central differencing in time limits the accuracy to
    ``O(h^2 + dt_out^2)``.
    """
    g0 = trajectory.grid
    grid = g0.scaled(k)
    times = trajectory.relative_times / k ** 2
    if times[0] > -1 + 1e-9:
        raise RegionNotCoveredError("trajectory too short for the rescaled window")
    space = region_mask(grid, hollow(A, B, 1.0))
    in_t, _ = time_weights(times, -1.0, 0.0)
    idx = [i for i in np.flatnonzero(in_t) if 0 < i < len(times) - 1]
    solver = streamfunction_solver(grid)
    lift = solver.lift(trajectory.system.psi_boundary / k)
    mask = space.mask
    worst = np.zeros(4)
    def fields(i):
        return trajectory.gamma[i], k ** 3 * trajectory.omega[i]
    for i in idx:
        gam, om = fields(i)
        psi = solver.solve_reduced(om, lift, check=False)
        v_r = np.empty(grid.shape)
        v_z = np.empty(grid.shape)
        _kernels.velocity(psi, grid.r, grid.dr, grid.dz, grid.periodic_z, v_r, v_z)
        rg = np.zeros(grid.shape)
        ro = np.zeros(grid.shape)
        _kernels.swirl_rhs(gam, om, v_r, v_z, grid.r, grid.dr, grid.dz,
                           grid.periodic_z, False, rg, ro)
        gp, op = fields(i + 1)
        gm, om_ = fields(i - 1)
        span = times[i + 1] - times[i - 1]
        dg = (gp - gm) / span
        do = (op - om_) / span
        worst = np.maximum(worst, [np.max(np.abs(dg - rg)[mask]), np.max(np.abs(do - ro)[mask]),
                                   np.max(np.abs(dg)[mask]), np.max(np.abs(do)[mask])])
    rel = lambda a, b: a / b if b > 0 else a
    return RescaledResidual(float(k), rel(worst[0], worst[2]), rel(worst[1], worst[3]),
                            float(worst[0]), float(worst[1]))
