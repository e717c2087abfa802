"""Empirical constants of the local gradient estimates for axisymmetric fields.

For an axisymmetric ``v = v_r e_r + v_theta e_theta + v_z e_z`` the Cartesian
gradient has, in the cylindrical frame, the nine entries::

    d_r v_r        d_r v_theta      d_r v_z
    -v_theta / r   v_r / r          0
    d_z v_r        d_z v_theta      d_z v_z

whose Frobenius norm is ``|grad v|``; the middle row comes from differentiating
the rotating unit vectors.  Both ratios below are positively 1-homogeneous in
``v``.
"""
from dataclasses import dataclass

import numpy as np

from ..cylops import (AxisymVectorField, curl_axisym, d_dr, d_dz,
                      divergence_axisym, gradient_matrix)
from ..grid import hollow, make_grid, parabolic
from ..norms import SpaceTimeSample, lp_norm


class DiscretizationFault(ArithmeticError):
    """Right-hand side vanished while the left-hand side did not."""


def grad_norm_full(v):
    """Pointwise ``|grad v|`` including the frame-rotation terms."""
    g = v.grid
    r = g.rr
    entries = [d_dr(g, v.v_r, True), d_dr(g, v.v_theta, True), d_dr(g, v.v_z, True),
               v.v_theta / r, v.v_r / r,
               d_dz(g, v.v_r, True), d_dz(g, v.v_theta, True), d_dz(g, v.v_z, True)]
    return np.sqrt(sum(e ** 2 for e in entries))


def _norm(grid, field, cyl, q):
    return lp_norm(SpaceTimeSample.single(grid, field), parabolic(cyl.A, cyl.B, cyl.R), q)


def _ratio(lhs, rhs):
    if rhs == 0.0:
        if lhs == 0.0:
            return 0.0
        raise DiscretizationFault(f"right-hand side is zero but left-hand side is {lhs:.3e}")
    return lhs / rhs


def helmholtz_terms(v, q, inner=None, outer=None):
    """``(lhs, rhs)`` with ``lhs = |grad v|_q`` on ``inner`` and
    ``rhs = |curl v|_q + |div v|_q + |v|_q`` on ``outer``."""
    inner = hollow(2, 3, 1) if inner is None else inner
    outer = hollow(1, 4, 1) if outer is None else outer
    g = v.grid
    lhs = _norm(g, grad_norm_full(v), inner, q)
    w = curl_axisym(v, edges=True)
    rhs = (_norm(g, w.magnitude(), outer, q)
           + _norm(g, divergence_axisym(v, edges=True), outer, q)
           + _norm(g, v.magnitude(), outer, q))
    return lhs, rhs


def helmholtz_ratio(v, q, inner=None, outer=None):
    """Left over right side of the local gradient estimate for general fields."""
    if not q > 1:
        raise ValueError("q must exceed 1")
    return _ratio(*helmholtz_terms(v, q, inner, outer))


def axisym_gradient_terms(v, q, inner=None, outer=None):
    """``lhs = |grad v_r| + |v_r / r| + |grad v_z|`` on ``inner``,
    ``rhs = |w_theta| + |v|`` on ``outer`` (all in ``L^q``)."""
    inner = hollow(2, 3, 1) if inner is None else inner
    outer = hollow(1, 4, 1) if outer is None else outer
    g = v.grid
    grad_r = np.hypot(d_dr(g, v.v_r, True), d_dz(g, v.v_r, True))
    grad_z = np.hypot(d_dr(g, v.v_z, True), d_dz(g, v.v_z, True))
    lhs = (_norm(g, grad_r, inner, q) + _norm(g, v.v_r / g.rr, inner, q)
           + _norm(g, grad_z, inner, q))
    w = curl_axisym(v, edges=True)
    rhs = _norm(g, w.omega_theta, outer, q) + _norm(g, v.magnitude(), outer, q)
    return lhs, rhs


def axisym_gradient_ratio(v, q, inner=None, outer=None):
    """Ratio for divergence-free axisymmetric fields (meridional gradient)."""
    if not q > 1:
        raise ValueError("q must exceed 1")
    return _ratio(*axisym_gradient_terms(v, q, inner, outer))


def v_matrix_norm(v, region):
    """``L^{10/3}`` norm of the entrywise max ``|V|`` over ``region``.

    ``v`` is either a single :class:`AxisymVectorField`, taken as constant in
    time over the region's window, or a trajectory whose snapshots are used.
    """
    if isinstance(v, AxisymVectorField):
        sample = SpaceTimeSample.single(v.grid, gradient_matrix(v, edges=True).max_abs())
        spatial = lp_norm(sample, region, 10 / 3)
        return spatial * region.duration ** 0.3
    sample = SpaceTimeSample.from_trajectory(
        v, lambda s: gradient_matrix(s.velocity, edges=True).max_abs())
    return lp_norm(sample, region, 10 / 3)


# -- random band-limited families -----------------------------------------------------

@dataclass(frozen=True)
class WaveSum:
    """``sum_j c_j sin(a_j r + b_j z + phi_j)`` with its exact derivatives."""
    c: np.ndarray
    a: np.ndarray
    b: np.ndarray
    phi: np.ndarray

    def _arg(self, r, z):
        return (self.a[:, None, None] * r[None] + self.b[:, None, None] * z[None]
                + self.phi[:, None, None])

    def value(self, r, z):
        return np.einsum("j,jrz->rz", self.c, np.sin(self._arg(r, z)))

    def d_r(self, r, z):
        return np.einsum("j,jrz->rz", self.c * self.a, np.cos(self._arg(r, z)))

    def d_z(self, r, z):
        return np.einsum("j,jrz->rz", self.c * self.b, np.cos(self._arg(r, z)))


def _wave_sum(rng, n_waves, k_max):
    a = rng.uniform(-k_max, k_max, n_waves)
    b = rng.uniform(-k_max, k_max, n_waves)
    c = rng.standard_normal(n_waves) / (1 + a ** 2 + b ** 2)
    return WaveSum(c, a, b, rng.uniform(0, 2 * np.pi, n_waves))


def family_grid(n_r=97, n_z=None):
    """Grid on ``[0.8, 4.4] x [-4.4, 4.4]`` that covers ``C_{1,4,1}`` with margin."""
    n_z = 2 * n_r + 47 if n_z is None else n_z
    return make_grid(0.8, 4.4, -4.4, 4.4, n_r, n_z)


@dataclass(frozen=True)
class FieldSpec:
    """Seeded recipe for one smooth field; sampling it on any grid is exact."""
    solenoidal: bool
    parts: tuple

    def sample(self, grid):
        r, z = grid.rr, grid.zz
        if self.solenoidal:
            (psi,) = self.parts
            return AxisymVectorField(grid, -psi.d_z(r, z) / r, np.zeros(grid.shape),
                                     psi.d_r(r, z) / r)
        return AxisymVectorField(grid, *(p.value(r, z) for p in self.parts))


def random_family(size, seed, solenoidal=False, n_waves=12, k_max=3.0):
    """``size`` seeded band-limited fields (wavenumbers at most ``k_max``).

    With ``solenoidal=True`` the meridional velocity comes from a random
    streamfunction (``v_r = -psi_z / r``, ``v_z = psi_r / r``, no swirl), so
    it is divergence-free before discretization.
    """
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(size):
        if solenoidal:
            specs.append(FieldSpec(True, (_wave_sum(rng, n_waves, k_max),)))
        else:
            specs.append(FieldSpec(False, tuple(_wave_sum(rng, n_waves, k_max)
                                                for _ in range(3))))
    return specs


@dataclass
class FamilySweep:
    """Per-field ratios of one family at one resolution."""
    q: float
    ratios: np.ndarray

    @property
    def max_ratio(self):
        return float(np.max(self.ratios))


def family_sweep(specs, grid, q, kind="helmholtz", scale=1.0):
    fn = helmholtz_ratio if kind == "helmholtz" else axisym_gradient_ratio
    out = []
    for spec in specs:
        v = spec.sample(grid)
        if scale != 1.0:
            v = v.scaled(scale)
        out.append(fn(v, q))
    return FamilySweep(q, np.array(out))


def rigid_rotation(grid):
    return AxisymVectorField(grid, 0.0, grid.rr, 0.0)


def relative_spread(a, b):
    return abs(a - b) / max(abs(a), abs(b)) if max(abs(a), abs(b)) > 0 else 0.0


__all__ = [
    "DiscretizationFault", "grad_norm_full", "helmholtz_terms", "helmholtz_ratio",
    "axisym_gradient_terms", "axisym_gradient_ratio", "v_matrix_norm",
    "random_family", "family_grid", "family_sweep", "FieldSpec", "FamilySweep",
    "rigid_rotation", "relative_spread",
]
