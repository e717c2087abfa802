"""Annular (r, z) grids, hollow-cylinder regions and cylindrical quadrature.

Arrays living on a grid are indexed ``[i, j]`` with ``i`` along r and ``j``
along z, i.e. shape ``(n_r, n_z)``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (AxisIncludedError, EmptyRegionError, GridError,
                     GridTooCoarseError, RegionNotCoveredError)

MIN_NODES = 8
# relative slack used when deciding whether a node lies on a region boundary
_EDGE_TOL = 1e-9


@dataclass(frozen=True)
class AnnularGrid:
    """Uniform tensor grid on ``[r_min, r_max] x [z_min, z_max]``.

    With ``periodic_z`` the node ``z_max`` is the periodic image of ``z_min``
    and is not stored, so ``dz = (z_max - z_min) / n_z``.
    """
    r_min: float
    r_max: float
    z_min: float
    z_max: float
    n_r: int
    n_z: int
    periodic_z: bool = False

    def __post_init__(self):
        if not self.r_min > 0:
            raise AxisIncludedError(
                f"r_min={self.r_min} must be > 0 (the axis is excluded)")
        if not self.r_max > self.r_min:
            raise GridError("r extent must be positive")
        if not self.z_max > self.z_min:
            raise GridError("z extent must be positive")
        if int(self.n_r) != self.n_r or int(self.n_z) != self.n_z:
            raise GridError("node counts must be integers")
        if self.n_r < MIN_NODES or self.n_z < MIN_NODES:
            raise GridTooCoarseError(
                f"need at least {MIN_NODES} nodes per direction, "
                f"got ({self.n_r}, {self.n_z})")

    @property
    def shape(self):
        return (self.n_r, self.n_z)

    @property
    def dr(self):
        return (self.r_max - self.r_min) / (self.n_r - 1)

    @property
    def dz(self):
        if self.periodic_z:
            return (self.z_max - self.z_min) / self.n_z
        return (self.z_max - self.z_min) / (self.n_z - 1)

    @property
    def h(self):
        return min(self.dr, self.dz)

    @cached_property
    def r(self):
        return self.r_min + np.arange(self.n_r) * self.dr

    @cached_property
    def z(self):
        return self.z_min + np.arange(self.n_z) * self.dz

    @cached_property
    def rr(self):
        """r coordinate broadcast to the full grid shape."""
        return np.broadcast_to(self.r[:, None], self.shape)

    @cached_property
    def zz(self):
        return np.broadcast_to(self.z[None, :], self.shape)

    @cached_property
    def boundary(self):
        """Boolean mask of Dirichlet boundary nodes."""
        b = np.zeros(self.shape, dtype=bool)
        b[0, :] = b[-1, :] = True
        if not self.periodic_z:
            b[:, 0] = b[:, -1] = True
        return b

    def zeros(self):
        return np.zeros(self.shape)

    def evaluate(self, func, *args):
        """Sample ``func(r, z, *args)`` on the nodes as a float array."""
        out = func(self.rr, self.zz, *args)
        return np.broadcast_to(np.asarray(out, dtype=float), self.shape).copy()

    def scaled(self, k):
        """Grid whose nodes are those of ``self`` divided by ``k``."""
        return AnnularGrid(self.r_min / k, self.r_max / k, self.z_min / k,
                           self.z_max / k, self.n_r, self.n_z, self.periodic_z)

    def refined(self):
        """Grid with both spacings halved."""
        n_z = 2 * self.n_z if self.periodic_z else 2 * self.n_z - 1
        return AnnularGrid(self.r_min, self.r_max, self.z_min, self.z_max,
                           2 * self.n_r - 1, n_z, self.periodic_z)


def make_grid(r_min, r_max, z_min, z_max, n_r, n_z, periodic_z=False):
    return AnnularGrid(float(r_min), float(r_max), float(z_min), float(z_max),
                       int(n_r), int(n_z), bool(periodic_z))


@dataclass(frozen=True)
class HollowCylinder:
    """``{A R <= r <= B R, |z| <= B R}``."""
    A: float
    B: float
    R: float = 1.0

    def __post_init__(self):
        if not (0 < self.A < self.B):
            raise ValueError(f"need 0 < A < B, got A={self.A}, B={self.B}")
        if not self.R > 0:
            raise ValueError(f"need R > 0, got {self.R}")

    @property
    def r_lo(self):
        return self.A * self.R

    @property
    def r_hi(self):
        return self.B * self.R

    @property
    def half_height(self):
        return self.B * self.R

    @property
    def volume(self):
        return np.pi * (self.r_hi ** 2 - self.r_lo ** 2) * 2 * self.half_height

    def contains(self, r, z):
        tol = _EDGE_TOL * self.r_hi
        return ((r >= self.r_lo - tol) & (r <= self.r_hi + tol)
                & (np.abs(z) <= self.half_height + tol))


@dataclass(frozen=True)
class ParabolicCylinder:
    """A hollow cylinder crossed with the trailing time window ``(-duration, 0]``.

    ``duration`` defaults to ``R**2``; the shrinking regions of the Moser
    schedule use ``sigma**2`` instead.
    """
    space: HollowCylinder
    duration: float = None

    def __post_init__(self):
        if self.duration is None:
            object.__setattr__(self, "duration", self.space.R ** 2)
        if not self.duration > 0:
            raise ValueError("time window must have positive length")

    @property
    def t_start(self):
        return -self.duration

    @property
    def measure(self):
        return self.space.volume * self.duration


def hollow(A, B, R=1.0):
    return HollowCylinder(float(A), float(B), float(R))


def parabolic(A, B, R=1.0, duration=None):
    return ParabolicCylinder(hollow(A, B, R), duration)


def interval_weights(x, a, b, upper=None):
    """Second-order quadrature weights on sorted uniform nodes for ``[a, b]``.

    Each node carries the length of ``[a, b]`` inside its cell
    ``[x - h/2, x + h/2]``.  When the ends fall on nodes this is the plain
    trapezoidal rule; otherwise a node just outside an end may carry the
    sliver of the interval in its cell.  The weights grow with the interval,
    so integrals of non-negative data are monotone in the region.  ``upper``
    is the largest admissible coordinate (defaults to ``x[-1]``; a periodic
    axis extends one cell further and wraps onto the first node).

    Returns ``(inside, weights)``: ``inside`` marks the nodes in the closed
    interval, the nodes with positive weight are the integration support.
    """
    x = np.asarray(x, dtype=float)
    upper = x[-1] if upper is None else upper
    h = x[1] - x[0]
    tol = _EDGE_TOL * max(h, abs(a), abs(b))
    if a < x[0] - tol or b > upper + tol:
        raise RegionNotCoveredError(
            f"interval [{a:.6g}, {b:.6g}] exceeds the grid [{x[0]:.6g}, {upper:.6g}]")
    inside = (x >= a - tol) & (x <= b + tol)

    def cell(c):
        return np.clip(np.minimum(c + h / 2, b) - np.maximum(c - h / 2, a), 0.0, None)

    w = cell(x)
    if upper > x[-1]:
        w[0] += cell(x[-1] + h)
    return inside, w


@dataclass(frozen=True)
class RegionMask:
    """Nodes of a grid inside a hollow cylinder, with cylindrical weights.

    ``mask`` marks the nodes of the closed region and bounds every sup.
    ``weights`` already includes the exact ``2 pi r`` factor of the
    ``r dr dtheta dz`` measure; its support may reach one node past an edge.
    """
    mask: np.ndarray
    weights: np.ndarray
    clipped_fraction: float = 0.0

    @property
    def volume(self):
        return float(self.weights.sum())

    @property
    def support(self):
        return self.weights > 0


def region_mask(grid, cyl, clip=False):
    """Quadrature of ``cyl`` on ``grid``.

    With ``clip=True`` the cylinder is intersected with the computational
    domain first and the missing fraction of its analytic volume is recorded;
    otherwise a cylinder reaching outside the domain raises
    :class:`RegionNotCoveredError`.
    """
    r_lo, r_hi = cyl.r_lo, cyl.r_hi
    z_lo, z_hi = -cyl.half_height, cyl.half_height
    if r_lo > grid.r_max or r_hi < grid.r_min or z_lo > grid.z_max or z_hi < grid.z_min:
        raise EmptyRegionError(f"{cyl} does not meet the grid")
    fraction = 0.0
    if clip:
        r_lo, r_hi = max(r_lo, grid.r_min), min(r_hi, grid.r_max)
        z_lo, z_hi = max(z_lo, grid.z_min), min(z_hi, grid.z_max)
        kept = np.pi * (r_hi ** 2 - r_lo ** 2) * (z_hi - z_lo)
        fraction = 1.0 - kept / cyl.volume
    z_upper = grid.z_max if grid.periodic_z else None
    in_r, w_r = interval_weights(grid.r, r_lo, r_hi)
    in_z, w_z = interval_weights(grid.z, z_lo, z_hi, upper=z_upper)
    mask = in_r[:, None] & in_z[None, :]
    if not mask.any():
        raise EmptyRegionError(f"no grid nodes inside {cyl}")
    weights = 2 * np.pi * (grid.r * w_r)[:, None] * w_z[None, :]
    return RegionMask(mask, weights, fraction)


def time_weights(times, t_lo, t_hi):
    """Quadrature weights of sample ``times`` for the window ``[t_lo, t_hi]``."""
    times = np.asarray(times, dtype=float)
    if times.size == 1:
        if abs(t_hi - t_lo) > _EDGE_TOL:
            raise RegionNotCoveredError("a single time slice cannot cover a window")
        return times >= t_lo - _EDGE_TOL, np.ones(1)
    return interval_weights(times, t_lo, t_hi)


@dataclass(frozen=True)
class SigmaSchedule:
    """Shrinking radii ``sigma_i`` of the Moser iteration in dimension three.

    ``tau_i = 2**(-i-2)``, ``sigma_0 = 1``, ``sigma_i = sigma_{i-1} - tau_i``
    and ``gamma = 1 + 2/n`` with ``n = 3``.  All sigmas are dyadic rationals,
    hence exact in floating point.
    """
    i_max: int = 8
    n: int = field(default=3, repr=False)

    @property
    def gamma(self):
        return 1 + 2 / self.n

    @staticmethod
    def tau(i):
        return 2.0 ** (-i - 2)

    def sigma_exact(self, i):
        if not 0 <= i <= self.i_max:
            raise ValueError(f"level {i} outside 0..{self.i_max}")
        return 1 - sum((Fraction(1, 2 ** (j + 2)) for j in range(1, i + 1)),
                       Fraction(0))

    def sigma(self, i):
        return float(self.sigma_exact(i))

    @staticmethod
    def region_for(sigma):
        return ParabolicCylinder(hollow(5 - 4 * sigma, 4 * sigma, 1.0), sigma ** 2)

    def region(self, i):
        return self.region_for(self.sigma(i))

    limit_sigma = 0.75

    @property
    def limit_region(self):
        """``P(3/4) = C_{2,3,1} x (-9/16, 0]``."""
        return self.region_for(self.limit_sigma)


def sigma(schedule, i):
    """``(sigma_i, P(sigma_i))`` for ``schedule``."""
    return schedule.sigma(i), schedule.region(i)
