"""Ratio tests for the pointwise vorticity bounds away from the axis.

Both bounds have the form ``|w| * r**k <= B`` on ``P_{2,3,R}`` with a constant
``B`` built from norms of the data.  With the generic constant set to one the
proxies are::

    B1 = (K**2 + R S0)**(5/2) * (|w_theta|_{P_{1,4,R}} + sqrt(R) S0)
    B2 = [(K'**4 + R**2 S0 + R**2) |w_theta|**2 + R K'**4 + |v|**2 + R**3]**(5/2)
         * (|w_r| + |w_z|)

where ``K = max_t |b(t)|_{L2(C_{1,4,R})}``, ``K'`` is the same over
``C_{1/10,10,R}``, ``S0 = sup|Gamma(0)|`` and the unlabelled norms of B2 are
L2 over ``P_{1/10,10,R}``.  The wide region is clipped to the computational
domain and the clipped fraction of its volume is reported.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import RegionNotCoveredError
from ..grid import hollow, parabolic, region_mask, time_weights

# calibrated once on the reference runs, about ten times the largest observed ratio
DEFAULT_CEILING = {"i": 1.0, "ii": 3.0e4}


@dataclass(frozen=True)
class ProxyInputs:
    """Norms entering the two proxies for one radius ``R``."""
    R: float
    s0: float
    k_b: float = 0.0
    omega_theta_l2: float = 0.0
    k_b_wide: float = 0.0
    omega_theta_l2_wide: float = 0.0
    v_l2_wide: float = 0.0
    omega_r_l2_wide: float = 0.0
    omega_z_l2_wide: float = 0.0
    clipped_fraction: float = 0.0
    sup_theta: float = 0.0        # sup |w_theta| r^5 on P_{2,3,R}
    sup_rz: float = 0.0           # sup (|w_r| + |w_z|) r^10 on P_{2,3,R}
    sup_rz_max: float = 0.0       # sup max(|w_r|, |w_z|) r^10 on P_{2,3,R}


def b1_formula(k_b, omega_theta_l2, s0, R):
    return (k_b ** 2 + R * s0) ** 2.5 * (omega_theta_l2 + math.sqrt(R) * s0)


def b2_formula(k_b, omega_theta_l2, v_l2, omega_r_l2, omega_z_l2, s0, R):
    k4 = k_b ** 4
    bracket = ((k4 + R ** 2 * s0 + R ** 2) * omega_theta_l2 ** 2
               + R * k4 + v_l2 ** 2 + R ** 3)
    return bracket ** 2.5 * (omega_r_l2 + omega_z_l2)


def _inputs(data, R):
    if isinstance(data, ProxyInputs):
        return data
    return collect_inputs(data, [R])[R]


def b1_proxy(data, R):
    """B1 with ``c = 1``; ``data`` is a trajectory or a :class:`ProxyInputs`."""
    d = _inputs(data, R)
    return b1_formula(d.k_b, d.omega_theta_l2, d.s0, R)


def b2_proxy(data, R):
    d = _inputs(data, R)
    return b2_formula(d.k_b_wide, d.omega_theta_l2_wide, d.v_l2_wide,
                      d.omega_r_l2_wide, d.omega_z_l2_wide, d.s0, R)


@dataclass
class _Accumulator:
    R: float
    idx: set
    sup_idx: set
    w_t: np.ndarray
    narrow: object
    wide: object
    inner: object
    r5: np.ndarray
    r10: np.ndarray
    k_b: float = 0.0
    k_b_wide: float = 0.0
    sq: dict = field(default_factory=lambda: dict.fromkeys(
        ("theta", "theta_wide", "v_wide", "r_wide", "z_wide"), 0.0))
    sup_theta: float = 0.0
    sup_rz: float = 0.0
    sup_rz_max: float = 0.0


def collect_inputs(trajectory, radii):
    """One pass over the trajectory collecting every norm for every ``R``.

    Raises :class:`RegionNotCoveredError` when the trajectory is too short
    for a window or the grid misses ``C_{1,4,R}``.
    """
    grid = trajectory.grid
    tp = trajectory.relative_times
    s0 = float(np.max(np.abs(trajectory.gamma[0])))
    acc = {}
    for R in radii:
        R = float(R)
        if tp[0] > -R * R + 1e-9:
            raise RegionNotCoveredError(
                f"trajectory spans {-tp[0]:.6g} in time, R={R} needs {R * R:.6g}")
        in_t, w_t = time_weights(tp, -R * R, 0.0)
        narrow = region_mask(grid, hollow(1, 4, R))
        wide = region_mask(grid, hollow(0.1, 10, R), clip=True)
        inner = region_mask(grid, hollow(2, 3, R))
        r = grid.rr
        sup_idx = set(np.flatnonzero(in_t))
        acc[R] = _Accumulator(R, sup_idx | set(np.flatnonzero(w_t > 0)), sup_idx, w_t,
                              narrow, wide, inner,
                              np.where(inner.mask, r ** 5, 0.0),
                              np.where(inner.mask, r ** 10, 0.0))
    needed = sorted(set().union(*(a.idx for a in acc.values())))
    for k in needed:
        state = trajectory.state(k)
        w = state.vorticity()
        b_sq = state.v_r ** 2 + state.v_z ** 2
        v_sq = b_sq + state.v_theta ** 2
        th_sq = w.omega_theta ** 2
        a_th = np.abs(w.omega_theta)
        a_r, a_z = np.abs(w.omega_r), np.abs(w.omega_z)
        for a in acc.values():
            if k not in a.idx:
                continue
            wn, ww = a.narrow.weights, a.wide.weights
            wt = a.w_t[k]
            a.sq["theta"] += wt * np.sum(wn * th_sq)
            a.sq["theta_wide"] += wt * np.sum(ww * th_sq)
            a.sq["v_wide"] += wt * np.sum(ww * v_sq)
            a.sq["r_wide"] += wt * np.sum(ww * a_r ** 2)
            a.sq["z_wide"] += wt * np.sum(ww * a_z ** 2)
            if k not in a.sup_idx:
                continue
            a.k_b = max(a.k_b, math.sqrt(np.sum(wn * b_sq)))
            a.k_b_wide = max(a.k_b_wide, math.sqrt(np.sum(ww * b_sq)))
            m = a.inner.mask
            a.sup_theta = max(a.sup_theta, float(np.max((a_th * a.r5)[m])))
            a.sup_rz = max(a.sup_rz, float(np.max(((a_r + a_z) * a.r10)[m])))
            a.sup_rz_max = max(a.sup_rz_max,
                               float(np.max((np.maximum(a_r, a_z) * a.r10)[m])))
    out = {}
    for R, a in acc.items():
        out[R] = ProxyInputs(
            R, s0, a.k_b, math.sqrt(a.sq["theta"]), a.k_b_wide,
            math.sqrt(a.sq["theta_wide"]), math.sqrt(a.sq["v_wide"]),
            math.sqrt(a.sq["r_wide"]), math.sqrt(a.sq["z_wide"]),
            a.wide.clipped_fraction, a.sup_theta, a.sup_rz, a.sup_rz_max)
    return out


@dataclass
class BoundReport:
    """One ratio test: ``ratio = measured / proxy`` against ``ceiling``."""
    claim: str
    R: float
    regions: dict
    measured: float
    proxy: float
    ratio: float
    resolution: dict
    boundary_mode: str
    ceiling: float
    passed: bool
    inputs: ProxyInputs = None
    clipped_fraction: float = 0.0
    extra: dict = field(default_factory=dict)


def _ratio(measured, proxy):
    if measured == 0.0:
        return 0.0
    if proxy == 0.0:
        return math.inf
    return measured / proxy


def _resolution(grid):
    return {"n_r": grid.n_r, "n_z": grid.n_z, "dr": grid.dr, "dz": grid.dz}


@dataclass
class TheoremResult:
    """Per-radius reports plus the small-R trend of the proxy."""
    part: str
    reports: list
    proxy_non_increasing: bool

    def __iter__(self):
        return iter(self.reports)

    def __getitem__(self, i):
        return self.reports[i]

    def __len__(self):
        return len(self.reports)

    @property
    def ratios(self):
        return {r.R: r.ratio for r in self.reports}

    @property
    def passed(self):
        return self.proxy_non_increasing and all(r.passed for r in self.reports)


def _check(trajectory, radii, part, ceiling, inputs=None):
    radii = sorted(float(R) for R in radii)
    inputs = collect_inputs(trajectory, radii) if inputs is None else inputs
    grid = trajectory.grid
    reports = []
    for R in radii:
        d = inputs[R]
        if part == "i":
            measured, proxy = d.sup_theta, b1_proxy(d, R)
            regions = {"sup": parabolic(2, 3, R), "norms": parabolic(1, 4, R)}
            extra = {}
        else:
            measured, proxy = d.sup_rz, b2_proxy(d, R)
            regions = {"sup": parabolic(2, 3, R), "norms": parabolic(0.1, 10, R)}
            extra = {"sup_max_component": d.sup_rz_max}
        ratio = _ratio(measured, proxy)
        reports.append(BoundReport(
            f"theorem-{part}", R, regions, measured, proxy, ratio, _resolution(grid),
            trajectory.boundary_mode, ceiling, bool(math.isfinite(ratio) and ratio <= ceiling),
            d, d.clipped_fraction if part == "ii" else 0.0, extra))
    proxies = [r.proxy for r in reports]
    monotone = all(a <= b * (1 + 1e-12) for a, b in zip(proxies, proxies[1:]))
    return TheoremResult(part, reports, monotone)


def check_theorem_i(trajectory, radii=(0.25, 0.5, 1.0), ceiling=None, inputs=None):
    """``sup_{P_{2,3,R}} |w_theta| r**5 / B1(R)`` for each radius."""
    return _check(trajectory, radii, "i",
                  DEFAULT_CEILING["i"] if ceiling is None else ceiling, inputs)


def check_theorem_ii(trajectory, radii=(0.25, 0.5, 1.0), ceiling=None, inputs=None):
    """``sup_{P_{2,3,R}} (|w_r| + |w_z|) r**10 / B2(R)`` for each radius."""
    return _check(trajectory, radii, "ii",
                  DEFAULT_CEILING["ii"] if ceiling is None else ceiling, inputs)


def refinement_spread(coarse, fine):
    """Largest factor by which a ratio changes between two resolutions."""
    worst = 1.0
    for a, b in zip(coarse, fine):
        if a.R != b.R:
            raise ValueError("reports must list the same radii")
        if a.ratio == 0.0 and b.ratio == 0.0:
            continue
        if not (math.isfinite(a.ratio) and math.isfinite(b.ratio)) or min(a.ratio, b.ratio) == 0:
            return math.inf
        worst = max(worst, a.ratio / b.ratio, b.ratio / a.ratio)
    return worst
